#include "ftlr/tracker.hpp"

#include "ftlr/correlation.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace ftlr {

namespace {

constexpr std::array<std::pair<Variant, std::string_view>, 6> kVariantNames{{
    {Variant::Baseline, "baseline"},
    {Variant::Ftlr0, "ftlr_0"},
    {Variant::Ftlr1, "ftlr_1"},
    {Variant::Ftlr, "ftlr"},
    {Variant::FtlrSa, "ftlr_sa"},
    {Variant::FtlrGt, "ftlr_gt"},
}};

} // namespace

std::string_view to_string(Variant v)
{
    for (const auto& [variant, name] : kVariantNames)
        if (variant == v)
            return name;
    return "unknown";
}

Variant parse_variant(std::string_view text)
{
    for (const auto& [variant, name] : kVariantNames)
        if (name == text)
            return variant;
    throw std::invalid_argument("unknown variant '" + std::string(text) +
                                "' (expected baseline|ftlr_0|ftlr_1|ftlr|ftlr_sa|ftlr_gt)");
}

UpdateRule TrackerConfig::effective_update_rule() const
{
    if (variant == Variant::FtlrSa)
        return UpdateRule::Smooth;
    if (variant == Variant::Ftlr)
        return UpdateRule::Simple;
    return update_rule;
}

void TrackerConfig::validate() const
{
    auto fail = [](const std::string& what) { throw std::invalid_argument("config: " + what); };
    if (!(nndr_threshold > 1.0))
        fail("nndr_threshold must be > 1");
    if (!(alpha > 0.0 && alpha < 0.5))
        fail("alpha must lie in (0, 0.5)");
    if (!(default_area_factor >= 1.0))
        fail("default_area_factor must be >= 1");
    if (!(failure_area_multiplier >= 1.0))
        fail("failure_area_multiplier must be >= 1");
    if (min_separation < 1)
        fail("min_separation must be >= 1");
    if (!(motion_window_strength >= 0.0 && motion_window_strength <= 1.0))
        fail("motion_window_strength must lie in [0,1]");
    if (template_side < 8)
        fail("template_side must be >= 8");
    if (search_side <= template_side)
        fail("search_side must exceed template_side");
    if (!(template_context > 0.0 && search_context > template_context))
        fail("search_context must exceed template_context > 0");
    // Template and search patches must share one pixel scale.
    if (std::abs(search_side * template_context - template_side * search_context) > 1e-9 * search_side)
        fail("search_side/template_side must equal search_context/template_context");
    (void)make_extractor(extractor);
}

KeyValues TrackerConfig::to_key_values() const
{
    return {
        {"nndr_threshold", format_double(nndr_threshold)},
        {"alpha", format_double(alpha)},
        {"default_area_factor", format_double(default_area_factor)},
        {"failure_area_multiplier", format_double(failure_area_multiplier)},
        {"variant", std::string(to_string(variant))},
        {"update_rule", std::string(to_string(update_rule))},
        {"extractor", extractor},
        {"min_separation", std::to_string(min_separation)},
        {"motion_window_strength", format_double(motion_window_strength)},
        {"template_side", std::to_string(template_side)},
        {"search_side", std::to_string(search_side)},
        {"template_context", format_double(template_context)},
        {"search_context", format_double(search_context)},
    };
}

TrackerConfig TrackerConfig::from_key_values(const KeyValues& kv)
{
    return from_key_values(kv, TrackerConfig{});
}

TrackerConfig TrackerConfig::from_key_values(const KeyValues& kv, TrackerConfig c)
{
    auto get = [&](std::string_view key) -> const std::string* {
        const auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    if (auto v = get("nndr_threshold"))
        c.nndr_threshold = parse_double("nndr_threshold", *v);
    if (auto v = get("alpha"))
        c.alpha = parse_double("alpha", *v);
    if (auto v = get("default_area_factor"))
        c.default_area_factor = parse_double("default_area_factor", *v);
    if (auto v = get("failure_area_multiplier"))
        c.failure_area_multiplier = parse_double("failure_area_multiplier", *v);
    if (auto v = get("variant"))
        c.variant = parse_variant(*v);
    if (auto v = get("update_rule"))
        c.update_rule = parse_update_rule(*v);
    if (auto v = get("extractor"))
        c.extractor = *v;
    if (auto v = get("min_separation"))
        c.min_separation = parse_int("min_separation", *v);
    if (auto v = get("motion_window_strength"))
        c.motion_window_strength = parse_double("motion_window_strength", *v);
    if (auto v = get("template_side"))
        c.template_side = parse_int("template_side", *v);
    if (auto v = get("search_side"))
        c.search_side = parse_int("search_side", *v);
    if (auto v = get("template_context"))
        c.template_context = parse_double("template_context", *v);
    if (auto v = get("search_context"))
        c.search_context = parse_double("search_context", *v);
    return c;
}

int search_patch_side(const TrackerConfig& config, double area_factor)
{
    const double ideal = config.search_side * std::sqrt(area_factor);
    const int parity = config.template_side % 2;
    int side = static_cast<int>(std::lround(ideal));
    if (side % 2 != parity)
        side += (ideal > side) ? 1 : -1;
    return std::max(side, config.template_side + 1 + parity);
}

namespace {

struct SearchWindow {
    Patch patch;
    double cell_pixels = 1.0; ///< frame pixels per patch cell
};

// The crop is taken with the area factor implied by the rounded patch side,
// so template and search cells have identical frame size.
SearchWindow crop_search(const Frame& frame, const BoundingBox& box, double area_factor, const TrackerConfig& config)
{
    const int side = search_patch_side(config, area_factor);
    const double ratio = static_cast<double>(side) / config.search_side;
    const double effective_area = ratio * ratio;
    SearchWindow w;
    w.patch = crop_patch(frame, box, effective_area, side, config.search_context);
    w.cell_pixels = w.patch.region.w / side;
    return w;
}

Patch crop_template(const Frame& frame, const BoundingBox& box, const TrackerConfig& config)
{
    return crop_patch(frame, box, 1.0, config.template_side, config.template_context);
}

BoundingBox clamp_to_frame(BoundingBox box, const Frame& frame)
{
    const double cx = std::clamp(box.center_x(), 0.0, static_cast<double>(frame.width()));
    const double cy = std::clamp(box.center_y(), 0.0, static_cast<double>(frame.height()));
    return BoundingBox::from_center(cx, cy, box.w, box.h);
}

CensusChannels census_of(const Patch& p)
{
    return rotate_expand(census_transform(p));
}

} // namespace

TrackerState track_init(const Frame& frame, const BoundingBox& b0, const TrackerConfig& config)
{
    config.validate();
    if (!b0.valid())
        throw std::invalid_argument("track_init: initial box must have positive width and height");
    TrackerState state;
    state.extractor = make_extractor(config.extractor);
    const Patch templ = crop_template(frame, b0, config);
    state.model = QueryModel::init(state.extractor->extract(templ), config.alpha);
    state.current_box = b0;
    state.previous_box = b0;
    state.area_factor = config.default_area_factor;
    state.mode = Mode::Normal;
    state.frame_index = frame.index();
    if (config.uses_backup())
        state.backup_template = census_of(templ);
    return state;
}

StepOutcome track_step(TrackerState& state, const Frame& frame, const TrackerConfig& config,
                       const std::optional<BoundingBox>& gt, ResponseMap* response_out)
{
    if (config.variant == Variant::FtlrGt && !gt)
        throw TrackerError("ftlr_gt requires a ground-truth box for frame " + std::to_string(frame.index()));
    if (!state.extractor)
        throw TrackerError("track_step called on an uninitialized state");

    StepOutcome out;
    out.frame_index = frame.index();
    out.area_factor = state.area_factor;

    const SearchWindow search = crop_search(frame, state.current_box, state.area_factor, config);
    const FeatureMap search_features = state.extractor->extract(search.patch);
    if (search_features.channels != state.model.map().channels)
        throw TrackerError("feature channel count changed at frame " + std::to_string(frame.index()));
    ResponseMap response = cross_correlate(state.model.map(), search_features);
    response = apply_motion_window(response, config.motion_window_strength);

    out.peak_pair = top_two_peaks(response, config.min_separation);
    out.decision = nndr_decision(out.peak_pair, config.nndr_threshold);

    const BoundingBox& box = state.current_box;
    BoundingBox next = box;
    const bool follow_peak = config.variant == Variant::Baseline || out.decision.confident;

    if (follow_peak) {
        const double dx = (out.peak_pair.p1_pos.col - response.center_col) * search.cell_pixels;
        const double dy = (out.peak_pair.p1_pos.row - response.center_row) * search.cell_pixels;
        next = clamp_to_frame(BoundingBox::from_center(box.center_x() + dx, box.center_y() + dy, box.w, box.h), frame);
        const Patch templ = crop_template(frame, next, config);
        FeatureMap f = state.extractor->extract(templ);
        if (!f.same_shape(state.model.map()))
            throw TrackerError("feature shape drift at frame " + std::to_string(frame.index()));
        state.model.update(config.effective_update_rule(), f);
        state.area_factor = config.default_area_factor;
        state.mode = Mode::Normal;
        if (config.uses_backup())
            state.backup_template = census_of(templ);
    } else {
        switch (config.variant) {
        case Variant::Ftlr0:
            break;
        case Variant::Ftlr1: {
            const double cx = 2.0 * box.center_x() - state.previous_box.center_x();
            const double cy = 2.0 * box.center_y() - state.previous_box.center_y();
            next = clamp_to_frame(BoundingBox::from_center(cx, cy, box.w, box.h), frame);
            break;
        }
        case Variant::Ftlr:
        case Variant::FtlrSa: {
            // The backup always looks over the enlarged area.
            const double backup_area = config.default_area_factor * config.failure_area_multiplier;
            const SearchWindow wide = backup_area == state.area_factor
                                          ? search
                                          : crop_search(frame, box, backup_area, config);
            const BackupMatch m = census_backup_match(*state.backup_template, census_of(wide.patch));
            next = clamp_to_frame(BoundingBox::from_center(box.center_x() + m.dx * wide.cell_pixels,
                                                           box.center_y() + m.dy * wide.cell_pixels, box.w, box.h),
                                  frame);
            out.used_backup = true;
            break;
        }
        case Variant::FtlrGt:
            next = *gt;
            break;
        case Variant::Baseline:
            break;
        }
        state.area_factor = config.default_area_factor * config.failure_area_multiplier;
        state.mode = Mode::Failure;
        if (config.uses_backup())
            state.backup_template = census_of(crop_template(frame, next, config));
    }

    state.previous_box = box;
    state.current_box = next;
    state.frame_index = frame.index();
    out.box = next;
    out.mode = state.mode;
    if (response_out != nullptr)
        *response_out = std::move(response);
    return out;
}

SequenceRun run_sequence(std::span<const Frame> frames, const BoundingBox& b0, const TrackerConfig& config,
                         std::span<const BoundingBox> gt_track, const StepObserver& observer)
{
    if (frames.size() < 2)
        throw std::invalid_argument("run_sequence: need at least two frames");
    if (!gt_track.empty() && gt_track.size() != frames.size())
        throw std::invalid_argument("run_sequence: ground truth length does not match frame count");
    if (config.variant == Variant::FtlrGt && gt_track.empty())
        throw std::invalid_argument("run_sequence: ftlr_gt requires ground truth");

    using clock = std::chrono::steady_clock;
    SequenceRun run;
    run.trajectory.reserve(frames.size());
    run.trace.reserve(frames.size() - 1);
    ResponseMap response;
    clock::duration compute{};

    auto t0 = clock::now();
    TrackerState state = track_init(frames[0], b0, config);
    compute += clock::now() - t0;
    run.trajectory.push_back(b0);

    for (std::size_t i = 1; i < frames.size(); ++i) {
        std::optional<BoundingBox> gt;
        if (!gt_track.empty())
            gt = gt_track[i];
        t0 = clock::now();
        StepOutcome step;
        try {
            step = track_step(state, frames[i], config, gt, observer ? &response : nullptr);
        } catch (const std::invalid_argument& e) {
            throw TrackerError("frame " + std::to_string(frames[i].index()) + ": " + e.what());
        }
        compute += clock::now() - t0;
        if (observer)
            observer(step, response);
        run.trajectory.push_back(step.box);
        run.trace.push_back(std::move(step));
    }
    run.compute_seconds = std::chrono::duration<double>(compute).count();
    run.fps = run.compute_seconds > 0.0 ? static_cast<double>(frames.size()) / run.compute_seconds : 0.0;
    return run;
}

} // namespace ftlr
