#include "ftlr/synth.hpp"

#include "ftlr/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ftlr {

namespace {

// splitmix64: small, portable, and fully specified, so sequences do not
// depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double normal()
    {
        // Box-Muller, one sample per call.
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

std::uint64_t mix(std::uint64_t a, std::uint64_t b)
{
    return Rng(a * 0x100000001B3ull ^ (b + 0x632BE59BD9B4E019ull)).next();
}

/// Bilinear value noise over a lattice with spacing `cell`.
std::vector<float> value_noise(int width, int height, int cell, std::uint64_t seed, float lo, float hi)
{
    const int gw = width / cell + 2;
    const int gh = height / cell + 2;
    Rng rng(seed);
    std::vector<double> lattice(static_cast<std::size_t>(gw) * gh);
    for (double& v : lattice)
        v = rng.uniform();
    std::vector<float> out(static_cast<std::size_t>(width) * height);
    for (int y = 0; y < height; ++y) {
        const double gy = (y + 0.5) / cell;
        const int y0 = static_cast<int>(gy);
        const double fy = gy - y0;
        for (int x = 0; x < width; ++x) {
            const double gx = (x + 0.5) / cell;
            const int x0 = static_cast<int>(gx);
            const double fx = gx - x0;
            auto L = [&](int yy, int xx) { return lattice[static_cast<std::size_t>(yy) * gw + xx]; };
            const double top = L(y0, x0) + fx * (L(y0, x0 + 1) - L(y0, x0));
            const double bot = L(y0 + 1, x0) + fx * (L(y0 + 1, x0 + 1) - L(y0 + 1, x0));
            out[static_cast<std::size_t>(y) * width + x] = static_cast<float>(lo + (hi - lo) * (top + fy * (bot - top)));
        }
    }
    return out;
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty())
            parts.push_back(item);
    return parts;
}

} // namespace

BoundingBox SynthSpec::target_box(int frame) const
{
    double x = target_x + velocity_x * (frame - 1);
    double y = target_y + velocity_y * (frame - 1);
    for (const JumpEvent& j : jumps)
        if (frame >= j.frame) {
            x += j.dx;
            y += j.dy;
        }
    return {std::round(x), std::round(y), static_cast<double>(target_width), static_cast<double>(target_height)};
}

void SynthSpec::validate() const
{
    std::vector<std::string> problems;
    if (frame_count < 2)
        problems.push_back("frame_count must be >= 2");
    if (frame_width < 8 || frame_height < 8)
        problems.push_back("frame_width/frame_height must be >= 8");
    if (target_width < 4 || target_height < 4)
        problems.push_back("target_width/target_height must be >= 4");
    if (target_cell < 1 || background_cell < 1)
        problems.push_back("target_cell/background_cell must be >= 1");
    if (!(noise_sigma >= 0.0))
        problems.push_back("noise_sigma must be >= 0");
    for (const JumpEvent& j : jumps)
        if (j.frame < 2 || j.frame > frame_count)
            problems.push_back("jumps: frame " + std::to_string(j.frame) + " outside [2, frame_count]");
    for (const OcclusionEvent& o : occlusions) {
        if (o.start < 1 || o.start > frame_count || o.duration < 1)
            problems.push_back("occlusions: event at frame " + std::to_string(o.start) + " outside the sequence");
        if (!(o.coverage > 0.0 && o.coverage <= 1.0))
            problems.push_back("occlusions: coverage must lie in (0,1]");
    }
    for (const GammaEvent& g : gammas) {
        if (g.frame < 1 || g.frame > frame_count)
            problems.push_back("gammas: frame " + std::to_string(g.frame) + " outside the sequence");
        if (!(g.gamma > 0.0))
            problems.push_back("gammas: exponent must be positive");
    }
    if (problems.empty()) {
        for (int k = 1; k <= frame_count; ++k) {
            const BoundingBox b = target_box(k);
            if (b.x < 0 || b.y < 0 || b.x + b.w > frame_width || b.y + b.h > frame_height) {
                problems.push_back("target leaves the frame at frame " + std::to_string(k) +
                                   " (jumps/velocity out of bounds)");
                break;
            }
        }
    }
    if (!problems.empty()) {
        std::string msg = "invalid synthetic spec:";
        for (const auto& p : problems)
            msg += "\n  " + p;
        throw std::invalid_argument(msg);
    }
}

KeyValues SynthSpec::to_key_values() const
{
    KeyValues kv{
        {"name", name},
        {"frame_count", std::to_string(frame_count)},
        {"frame_width", std::to_string(frame_width)},
        {"frame_height", std::to_string(frame_height)},
        {"target_width", std::to_string(target_width)},
        {"target_height", std::to_string(target_height)},
        {"target_x", std::to_string(target_x)},
        {"target_y", std::to_string(target_y)},
        {"target_cell", std::to_string(target_cell)},
        {"background_cell", std::to_string(background_cell)},
        {"target_seed", std::to_string(target_seed)},
        {"background_seed", std::to_string(background_seed)},
        {"velocity_x", format_double(velocity_x)},
        {"velocity_y", format_double(velocity_y)},
        {"noise_sigma", format_double(noise_sigma)},
        {"seed", std::to_string(seed)},
    };
    std::string s;
    for (const JumpEvent& j : jumps)
        s += (s.empty() ? "" : ";") + std::to_string(j.frame) + ":" + std::to_string(j.dx) + ":" + std::to_string(j.dy);
    kv["jumps"] = s;
    s.clear();
    for (const OcclusionEvent& o : occlusions)
        s += (s.empty() ? "" : ";") + std::to_string(o.start) + ":" + std::to_string(o.duration) + ":" +
             format_double(o.coverage);
    kv["occlusions"] = s;
    s.clear();
    for (const GammaEvent& g : gammas)
        s += (s.empty() ? "" : ";") + std::to_string(g.frame) + ":" + format_double(g.gamma);
    kv["gammas"] = s;
    return kv;
}

SynthSpec SynthSpec::from_key_values(const KeyValues& kv)
{
    SynthSpec s;
    auto get = [&](std::string_view key) -> const std::string* {
        const auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    auto get_u64 = [&](std::string_view key, std::uint64_t& dst) {
        if (auto v = get(key)) {
            try {
                dst = std::stoull(*v);
            } catch (const std::exception&) {
                throw std::invalid_argument(std::string(key) + ": '" + *v + "' is not an unsigned integer");
            }
        }
    };
    auto get_int = [&](std::string_view key, int& dst) {
        if (auto v = get(key))
            dst = parse_int(key, *v);
    };
    auto get_dbl = [&](std::string_view key, double& dst) {
        if (auto v = get(key))
            dst = parse_double(key, *v);
    };
    if (auto v = get("name"))
        s.name = *v;
    get_int("frame_count", s.frame_count);
    get_int("frame_width", s.frame_width);
    get_int("frame_height", s.frame_height);
    get_int("target_width", s.target_width);
    get_int("target_height", s.target_height);
    s.target_x = (s.frame_width - s.target_width) / 2;
    s.target_y = (s.frame_height - s.target_height) / 2;
    get_int("target_x", s.target_x);
    get_int("target_y", s.target_y);
    get_int("target_cell", s.target_cell);
    get_int("background_cell", s.background_cell);
    get_u64("target_seed", s.target_seed);
    get_u64("background_seed", s.background_seed);
    get_dbl("velocity_x", s.velocity_x);
    get_dbl("velocity_y", s.velocity_y);
    get_dbl("noise_sigma", s.noise_sigma);
    get_u64("seed", s.seed);

    auto fields = [](const std::string& key, const std::string& item, std::size_t expected) {
        auto f = split(item, ':');
        if (f.size() != expected)
            throw std::invalid_argument(key + ": malformed event '" + item + "'");
        return f;
    };
    if (auto v = get("jumps"))
        for (const auto& item : split(*v, ';')) {
            const auto f = fields("jumps", item, 3);
            s.jumps.push_back({parse_int("jumps", f[0]), parse_int("jumps", f[1]), parse_int("jumps", f[2])});
        }
    if (auto v = get("occlusions"))
        for (const auto& item : split(*v, ';')) {
            const auto f = fields("occlusions", item, 3);
            s.occlusions.push_back(
                {parse_int("occlusions", f[0]), parse_int("occlusions", f[1]), parse_double("occlusions", f[2])});
        }
    if (auto v = get("gammas"))
        for (const auto& item : split(*v, ';')) {
            const auto f = fields("gammas", item, 2);
            s.gammas.push_back({parse_int("gammas", f[0]), parse_double("gammas", f[1])});
        }
    return s;
}

Sequence generate_synthetic(const SynthSpec& spec)
{
    spec.validate();
    const int W = spec.frame_width, H = spec.frame_height;
    const int tw = spec.target_width, th = spec.target_height;
    const std::vector<float> background = value_noise(W, H, spec.background_cell, spec.background_seed, 0.15f, 0.85f);
    const std::vector<float> target = value_noise(tw, th, spec.target_cell, spec.target_seed, 0.0f, 1.0f);

    Sequence seq;
    seq.name = spec.name;
    seq.frames.reserve(spec.frame_count);
    seq.gt.reserve(spec.frame_count);
    for (int k = 1; k <= spec.frame_count; ++k) {
        const BoundingBox box = spec.target_box(k);
        std::vector<float> img = background;
        const int bx = static_cast<int>(box.x), by = static_cast<int>(box.y);
        int hidden_cols = 0;
        for (const OcclusionEvent& o : spec.occlusions)
            if (k >= o.start && k < o.start + o.duration)
                hidden_cols = std::max(hidden_cols, static_cast<int>(std::lround(o.coverage * tw)));
        for (int y = 0; y < th; ++y)
            for (int x = 0; x < tw; ++x)
                img[static_cast<std::size_t>(by + y) * W + bx + x] =
                    x < hidden_cols ? 0.5f : target[static_cast<std::size_t>(y) * tw + x];

        double gamma = 1.0;
        int gamma_from = 0;
        for (const GammaEvent& g : spec.gammas)
            if (k >= g.frame && g.frame >= gamma_from) {
                gamma = g.gamma;
                gamma_from = g.frame;
            }

        Rng noise(mix(spec.seed, static_cast<std::uint64_t>(k)));
        std::vector<float> px(img.size());
        for (std::size_t i = 0; i < img.size(); ++i) {
            double v = img[i];
            if (gamma != 1.0)
                v = std::pow(v, gamma);
            if (spec.noise_sigma > 0.0)
                v += spec.noise_sigma * noise.normal();
            v = std::clamp(v, 0.0, 1.0);
            px[i] = static_cast<float>(std::lround(v * 255.0)) / 255.0f;
        }
        seq.frames.emplace_back(W, H, std::move(px), k);
        seq.gt.push_back(box);
    }
    return seq;
}

double search_radius(const TrackerConfig& config, double box_w, double box_h, double area_factor)
{
    const double cell = config.template_context * std::sqrt(box_w * box_h) / config.template_side;
    return 0.5 * (search_patch_side(config, area_factor) - config.template_side) * cell;
}

std::vector<SynthSpec> make_jump_suite(int count, std::uint64_t seed, const TrackerConfig& config, int frame_count,
                                       int jump_frame, double jump_ratio, double speed)
{
    std::vector<SynthSpec> suite;
    suite.reserve(count);
    for (int i = 0; i < count; ++i) {
        Rng rng(mix(seed, static_cast<std::uint64_t>(i)));
        SynthSpec s;
        s.name = "jump_" + std::string(i < 10 ? "0" : "") + std::to_string(i);
        s.frame_count = frame_count;
        // Fine target texture: a template shifted by several pixels no longer
        // correlates, so a target pushed past the search edge leaves no peak.
        s.target_cell = 2;
        s.background_cell = 4;
        s.target_seed = rng.next();
        s.background_seed = rng.next();
        s.seed = rng.next();
        const double theta = 2.0 * std::numbers::pi * rng.uniform();
        const double ux = std::cos(theta), uy = std::sin(theta);
        const double jump = jump_ratio * search_radius(config, s.target_width, s.target_height,
                                                       config.default_area_factor);
        s.velocity_x = speed * ux;
        s.velocity_y = speed * uy;
        s.jumps.push_back({jump_frame, static_cast<int>(std::lround(jump * ux)), static_cast<int>(std::lround(jump * uy))});
        // Center the whole path in the frame.
        const double travel = speed * (frame_count - 1) + jump;
        s.target_x = static_cast<int>(std::lround(0.5 * (s.frame_width - s.target_width) - 0.5 * travel * ux));
        s.target_y = static_cast<int>(std::lround(0.5 * (s.frame_height - s.target_height) - 0.5 * travel * uy));
        suite.push_back(std::move(s));
    }
    return suite;
}

} // namespace ftlr
