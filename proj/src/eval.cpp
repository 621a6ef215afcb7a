#include "ftlr/eval.hpp"

#include "ftlr/config.hpp"
#include "ftlr/image_io.hpp"
#include "ftlr/plot.hpp"

#include <cstdio>
#include <algorithm>
#include <cctype>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace ftlr {

std::vector<BoundingBox> parse_groundtruth(std::istream& in, std::string_view source_name)
{
    std::vector<BoundingBox> boxes;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        for (char& ch : line)
            if (ch == ',' || ch == '\t' || ch == '\r')
                ch = ' ';
        std::istringstream fields(line);
        std::vector<std::string> tokens;
        for (std::string tok; fields >> tok;)
            tokens.push_back(tok);
        if (tokens.empty())
            continue;
        auto fail = [&] {
            throw IngestError(std::string(source_name) + ":" + std::to_string(line_no) + ": cannot parse '" + line +
                              "' as x,y,w,h");
        };
        if (tokens.size() != 4)
            fail();
        double v[4];
        try {
            for (int i = 0; i < 4; ++i)
                v[i] = parse_double("groundtruth", tokens[i]);
        } catch (const std::invalid_argument&) {
            fail();
        }
        boxes.push_back({v[0] - 1.0, v[1] - 1.0, v[2], v[3]});
    }
    return boxes;
}

namespace {

bool is_image_extension(std::string ext)
{
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".jpg" || ext == ".jpeg" || ext == ".png" || ext == ".pgm" || ext == ".bmp";
}

bool numeric_stem(const fs::path& p, long& number)
{
    const std::string stem = p.stem().string();
    if (stem.empty() || !std::all_of(stem.begin(), stem.end(), [](unsigned char c) { return std::isdigit(c); }))
        return false;
    number = std::stol(stem);
    return true;
}

} // namespace

SequenceDataset load_otb_sequence(const fs::path& directory, bool require_gt)
{
    const fs::path img_dir = directory / "img";
    const fs::path gt_path = directory / "groundtruth_rect.txt";
    if (!fs::is_directory(img_dir))
        throw IngestError(directory.string() + ": missing img/ folder");
    std::ifstream gt_in(gt_path);
    const bool has_gt = static_cast<bool>(gt_in);
    if (!has_gt && require_gt)
        throw IngestError(directory.string() + ": missing groundtruth_rect.txt");

    std::vector<std::pair<long, fs::path>> frames;
    for (const auto& entry : fs::directory_iterator(img_dir)) {
        long number = 0;
        if (entry.is_regular_file() && is_image_extension(entry.path().extension().string()) &&
            numeric_stem(entry.path(), number))
            frames.emplace_back(number, entry.path());
    }
    std::sort(frames.begin(), frames.end());

    SequenceDataset ds;
    ds.name = directory.filename().string();
    if (ds.name.empty())
        ds.name = directory.parent_path().filename().string();
    for (auto& [number, path] : frames)
        ds.frame_paths.push_back(std::move(path));
    if (has_gt)
        ds.gt_boxes = parse_groundtruth(gt_in, gt_path.string());
    if (has_gt && ds.frame_paths.size() != ds.gt_boxes.size())
        throw IngestError(directory.string() + ": " + std::to_string(ds.frame_paths.size()) + " frames but " +
                          std::to_string(ds.gt_boxes.size()) + " ground-truth lines");
    if (ds.frame_paths.size() < 2)
        throw IngestError(directory.string() + ": need at least two frames");
    return ds;
}

Sequence load_sequence(const SequenceDataset& dataset)
{
    Sequence seq;
    seq.name = dataset.name;
    seq.gt = dataset.gt_boxes;
    seq.frames.reserve(dataset.frame_paths.size());
    for (std::size_t i = 0; i < dataset.frame_paths.size(); ++i)
        seq.frames.push_back(read_frame(dataset.frame_paths[i], static_cast<int>(i) + 1));
    return seq;
}

SequenceDataset write_otb_sequence(const Sequence& sequence, const fs::path& directory)
{
    const fs::path img_dir = directory / "img";
    fs::create_directories(img_dir);
    SequenceDataset ds;
    ds.name = sequence.name;
    for (std::size_t i = 0; i < sequence.frames.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "%04zu.png", i + 1);
        const fs::path p = img_dir / name;
        write_frame(p, sequence.frames[i]);
        ds.frame_paths.push_back(p);
    }
    std::ofstream gt(directory / "groundtruth_rect.txt");
    if (!gt)
        throw std::runtime_error("cannot write ground truth in " + directory.string());
    for (const BoundingBox& b : sequence.gt)
        gt << format_double(b.x + 1.0) << ',' << format_double(b.y + 1.0) << ',' << format_double(b.w) << ','
           << format_double(b.h) << '\n';
    ds.gt_boxes = sequence.gt;
    return ds;
}

std::vector<fs::path> find_sequences(const fs::path& root)
{
    std::vector<fs::path> dirs;
    if (!fs::is_directory(root))
        return dirs;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory() && fs::exists(entry.path() / "groundtruth_rect.txt"))
            dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());
    return dirs;
}

std::string_view to_string(Protocol p)
{
    return p == Protocol::Ope ? "ope" : "tre";
}

Protocol parse_protocol(std::string_view text)
{
    if (text == "ope" || text == "OPE")
        return Protocol::Ope;
    if (text == "tre" || text == "TRE")
        return Protocol::Tre;
    throw std::invalid_argument("unknown protocol '" + std::string(text) + "' (expected ope|tre)");
}

void FrameScores::append(std::span<const BoundingBox> predicted, std::span<const BoundingBox> reference)
{
    if (predicted.size() != reference.size())
        throw std::invalid_argument("FrameScores: trajectory and reference lengths differ");
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        ious.push_back(iou(predicted[i], reference[i]));
        center_errors.push_back(center_error(predicted[i], reference[i]));
    }
}

EvalResult summarize_scores(const FrameScores& scores, double fps, Protocol protocol)
{
    EvalResult r;
    r.protocol = protocol;
    r.fps = fps;
    r.frame_count = scores.ious.size();
    r.success_curve.assign(kSuccessPoints, 0.0);
    r.precision_curve.assign(kPrecisionPoints, 0.0);
    if (r.frame_count == 0)
        return r;
    const double n = static_cast<double>(r.frame_count);
    for (int i = 0; i < kSuccessPoints; ++i) {
        const double t = 0.05 * i;
        const auto hits = std::count_if(scores.ious.begin(), scores.ious.end(), [t](double v) { return v > t; });
        r.success_curve[i] = static_cast<double>(hits) / n;
    }
    for (int d = 0; d < kPrecisionPoints; ++d) {
        const auto hits = std::count_if(scores.center_errors.begin(), scores.center_errors.end(),
                                        [d](double e) { return e <= d; });
        r.precision_curve[d] = static_cast<double>(hits) / n;
    }
    double sum = 0.0;
    for (double v : r.success_curve)
        sum += v;
    r.success_auc = sum / kSuccessPoints;
    r.precision_at_20 = r.precision_curve[20];
    return r;
}

std::vector<int> tre_start_frames(int length, int segments)
{
    if (segments < 1)
        throw std::invalid_argument("tre: segments must be >= 1");
    std::vector<int> starts;
    for (int i = 0; i < segments; ++i) {
        const int s = static_cast<int>(static_cast<long long>(i) * length / segments);
        if (starts.empty() || starts.back() != s)
            starts.push_back(s);
    }
    return starts;
}

EvalResult run_tre(const Sequence& sequence, const TrackerConfig& config, int segments)
{
    const int length = static_cast<int>(sequence.frames.size());
    if (sequence.gt.size() != sequence.frames.size())
        throw std::invalid_argument("tre: ground truth length does not match frame count");
    FrameScores scores;
    std::vector<int> skipped;
    std::size_t frames_run = 0;
    double seconds = 0.0;
    for (int start : tre_start_frames(length, segments)) {
        if (length - start < 2) {
            skipped.push_back(start);
            continue;
        }
        const std::span<const Frame> frames(sequence.frames.data() + start, sequence.frames.size() - start);
        const std::span<const BoundingBox> gt(sequence.gt.data() + start, sequence.gt.size() - start);
        const SequenceRun run = run_sequence(frames, gt.front(), config, gt);
        scores.append(run.trajectory, gt);
        frames_run += frames.size();
        seconds += run.compute_seconds;
    }
    EvalResult r = summarize_scores(scores, seconds > 0.0 ? frames_run / seconds : 0.0, Protocol::Tre);
    r.skipped_starts = std::move(skipped);
    return r;
}

EvalResult run_ope(const Sequence& sequence, const TrackerConfig& config)
{
    if (sequence.gt.size() != sequence.frames.size())
        throw std::invalid_argument("ope: ground truth length does not match frame count");
    const SequenceRun run = run_sequence(sequence.frames, sequence.gt.front(), config, sequence.gt);
    FrameScores scores;
    scores.append(run.trajectory, sequence.gt);
    return summarize_scores(scores, run.fps, Protocol::Ope);
}

EvalResult run_ope(const SequenceDataset& dataset, const TrackerConfig& config)
{
    return run_ope(load_sequence(dataset), config);
}

EvalResult run_tre(const SequenceDataset& dataset, const TrackerConfig& config, int segments)
{
    return run_tre(load_sequence(dataset), config, segments);
}

Summary aggregate_results(std::span<const EvalResult> results)
{
    if (results.empty())
        throw std::invalid_argument("aggregate_results: no results");
    Summary s;
    s.protocol = results.front().protocol;
    for (const EvalResult& r : results) {
        if (r.protocol != s.protocol)
            throw std::invalid_argument("aggregate_results: cannot mix OPE and TRE results");
        s.success_auc += r.success_auc;
        s.precision_at_20 += r.precision_at_20;
        s.fps += r.fps;
    }
    const double n = static_cast<double>(results.size());
    s.sequences = results.size();
    s.success_auc /= n;
    s.precision_at_20 /= n;
    s.fps /= n;
    return s;
}

namespace {

template <typename LoadFn>
std::vector<EvalRecord> evaluate_jobs(std::size_t sequence_count, std::span<const TrackerConfig> configs,
                                      Protocol protocol, int segments, int workers, LoadFn&& with_sequence)
{
    const std::size_t jobs = sequence_count * configs.size();
    std::vector<EvalRecord> records(jobs);
    std::vector<std::exception_ptr> errors(jobs);
    const int threads = std::max(1, workers);

#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::size_t j = 0; j < jobs; ++j) {
        const std::size_t si = j / configs.size();
        const TrackerConfig& cfg = configs[j % configs.size()];
        try {
            with_sequence(si, [&](const Sequence& seq) {
                records[j].sequence = seq.name;
                records[j].variant = std::string(to_string(cfg.variant));
                records[j].result = protocol == Protocol::Ope ? run_ope(seq, cfg) : run_tre(seq, cfg, segments);
            });
        } catch (...) {
            errors[j] = std::current_exception();
        }
    }
    for (const std::exception_ptr& e : errors)
        if (e)
            std::rethrow_exception(e);
    std::stable_sort(records.begin(), records.end(),
                     [](const EvalRecord& a, const EvalRecord& b) { return a.sequence < b.sequence; });
    return records;
}

} // namespace

std::vector<EvalRecord> evaluate_suite(std::span<const Sequence> sequences, std::span<const TrackerConfig> configs,
                                       Protocol protocol, int segments, int workers)
{
    return evaluate_jobs(sequences.size(), configs, protocol, segments, workers,
                         [&](std::size_t i, auto&& fn) { fn(sequences[i]); });
}

std::vector<EvalRecord> evaluate_datasets(std::span<const SequenceDataset> datasets,
                                          std::span<const TrackerConfig> configs, Protocol protocol, int segments,
                                          int workers)
{
    return evaluate_jobs(datasets.size(), configs, protocol, segments, workers,
                         [&](std::size_t i, auto&& fn) { fn(load_sequence(datasets[i])); });
}

namespace {

void write_table(std::ostream& out, std::span<const EvalRecord> records, bool with_fps)
{
    out << "sequence,variant,protocol,success_auc,precision_at_20" << (with_fps ? ",fps\n" : "\n");
    auto row = [&](const std::string& seq, const std::string& variant, Protocol p, double auc, double prec,
                   double fps) {
        out << seq << ',' << variant << ',' << to_string(p) << ',' << format_double(auc) << ','
            << format_double(prec);
        if (with_fps)
            out << ',' << format_double(fps);
        out << '\n';
    };
    std::map<std::string, std::vector<EvalResult>> by_variant;
    std::vector<std::string> variant_order;
    for (const EvalRecord& r : records) {
        row(r.sequence, r.variant, r.result.protocol, r.result.success_auc, r.result.precision_at_20, r.result.fps);
        if (!by_variant.contains(r.variant))
            variant_order.push_back(r.variant);
        by_variant[r.variant].push_back(r.result);
    }
    for (const std::string& v : variant_order) {
        const Summary s = aggregate_results(by_variant[v]);
        row("ALL", v, s.protocol, s.success_auc, s.precision_at_20, s.fps);
    }
}

} // namespace

void write_summary_csv(std::ostream& out, std::span<const EvalRecord> records)
{
    write_table(out, records, false);
}

void write_timing_csv(std::ostream& out, std::span<const EvalRecord> records)
{
    write_table(out, records, true);
}

void write_curves_csv(std::ostream& out, std::span<const EvalRecord> records)
{
    out << "sequence,variant,protocol,kind,threshold,value\n";
    for (const CurveRow& row : curve_rows(records))
        out << row.sequence << ',' << row.variant << ',' << row.protocol << ',' << row.kind << ','
            << format_double(row.threshold) << ',' << format_double(row.value) << '\n';
}

} // namespace ftlr
