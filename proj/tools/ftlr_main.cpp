// ftlr: command-line front end (run, eval, synth, calibrate-nndr, plot).

#include "ftlr/config.hpp"
#include "ftlr/correlation.hpp"
#include "ftlr/eval.hpp"
#include "ftlr/plot.hpp"
#include "ftlr/synth.hpp"
#include "ftlr/tracker.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace ftlr;

namespace {

// Stable process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1, // unexpected runtime failure (I/O, internal)
    kExitUsage = 2,   // bad flags, bad config values, missing inputs
    kExitIngest = 3,  // unreadable or malformed sequence data
    kExitTracker = 4, // tracker failed while processing frames
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TrackerFlags {
    std::string config_path;
    std::vector<std::string> variants;
    std::optional<double> nndr;
    std::optional<double> alpha;
    std::optional<std::string> update_rule;
    std::optional<double> area_multiplier;
    std::optional<std::string> extractor;
    std::string out;
};

void add_tracker_flags(CLI::App& cmd, TrackerFlags& f, bool multi_variant)
{
    cmd.add_option("--config", f.config_path, "key=value config file (default: $FTLR_CONFIG)");
    if (multi_variant)
        cmd.add_option("--variant", f.variants, "tracker variant(s), repeat or comma-separate")->delimiter(',');
    else
        cmd.add_option("--variant", f.variants, "tracker variant")->expected(1);
    cmd.add_option("--nndr", f.nndr, "NNDR confidence threshold (> 1)");
    cmd.add_option("--alpha", f.alpha, "template update factor in (0, 0.5)");
    cmd.add_option("--update-rule", f.update_rule, "simple | smooth");
    cmd.add_option("--area-multiplier", f.area_multiplier, "search area multiplier in failure mode");
    cmd.add_option("--extractor", f.extractor, "feature extractor: grayscale | census");
    cmd.add_option("--out", f.out, "output directory")->required();
}

KeyValues base_key_values(const TrackerFlags& f)
{
    std::string path = f.config_path;
    if (path.empty())
        if (const char* env = std::getenv("FTLR_CONFIG"); env != nullptr && *env != '\0')
            path = env;
    if (path.empty())
        return {};
    try {
        return load_key_values(path);
    } catch (const IngestError& e) {
        throw UsageError(e.what());
    }
}

void apply_tracker_flags(KeyValues& kv, const TrackerFlags& f)
{
    if (f.nndr)
        kv["nndr_threshold"] = format_double(*f.nndr);
    if (f.alpha)
        kv["alpha"] = format_double(*f.alpha);
    if (f.update_rule)
        kv["update_rule"] = *f.update_rule;
    if (f.area_multiplier)
        kv["failure_area_multiplier"] = format_double(*f.area_multiplier);
    if (f.extractor)
        kv["extractor"] = *f.extractor;
}

TrackerConfig resolve_tracker(const KeyValues& kv)
{
    try {
        TrackerConfig cfg = TrackerConfig::from_key_values(kv);
        cfg.validate();
        return cfg;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

std::string lookup(const KeyValues& kv, std::string_view key, std::string fallback = {})
{
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

int lookup_int(const KeyValues& kv, std::string_view key, int fallback)
{
    const auto it = kv.find(key);
    if (it == kv.end())
        return fallback;
    try {
        return parse_int(key, it->second);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> items;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty())
            items.push_back(item);
    return items;
}

std::string join_list(const std::vector<std::string>& items)
{
    std::string out;
    for (const std::string& s : items)
        out += (out.empty() ? "" : ",") + s;
    return out;
}

std::string absolute_string(const std::string& p)
{
    return fs::absolute(p).lexically_normal().string();
}

void write_resolved(const fs::path& out_dir, const KeyValues& kv)
{
    fs::create_directories(out_dir);
    std::ofstream f(out_dir / "resolved_config.txt");
    if (!f)
        throw std::runtime_error("cannot write " + (out_dir / "resolved_config.txt").string());
    write_key_values(f, kv);
}

std::ofstream open_output(const fs::path& path)
{
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot write " + path.string());
    return f;
}

// Boxes in output files use the 1-based corner convention of groundtruth_rect.txt.
void write_box(std::ostream& out, const BoundingBox& b)
{
    out << format_double(b.x + 1.0) << ',' << format_double(b.y + 1.0) << ',' << format_double(b.w) << ','
        << format_double(b.h);
}

// ---- run -------------------------------------------------------------------

struct RunArgs {
    TrackerFlags tracker;
    std::string sequence;
    std::string init_box;
    bool dump_response = false;
};

BoundingBox parse_box(const std::string& text)
{
    std::istringstream in(text);
    const auto boxes = parse_groundtruth(in, "--init");
    if (boxes.size() != 1)
        throw UsageError("--init expects x,y,w,h");
    return boxes.front();
}

int cmd_run(const RunArgs& a)
{
    KeyValues kv = base_key_values(a.tracker);
    apply_tracker_flags(kv, a.tracker);
    if (!a.tracker.variants.empty())
        kv["variant"] = a.tracker.variants.front();
    if (!a.sequence.empty())
        kv["sequence"] = absolute_string(a.sequence);
    if (!a.init_box.empty())
        kv["init"] = a.init_box;
    if (a.dump_response)
        kv["dump_response"] = "true";
    const TrackerConfig cfg = resolve_tracker(kv);
    const std::string sequence = lookup(kv, "sequence");
    if (sequence.empty())
        throw UsageError("run: no sequence directory given");
    const bool dump = lookup(kv, "dump_response", "false") == "true";

    const SequenceDataset ds = load_otb_sequence(sequence, false);
    const bool has_gt = !ds.gt_boxes.empty();
    if (cfg.variant == Variant::FtlrGt && !has_gt)
        throw UsageError("run: variant ftlr_gt needs groundtruth_rect.txt in " + sequence);
    const std::string init = lookup(kv, "init");
    if (init.empty() && !has_gt)
        throw UsageError("run: no ground truth and no --init box for " + sequence);
    const BoundingBox b0 = init.empty() ? ds.gt_boxes.front() : parse_box(init);

    KeyValues resolved = cfg.to_key_values();
    resolved["command"] = "run";
    resolved["sequence"] = sequence;
    resolved["dump_response"] = dump ? "true" : "false";
    if (!init.empty())
        resolved["init"] = init;

    const fs::path out_dir = a.tracker.out;
    write_resolved(out_dir, resolved);

    const Sequence seq = load_sequence(ds);
    StepObserver observer;
    if (dump) {
        fs::create_directories(out_dir / "responses");
        observer = [&](const StepOutcome& o, const ResponseMap& r) {
            char name[32];
            std::snprintf(name, sizeof name, "response_%04d.csv", o.frame_index);
            write_response_csv(out_dir / "responses" / name, r);
        };
    }
    const SequenceRun run =
        run_sequence(seq.frames, b0, cfg, std::span<const BoundingBox>(seq.gt), observer);

    std::ofstream traj = open_output(out_dir / "trajectory.csv");
    traj << "frame_index,x,y,w,h,confident,ratio,used_backup\n";
    traj << 1 << ',';
    write_box(traj, run.trajectory.front());
    traj << ",1,inf,0\n";
    std::ofstream trace = open_output(out_dir / "trace.csv");
    trace << "frame_index,confident,degenerate,ratio,p1_row,p1_col,p1_value,p2_row,p2_col,p2_value,used_backup,"
             "area_factor,mode\n";
    for (const StepOutcome& o : run.trace) {
        traj << o.frame_index << ',';
        write_box(traj, o.box);
        traj << ',' << (o.decision.confident ? 1 : 0) << ',' << format_double(o.decision.ratio) << ','
             << (o.used_backup ? 1 : 0) << '\n';
        const PeakPair& p = o.peak_pair;
        trace << o.frame_index << ',' << (o.decision.confident ? 1 : 0) << ',' << (o.decision.degenerate ? 1 : 0)
              << ',' << format_double(o.decision.ratio) << ',' << p.p1_pos.row << ',' << p.p1_pos.col << ','
              << format_double(p.p1_val) << ',';
        if (p.p2_pos)
            trace << p.p2_pos->row << ',' << p.p2_pos->col << ',' << format_double(*p.p2_val);
        else
            trace << ",,";
        trace << ',' << (o.used_backup ? 1 : 0) << ',' << format_double(o.area_factor) << ','
              << (o.mode == Mode::Normal ? "normal" : "failure") << '\n';
    }
    std::cout << seq.name << ": " << seq.frames.size() << " frames, " << run.fps << " fps\n";
    return kExitOk;
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
    TrackerFlags tracker;
    std::string dataset;
    std::string protocol;
    std::optional<int> segments;
    std::optional<int> workers;
};

int cmd_eval(const EvalArgs& a)
{
    KeyValues kv = base_key_values(a.tracker);
    apply_tracker_flags(kv, a.tracker);
    if (!a.tracker.variants.empty())
        kv["variants"] = join_list(a.tracker.variants);
    if (!a.dataset.empty())
        kv["dataset"] = absolute_string(a.dataset);
    if (!a.protocol.empty())
        kv["protocol"] = a.protocol;
    if (a.segments)
        kv["segments"] = std::to_string(*a.segments);
    if (a.workers)
        kv["workers"] = std::to_string(*a.workers);

    const std::string dataset = lookup(kv, "dataset");
    if (dataset.empty())
        throw UsageError("eval: no dataset directory given");
    std::vector<std::string> variant_names = split_list(lookup(kv, "variants", lookup(kv, "variant", "ftlr_sa")));
    Protocol protocol;
    try {
        protocol = parse_protocol(lookup(kv, "protocol", "ope"));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const int segments = lookup_int(kv, "segments", 20);
    const int workers = lookup_int(kv, "workers", 1);
    if (segments < 1)
        throw UsageError("segments must be >= 1");
    if (workers < 1)
        throw UsageError("workers must be >= 1");

    std::vector<TrackerConfig> configs;
    for (const std::string& name : variant_names) {
        KeyValues one = kv;
        one["variant"] = name;
        configs.push_back(resolve_tracker(one));
    }
    if (configs.empty())
        throw UsageError("eval: empty variant list");

    const std::vector<fs::path> dirs = find_sequences(dataset);
    if (dirs.empty())
        throw IngestError("eval: no sequences found under " + dataset);

    // Tracker keys are shared; the variant list replaces the single variant.
    KeyValues resolved = configs.front().to_key_values();
    resolved.erase("variant");
    resolved["command"] = "eval";
    resolved["dataset"] = dataset;
    resolved["variants"] = join_list(variant_names);
    resolved["protocol"] = std::string(to_string(protocol));
    resolved["segments"] = std::to_string(segments);
    resolved["workers"] = std::to_string(workers);
    const fs::path out_dir = a.tracker.out;
    write_resolved(out_dir, resolved);

    std::vector<SequenceDataset> datasets;
    for (const fs::path& d : dirs)
        datasets.push_back(load_otb_sequence(d));
    const std::vector<EvalRecord> records = evaluate_datasets(datasets, configs, protocol, segments, workers);

    std::ofstream summary = open_output(out_dir / "summary.csv");
    write_summary_csv(summary, records);
    std::ofstream timing = open_output(out_dir / "timing.csv");
    write_timing_csv(timing, records);
    std::ofstream curves = open_output(out_dir / "curves.csv");
    write_curves_csv(curves, records);
    std::cout << "evaluated " << datasets.size() << " sequences x " << configs.size() << " variants ("
              << to_string(protocol) << ")\n";
    return kExitOk;
}

// ---- synth -----------------------------------------------------------------

struct SynthArgs {
    std::string spec_path;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> jump_suite;
    std::string out;
};

int cmd_synth(const SynthArgs& a)
{
    TrackerFlags flags;
    flags.config_path = a.config_path;
    KeyValues kv = base_key_values(flags);
    if (!a.spec_path.empty()) {
        try {
            for (auto& [k, v] : load_key_values(a.spec_path))
                kv[k] = v;
        } catch (const IngestError& e) {
            throw UsageError(e.what());
        }
    }
    if (a.jump_suite)
        kv["jump_suite"] = std::to_string(*a.jump_suite);
    if (a.seed)
        kv["seed"] = std::to_string(*a.seed);

    const fs::path out_dir = a.out;
    const int suite = lookup_int(kv, "jump_suite", 0);
    if (suite > 0) {
        const TrackerConfig cfg = resolve_tracker(kv);
        std::uint64_t seed = 0;
        try {
            seed = std::stoull(lookup(kv, "seed", "0"));
        } catch (const std::exception&) {
            throw UsageError("seed must be a non-negative integer");
        }
        KeyValues resolved = cfg.to_key_values();
        resolved["command"] = "synth";
        resolved["jump_suite"] = std::to_string(suite);
        resolved["seed"] = std::to_string(seed);
        write_resolved(out_dir, resolved);
        for (const SynthSpec& spec : make_jump_suite(suite, seed, cfg))
            write_otb_sequence(generate_synthetic(spec), out_dir / spec.name);
        std::cout << "wrote " << suite << " jump sequences to " << out_dir.string() << "\n";
        return kExitOk;
    }

    SynthSpec spec;
    try {
        spec = SynthSpec::from_key_values(kv);
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    KeyValues resolved = spec.to_key_values();
    resolved["command"] = "synth";
    write_resolved(out_dir, resolved);
    write_otb_sequence(generate_synthetic(spec), out_dir / spec.name);
    std::cout << "wrote " << spec.frame_count << " frames to " << (out_dir / spec.name).string() << "\n";
    return kExitOk;
}

// ---- calibrate-nndr --------------------------------------------------------

struct CalibrateArgs {
    TrackerFlags tracker;
    std::optional<int> count;
    std::optional<std::uint64_t> seed;
    std::string thresholds;
    std::optional<int> workers;
};

int cmd_calibrate(const CalibrateArgs& a)
{
    KeyValues kv = base_key_values(a.tracker);
    apply_tracker_flags(kv, a.tracker);
    if (!a.tracker.variants.empty())
        kv["variant"] = a.tracker.variants.front();
    if (a.count)
        kv["count"] = std::to_string(*a.count);
    if (a.seed)
        kv["seed"] = std::to_string(*a.seed);
    if (!a.thresholds.empty())
        kv["thresholds"] = a.thresholds;
    if (a.workers)
        kv["workers"] = std::to_string(*a.workers);

    const TrackerConfig base = resolve_tracker(kv);
    const int count = lookup_int(kv, "count", 20);
    const int workers = lookup_int(kv, "workers", 1);
    std::uint64_t seed = 0;
    try {
        seed = std::stoull(lookup(kv, "seed", "7"));
    } catch (const std::exception&) {
        throw UsageError("seed must be a non-negative integer");
    }
    std::vector<double> thresholds;
    try {
        for (const std::string& t : split_list(lookup(kv, "thresholds", "1.05,1.1,1.2,1.3,1.5,2,3")))
            thresholds.push_back(parse_double("thresholds", t));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (count < 1 || thresholds.empty())
        throw UsageError("calibrate-nndr: need count >= 1 and at least one threshold");
    std::vector<std::string> threshold_text;
    std::vector<TrackerConfig> configs;
    for (double t : thresholds) {
        TrackerConfig c = base;
        c.nndr_threshold = t;
        try {
            c.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        configs.push_back(c);
        threshold_text.push_back(format_double(t));
    }

    KeyValues resolved = base.to_key_values();
    resolved.erase("nndr_threshold");
    resolved["command"] = "calibrate-nndr";
    resolved["count"] = std::to_string(count);
    resolved["seed"] = std::to_string(seed);
    resolved["thresholds"] = join_list(threshold_text);
    resolved["workers"] = std::to_string(workers);
    const fs::path out_dir = a.tracker.out;
    write_resolved(out_dir, resolved);

    std::vector<Sequence> suite;
    for (const SynthSpec& spec : make_jump_suite(count, seed, base))
        suite.push_back(generate_synthetic(spec));

    // Failure-mode entries are counted over all tracked frames; a sequence
    // counts as recovered when its final box overlaps the target (IoU > 0.5).
    const std::size_t jobs = configs.size() * suite.size();
    std::vector<int> entries(jobs), frames(jobs), recovered(jobs);
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, workers))
    for (std::size_t j = 0; j < jobs; ++j) {
        const TrackerConfig& cfg = configs[j / suite.size()];
        const Sequence& seq = suite[j % suite.size()];
        const SequenceRun run = run_sequence(seq.frames, seq.gt.front(), cfg, seq.gt);
        for (const StepOutcome& o : run.trace)
            entries[j] += o.decision.confident ? 0 : 1;
        frames[j] = static_cast<int>(run.trace.size());
        recovered[j] = iou(run.trajectory.back(), seq.gt.back()) > 0.5 ? 1 : 0;
    }

    std::ofstream csv = open_output(out_dir / "calibration.csv");
    csv << "threshold,failure_entry_rate,recovery_rate\n";
    for (std::size_t t = 0; t < configs.size(); ++t) {
        long e = 0, f = 0, r = 0;
        for (std::size_t s = 0; s < suite.size(); ++s) {
            const std::size_t j = t * suite.size() + s;
            e += entries[j];
            f += frames[j];
            r += recovered[j];
        }
        csv << threshold_text[t] << ',' << format_double(static_cast<double>(e) / static_cast<double>(f)) << ','
            << format_double(static_cast<double>(r) / static_cast<double>(suite.size())) << '\n';
    }
    std::cout << "calibrated " << configs.size() << " thresholds on " << suite.size() << " sequences\n";
    return kExitOk;
}

// ---- plot ------------------------------------------------------------------

struct PlotArgs {
    std::string curves;
    std::string config_path;
    std::string out;
};

int cmd_plot(const PlotArgs& a)
{
    TrackerFlags flags;
    flags.config_path = a.config_path;
    KeyValues kv = base_key_values(flags);
    if (!a.curves.empty())
        kv["curves"] = absolute_string(a.curves);
    const std::string curves = lookup(kv, "curves");
    if (curves.empty())
        throw UsageError("plot: no curves.csv given");
    std::ifstream in(curves);
    if (!in)
        throw IngestError("cannot open " + curves);
    const std::vector<CurveRow> rows = read_curves_csv(in);
    if (rows.empty())
        throw IngestError(curves + ": no curve rows");
    write_resolved(a.out, {{"command", "plot"}, {"curves", curves}});
    write_curve_svgs(a.out, rows);
    std::cout << "wrote success_plot.svg and precision_plot.svg to " << a.out << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Confidence-gated correlation tracker with failure recovery"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "expand help for all subcommands");
    app.footer("Exit codes: 0 ok, 1 runtime failure, 2 usage/config error, 3 input data error, 4 tracker error.");

    RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "track one sequence and write trajectory.csv and trace.csv");
    run->add_option("sequence", run_args.sequence, "sequence directory (img/ + groundtruth_rect.txt)");
    run->add_option("--init", run_args.init_box, "initial box x,y,w,h (1-based) when there is no ground truth");
    run->add_flag("--dump-response", run_args.dump_response, "write every response map as CSV");
    add_tracker_flags(*run, run_args.tracker, false);

    EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand("eval", "evaluate variants on every sequence under a dataset root");
    eval->add_option("dataset", eval_args.dataset, "dataset root holding sequence directories");
    eval->add_option("--protocol", eval_args.protocol, "ope | tre");
    eval->add_option("--segments", eval_args.segments, "TRE restart count");
    eval->add_option("--workers", eval_args.workers, "parallel sequence jobs");
    add_tracker_flags(*eval, eval_args.tracker, true);

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic sequence in OTB layout");
    synth->add_option("spec", synth_args.spec_path, "key=value sequence spec");
    synth->add_option("--config", synth_args.config_path, "key=value config file (default: $FTLR_CONFIG)");
    synth->add_option("--seed", synth_args.seed, "noise seed (or suite seed with --jump-suite)");
    synth->add_option("--jump-suite", synth_args.jump_suite, "write N seeded single-jump sequences instead");
    synth->add_option("--out", synth_args.out, "output directory")->required();

    CalibrateArgs cal_args;
    CLI::App* cal = app.add_subcommand("calibrate-nndr", "sweep NNDR thresholds on the synthetic jump suite");
    cal->add_option("--count", cal_args.count, "number of jump sequences");
    cal->add_option("--seed", cal_args.seed, "suite seed");
    cal->add_option("--thresholds", cal_args.thresholds, "comma-separated thresholds");
    cal->add_option("--workers", cal_args.workers, "parallel jobs");
    add_tracker_flags(*cal, cal_args.tracker, false);

    PlotArgs plot_args;
    CLI::App* plot = app.add_subcommand("plot", "draw success and precision plots from curves.csv");
    plot->add_option("curves", plot_args.curves, "curves.csv written by eval");
    plot->add_option("--config", plot_args.config_path, "key=value config file (default: $FTLR_CONFIG)");
    plot->add_option("--out", plot_args.out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed())
            return cmd_run(run_args);
        if (eval->parsed())
            return cmd_eval(eval_args);
        if (synth->parsed())
            return cmd_synth(synth_args);
        if (cal->parsed())
            return cmd_calibrate(cal_args);
        if (plot->parsed())
            return cmd_plot(plot_args);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IngestError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitIngest;
    } catch (const TrackerError& e) {
        std::cerr << "tracker error: " << e.what() << "\n";
        return kExitTracker;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}
