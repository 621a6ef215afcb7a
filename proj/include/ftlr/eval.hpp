#pragma once

#include "ftlr/core.hpp"
#include "ftlr/synth.hpp"
#include "ftlr/tracker.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ftlr {

/// A sequence on disk in OTB layout: `img/NNNN.{jpg,png,...}` plus
/// `groundtruth_rect.txt`. Boxes are stored 0-based.
struct SequenceDataset {
    std::string name;
    std::vector<std::filesystem::path> frame_paths;
    std::vector<BoundingBox> gt_boxes;
    std::vector<std::string> attributes;
};

/// Parses x,y,w,h lines (comma, tab or whitespace separated, 1-based corner)
/// into 0-based boxes. Errors carry the line number.
std::vector<BoundingBox> parse_groundtruth(std::istream& in, std::string_view source_name = "groundtruth_rect.txt");

/// With `require_gt` false a missing groundtruth_rect.txt yields empty gt_boxes.
SequenceDataset load_otb_sequence(const std::filesystem::path& directory, bool require_gt = true);

/// Decodes every frame of the dataset.
Sequence load_sequence(const SequenceDataset& dataset);

/// Writes frames as PNG and ground truth with the 1-based corner convention.
SequenceDataset write_otb_sequence(const Sequence& sequence, const std::filesystem::path& directory);

/// Subdirectories of `root` holding a groundtruth_rect.txt, sorted by name.
std::vector<std::filesystem::path> find_sequences(const std::filesystem::path& root);

enum class Protocol { Ope, Tre };
std::string_view to_string(Protocol p);
Protocol parse_protocol(std::string_view text);

inline constexpr int kSuccessPoints = 21;   // IoU thresholds 0.00 .. 1.00 step 0.05
inline constexpr int kPrecisionPoints = 51; // pixel thresholds 0 .. 50 step 1

struct EvalResult {
    double success_auc = 0.0;
    double precision_at_20 = 0.0;
    std::vector<double> success_curve;
    std::vector<double> precision_curve;
    double fps = 0.0;
    Protocol protocol = Protocol::Ope;
    std::size_t frame_count = 0;
    /// TRE start frames (0-based) that were too close to the end to run.
    std::vector<int> skipped_starts;
};

/// Per-frame overlap and center error between predicted and reference boxes.
struct FrameScores {
    std::vector<double> ious;
    std::vector<double> center_errors;

    void append(std::span<const BoundingBox> predicted, std::span<const BoundingBox> reference);
};

/// Success counts IoU > t (strict); precision counts error <= d.
EvalResult summarize_scores(const FrameScores& scores, double fps, Protocol protocol);

/// One run from gt[0], scored on every frame of the trajectory.
EvalResult run_ope(const Sequence& sequence, const TrackerConfig& config);
EvalResult run_ope(const SequenceDataset& dataset, const TrackerConfig& config);

/// 0-based restart frames floor(i * length / segments), i < segments.
std::vector<int> tre_start_frames(int length, int segments);

/// Restarts from evenly spaced frames, each run to the end; scores are pooled.
EvalResult run_tre(const Sequence& sequence, const TrackerConfig& config, int segments = 20);
EvalResult run_tre(const SequenceDataset& dataset, const TrackerConfig& config, int segments = 20);

struct EvalRecord {
    std::string sequence;
    std::string variant;
    EvalResult result;
};

struct Summary {
    Protocol protocol = Protocol::Ope;
    std::size_t sequences = 0;
    double success_auc = 0.0;
    double precision_at_20 = 0.0;
    double fps = 0.0;
};

/// Arithmetic means over per-sequence results of one protocol.
Summary aggregate_results(std::span<const EvalResult> results);

/// Evaluates every (sequence, config) pair. Jobs are spread over `workers`
/// threads; records come back ordered by sequence name, then config order.
std::vector<EvalRecord> evaluate_suite(std::span<const Sequence> sequences, std::span<const TrackerConfig> configs,
                                       Protocol protocol, int segments = 20, int workers = 1);

/// Same, but sequences are decoded from disk inside each job.
std::vector<EvalRecord> evaluate_datasets(std::span<const SequenceDataset> datasets,
                                          std::span<const TrackerConfig> configs, Protocol protocol,
                                          int segments = 20, int workers = 1);

/// sequence,variant,protocol,success_auc,precision_at_20; per-sequence rows
/// followed by one "ALL" row per variant.
void write_summary_csv(std::ostream& out, std::span<const EvalRecord> records);
/// Same layout with an fps column. Kept apart because timings vary run to run.
void write_timing_csv(std::ostream& out, std::span<const EvalRecord> records);
/// sequence,variant,protocol,kind,threshold,value (kind = success|precision).
void write_curves_csv(std::ostream& out, std::span<const EvalRecord> records);

} // namespace ftlr
