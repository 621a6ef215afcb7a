#pragma once

#include "ftlr/census.hpp"
#include "ftlr/config.hpp"
#include "ftlr/core.hpp"
#include "ftlr/features.hpp"
#include "ftlr/peaks.hpp"
#include "ftlr/query_model.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ftlr {

enum class Variant {
    Baseline, ///< ignores the confidence gate
    Ftlr0,    ///< box frozen on ambiguous frames
    Ftlr1,    ///< linear extrapolation from the two previous centers
    Ftlr,     ///< census backup tracker, simple running average
    FtlrSa,   ///< census backup tracker, smooth running average
    FtlrGt,   ///< ground truth injected on ambiguous frames (upper bound)
};

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view text);

enum class Mode { Normal, Failure };

struct TrackerConfig {
    double nndr_threshold = 1.2;
    double alpha = 0.005;
    double default_area_factor = 1.0;
    double failure_area_multiplier = 2.0;
    Variant variant = Variant::FtlrSa;
    UpdateRule update_rule = UpdateRule::Simple;
    std::string extractor = "grayscale";
    int min_separation = 3;
    double motion_window_strength = 0.0;
    int template_side = 64;
    int search_side = 128;
    double template_context = 1.0;
    double search_context = 2.0;

    /// FTLR_SA forces the smooth rule, FTLR the simple one.
    [[nodiscard]] UpdateRule effective_update_rule() const;
    [[nodiscard]] bool uses_backup() const { return variant == Variant::Ftlr || variant == Variant::FtlrSa; }

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    [[nodiscard]] KeyValues to_key_values() const;
    /// Unknown keys are ignored so the same file can carry run-level options.
    static TrackerConfig from_key_values(const KeyValues& kv);
    static TrackerConfig from_key_values(const KeyValues& kv, TrackerConfig base);
};

struct TrackerState {
    BoundingBox current_box;
    BoundingBox previous_box;
    double area_factor = 1.0;
    Mode mode = Mode::Normal;
    QueryModel model;
    int frame_index = 1;
    std::shared_ptr<const FeatureExtractor> extractor;
    /// Census channels of the last frame cropped at current_box (backup variants only).
    std::optional<CensusChannels> backup_template;
};

struct StepOutcome {
    int frame_index = 0;
    BoundingBox box;
    ConfidenceDecision decision;
    bool used_backup = false;
    PeakPair peak_pair;
    double area_factor = 1.0; ///< search area used on this frame
    Mode mode = Mode::Normal; ///< mode after this frame
};

/// Search patch side for a given area factor: search_side * sqrt(area_factor),
/// rounded to the parity of template_side so the response has a center cell.
/// The frame region grows with the patch, so the pixel scale never changes.
int search_patch_side(const TrackerConfig& config, double area_factor);

TrackerState track_init(const Frame& frame, const BoundingBox& b0, const TrackerConfig& config);

/// One iteration of the two-mode loop. `gt` is required for FTLR_GT and
/// ignored otherwise. `response_out`, when given, receives the response map
/// that fed the confidence gate.
StepOutcome track_step(TrackerState& state, const Frame& frame, const TrackerConfig& config,
                       const std::optional<BoundingBox>& gt = std::nullopt, ResponseMap* response_out = nullptr);

struct SequenceRun {
    std::vector<BoundingBox> trajectory; ///< trajectory[0] == b0
    std::vector<StepOutcome> trace;      ///< one per frame after the first
    double fps = 0.0;                    ///< frames / compute seconds (init included)
    double compute_seconds = 0.0;
};

using StepObserver = std::function<void(const StepOutcome&, const ResponseMap&)>;

SequenceRun run_sequence(std::span<const Frame> frames, const BoundingBox& b0, const TrackerConfig& config,
                         std::span<const BoundingBox> gt_track = {}, const StepObserver& observer = {});

} // namespace ftlr
