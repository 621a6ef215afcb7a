#pragma once

#include "ftlr/config.hpp"
#include "ftlr/core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ftlr {

struct TrackerConfig;

struct JumpEvent {
    int frame = 0; ///< 1-based frame from which the displacement applies
    int dx = 0;
    int dy = 0;
};

struct OcclusionEvent {
    int start = 0;
    int duration = 0;
    double coverage = 0.0; ///< fraction of the target width hidden, from the left
};

struct GammaEvent {
    int frame = 0; ///< applies from this frame until the next gamma event
    double gamma = 1.0;
};

/// Recipe for a seeded synthetic sequence: a value-noise textured square
/// moving over a static value-noise background.
struct SynthSpec {
    std::string name = "synthetic";
    int frame_count = 100;
    int frame_width = 256;
    int frame_height = 256;
    int target_width = 32;
    int target_height = 32;
    int target_x = 112; ///< initial top-left corner, 0-based pixels
    int target_y = 112;
    int target_cell = 4;
    int background_cell = 8;
    std::uint64_t target_seed = 1;
    std::uint64_t background_seed = 2;
    double velocity_x = 0.0;
    double velocity_y = 0.0;
    std::vector<JumpEvent> jumps;
    std::vector<OcclusionEvent> occlusions;
    std::vector<GammaEvent> gammas;
    double noise_sigma = 0.01;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument naming every offending field.
    void validate() const;

    /// Ground-truth box (0-based) of the target on 1-based frame k.
    [[nodiscard]] BoundingBox target_box(int frame) const;

    [[nodiscard]] KeyValues to_key_values() const;
    static SynthSpec from_key_values(const KeyValues& kv);
};

/// In-memory sequence: frames plus one ground-truth box per frame.
struct Sequence {
    std::string name;
    std::vector<Frame> frames;
    std::vector<BoundingBox> gt;
};

/// Deterministic: equal SynthSpecs give bit-identical frames. Frames
/// are quantized to 8 bits so that writing and reloading is lossless.
Sequence generate_synthetic(const SynthSpec& spec);

/// Frame radius reachable by the tracker at area factor `area_factor`:
/// half of (search region side - template region side), in frame pixels.
double search_radius(const TrackerConfig& config, double box_w, double box_h, double area_factor);

/// `count` seeded specs with a single jump each. The target drifts at
/// `speed` px/frame; at `jump_frame` it jumps along its motion direction by
/// `jump_ratio` times the default search radius.
std::vector<SynthSpec> make_jump_suite(int count, std::uint64_t seed, const TrackerConfig& config,
                                       int frame_count = 100, int jump_frame = 50, double jump_ratio = 1.5,
                                       double speed = 1.0);

} // namespace ftlr
