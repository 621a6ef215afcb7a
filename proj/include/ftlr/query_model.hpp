#pragma once

#include "ftlr/features.hpp"

#include <string_view>

namespace ftlr {

enum class UpdateRule {
    Simple, ///< Q_n = (1 - a) Q_{n-1} + a F_n
    Smooth, ///< Q_n = (1 - 0.5/n - a) Q_{n-1} + (0.5/n + a) F_n
};

std::string_view to_string(UpdateRule rule);
UpdateRule parse_update_rule(std::string_view text);

/// Weight given to the incoming map by the simple running average.
constexpr double simple_blend_coefficient(double alpha) { return alpha; }

/// Weight given to the incoming map number m (m >= 2) by the smooth average.
constexpr double smooth_blend_coefficient(int m, double alpha) { return 0.5 / m + alpha; }

/// Running-average template Q_n. `count()` is the number of maps absorbed so
/// far, including the initial one.
class QueryModel {
public:
    QueryModel() = default;

    /// Q_1 = F_1 for both update rules. alpha must lie in (0, 0.5).
    static QueryModel init(FeatureMap first, double alpha);

    void update_simple(const FeatureMap& f);
    void update_smooth(const FeatureMap& f);
    void update(UpdateRule rule, const FeatureMap& f);

    [[nodiscard]] const FeatureMap& map() const { return map_; }
    [[nodiscard]] int count() const { return count_; }
    [[nodiscard]] double alpha() const { return alpha_; }

    /// Restores a model from a dumped map (see save_feature_map).
    static QueryModel restore(FeatureMap map, int count, double alpha);

private:
    QueryModel(FeatureMap map, int count, double alpha) : map_(std::move(map)), count_(count), alpha_(alpha) {}
    void blend(const FeatureMap& f, double coefficient);

    FeatureMap map_;
    int count_ = 1;
    double alpha_ = 0.005;
};

} // namespace ftlr
