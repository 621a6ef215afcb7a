#include "ftlr/query_model.hpp"

#include <cassert>
#include <stdexcept>
#include <string>

namespace ftlr {

std::string_view to_string(UpdateRule rule)
{
    return rule == UpdateRule::Simple ? "simple" : "smooth";
}

UpdateRule parse_update_rule(std::string_view text)
{
    if (text == "simple")
        return UpdateRule::Simple;
    if (text == "smooth")
        return UpdateRule::Smooth;
    throw std::invalid_argument("unknown update rule '" + std::string(text) + "' (expected simple|smooth)");
}

namespace {

void check_alpha(double alpha)
{
    if (!(alpha > 0.0 && alpha < 0.5))
        throw std::invalid_argument("query model: alpha must lie in (0, 0.5)");
}

} // namespace

QueryModel QueryModel::init(FeatureMap first, double alpha)
{
    check_alpha(alpha);
    if (first.values.empty() || !first.all_finite())
        throw std::invalid_argument("query model: initial feature map must be non-empty and finite");
    return QueryModel(std::move(first), 1, alpha);
}

QueryModel QueryModel::restore(FeatureMap map, int count, double alpha)
{
    if (count < 1)
        throw std::invalid_argument("query model: count must be >= 1");
    QueryModel model = init(std::move(map), alpha);
    model.count_ = count;
    return model;
}

void QueryModel::blend(const FeatureMap& f, double coefficient)
{
    if (!f.same_shape(map_))
        throw std::invalid_argument("query model: feature map shape mismatch");
    if (!f.all_finite())
        throw std::invalid_argument("query model: non-finite feature values");
    assert(coefficient >= 0.0 && coefficient <= 1.0);
    // q + c (f - q): equal inputs stay bit-identical.
    for (std::size_t i = 0; i < map_.values.size(); ++i)
        map_.values[i] += coefficient * (f.values[i] - map_.values[i]);
    ++count_;
}

void QueryModel::update_simple(const FeatureMap& f)
{
    blend(f, simple_blend_coefficient(alpha_));
}

void QueryModel::update_smooth(const FeatureMap& f)
{
    blend(f, smooth_blend_coefficient(count_ + 1, alpha_));
}

void QueryModel::update(UpdateRule rule, const FeatureMap& f)
{
    if (rule == UpdateRule::Simple)
        update_simple(f);
    else
        update_smooth(f);
}

} // namespace ftlr
