#pragma once

#include "gsde/test_function.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace gsde {

/// Finitely supported probability measure on R^n.
///
/// Weights are normalized at construction; a weight sum further than 1e-9
/// from one is rejected instead of silently renormalized, to surface
/// upstream bugs.
class WeightedMeasure {
public:
    /// `flat_points` holds `weights.size()` points of `dim` coordinates each.
    WeightedMeasure(std::vector<double> flat_points, std::size_t dim,
                    std::vector<double> weights);

    /// Point mass at x.
    static WeightedMeasure dirac(std::span<const double> x);
    static WeightedMeasure dirac1d(double x);

    /// Uniform weights on the given points.
    static WeightedMeasure uniform_on(std::vector<double> flat_points, std::size_t dim);

    std::size_t size() const { return weights_.size(); }
    std::size_t dimension() const { return dim_; }
    std::span<const double> point(std::size_t i) const {
        return {points_.data() + i * dim_, dim_};
    }
    double weight(std::size_t i) const { return weights_[i]; }
    std::span<const double> flat_points() const { return points_; }
    std::span<const double> weights() const { return weights_; }

    /// Weighted mean of phi over the support.
    double mean_of(const TestFunction& phi) const;

private:
    std::size_t dim_;
    std::vector<double> points_;
    std::vector<double> weights_;
};

} // namespace gsde
