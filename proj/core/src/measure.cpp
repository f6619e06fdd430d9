#include "gsde/measure.hpp"

#include "gsde/errors.hpp"
#include "gsde/parallel.hpp"

#include <cmath>

namespace gsde {

WeightedMeasure::WeightedMeasure(std::vector<double> flat_points, std::size_t dim,
                                 std::vector<double> weights)
    : dim_(dim), points_(std::move(flat_points)), weights_(std::move(weights)) {
    if (dim_ == 0) throw InputError("WeightedMeasure: dimension must be positive");
    if (weights_.empty()) throw InputError("WeightedMeasure: empty support");
    if (points_.size() != weights_.size() * dim_)
        throw InputError("WeightedMeasure: points/weights length mismatch");
    double sum = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw InputError("WeightedMeasure: weights must be nonnegative and finite");
        sum += w;
    }
    for (double p : points_)
        if (!std::isfinite(p)) throw InputError("WeightedMeasure: non-finite point");
    if (std::abs(sum - 1.0) > 1e-9)
        throw InputError("WeightedMeasure: weights sum to " + std::to_string(sum) +
                         ", expected 1 within 1e-9");
    for (double& w : weights_) w /= sum;
}

WeightedMeasure WeightedMeasure::dirac(std::span<const double> x) {
    return WeightedMeasure(std::vector<double>(x.begin(), x.end()), x.size(), {1.0});
}

WeightedMeasure WeightedMeasure::dirac1d(double x) {
    return WeightedMeasure({x}, 1, {1.0});
}

WeightedMeasure WeightedMeasure::uniform_on(std::vector<double> flat_points, std::size_t dim) {
    if (dim == 0 || flat_points.size() % dim != 0)
        throw InputError("WeightedMeasure: flat point array not divisible by dimension");
    const std::size_t count = flat_points.size() / dim;
    std::vector<double> w(count, 1.0 / static_cast<double>(count));
    return WeightedMeasure(std::move(flat_points), dim, std::move(w));
}

double WeightedMeasure::mean_of(const TestFunction& phi) const {
    if (phi.dimension() != 0 && phi.dimension() != dim_)
        throw InputError("WeightedMeasure: test function expects dimension " +
                         std::to_string(phi.dimension()) + ", measure has " +
                         std::to_string(dim_));
    std::vector<double> terms(size());
    for (std::size_t i = 0; i < size(); ++i) terms[i] = weights_[i] * phi(point(i));
    return pairwise_sum(terms);
}

} // namespace gsde
