#include "gsde/volatility.hpp"

#include "gsde/errors.hpp"

#include <algorithm>
#include <cmath>

namespace gsde {

double VolMatrix::gram(std::size_t i, std::size_t j) const {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) s += at(i, k) * at(j, k);
    return s;
}

double VolMatrix::quad(std::span<const double> v, std::span<const double> w) const {
    // v^T (theta theta^T) w = (theta^T v) . (theta^T w)
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        double tv = 0.0, tw = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            tv += at(i, k) * v[i];
            tw += at(i, k) * w[i];
        }
        s += tv * tw;
    }
    return s;
}

VolatilityUncertainty VolatilityUncertainty::interval(double sigma_min, double sigma_max) {
    if (!(0.0 <= sigma_min) || !(sigma_min <= sigma_max) || !std::isfinite(sigma_max))
        throw InputError("VolatilityUncertainty: need 0 <= sigma_min <= sigma_max < inf");
    VolatilityUncertainty u;
    u.interval_ = true;
    u.dim_ = 1;
    u.sigma_min_ = sigma_min;
    u.sigma_max_ = sigma_max;
    return u;
}

VolatilityUncertainty VolatilityUncertainty::finite(std::vector<VolMatrix> thetas) {
    if (thetas.empty()) throw InputError("VolatilityUncertainty: empty matrix family");
    VolatilityUncertainty u;
    u.interval_ = false;
    u.dim_ = thetas.front().dim;
    for (const auto& t : thetas) {
        if (t.dim != u.dim_ || t.a.size() != t.dim * t.dim)
            throw InputError("VolatilityUncertainty: inconsistent matrix dimensions");
        for (double x : t.a)
            if (!std::isfinite(x)) throw InputError("VolatilityUncertainty: non-finite entry");
    }
    u.thetas_ = std::move(thetas);
    return u;
}

bool VolatilityUncertainty::singleton() const {
    if (interval_) return sigma_min_ == sigma_max_;
    return std::all_of(thetas_.begin(), thetas_.end(),
                       [&](const VolMatrix& t) { return t == thetas_.front(); });
}

double VolatilityUncertainty::sigma_sq_plus(std::span<const double> a) const {
    if (a.size() != dim_) throw InputError("sigma_sq_plus: direction dimension mismatch");
    if (interval_) return sigma_max_ * sigma_max_ * a[0] * a[0];
    double best = thetas_.front().quad(a, a);
    for (const auto& t : thetas_) best = std::max(best, t.quad(a, a));
    return best;
}

double VolatilityUncertainty::sigma_sq_minus(std::span<const double> a) const {
    if (a.size() != dim_) throw InputError("sigma_sq_minus: direction dimension mismatch");
    if (interval_) return sigma_min_ * sigma_min_ * a[0] * a[0];
    double best = thetas_.front().quad(a, a);
    for (const auto& t : thetas_) best = std::min(best, t.quad(a, a));
    return best;
}

double g_function(const VolatilityUncertainty& u, std::span<const double> A, std::size_t dim) {
    if (dim != u.dimension()) throw InputError("g_function: matrix dimension mismatch");
    if (A.size() != dim * dim) throw InputError("g_function: matrix size mismatch");
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i + 1; j < dim; ++j)
            if (A[i * dim + j] != A[j * dim + i])
                throw InputError("g_function: matrix must be symmetric");
    if (u.is_interval()) return g_function(u, A[0]);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& t : u.thetas()) {
        double tr = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) tr += t.gram(i, j) * A[j * dim + i];
        best = std::max(best, tr);
    }
    return 0.5 * best;
}

double g_function(const VolatilityUncertainty& u, double alpha) {
    if (u.dimension() != 1) throw InputError("g_function: scalar form needs dimension one");
    if (!u.is_interval()) {
        const double a[1] = {alpha};
        return g_function(u, std::span<const double>{a, 1}, 1);
    }
    const double plus = std::max(alpha, 0.0);
    const double minus = std::max(-alpha, 0.0);
    return 0.5 * (u.sigma_max() * u.sigma_max() * plus - u.sigma_min() * u.sigma_min() * minus);
}

ControlGrid ControlGrid::uniform(const VolatilityUncertainty& u, std::size_t levels,
                                 Policy policy) {
    if (levels == 0) throw InputError("ControlGrid: need at least one level");
    std::vector<VolMatrix> controls;
    if (u.is_interval()) {
        if (levels == 1 || u.sigma_min() == u.sigma_max()) {
            controls.push_back(VolMatrix::scalar(u.sigma_max()));
        } else {
            controls.reserve(levels);
            for (std::size_t i = 0; i < levels; ++i) {
                const double s = u.sigma_min() + (u.sigma_max() - u.sigma_min()) *
                                                     static_cast<double>(i) /
                                                     static_cast<double>(levels - 1);
                controls.push_back(VolMatrix::scalar(s));
            }
        }
    } else {
        controls = u.thetas();
    }
    return explicit_controls(u, std::move(controls), policy);
}

ControlGrid ControlGrid::explicit_controls(const VolatilityUncertainty& u,
                                           std::vector<VolMatrix> controls, Policy policy) {
    if (controls.empty()) throw InputError("ControlGrid: empty control list");
    for (const auto& c : controls) {
        if (c.dim != u.dimension())
            throw InputError("ControlGrid: control dimension mismatch");
        if (u.is_interval()) {
            const double s = c.a[0];
            if (!(u.sigma_min() - 1e-12 <= s && s <= u.sigma_max() + 1e-12))
                throw InputError("ControlGrid: control outside [sigma_min, sigma_max]");
        } else if (std::find(u.thetas().begin(), u.thetas().end(), c) ==
                   u.thetas().end()) {
            throw InputError("ControlGrid: control not a member of the matrix family");
        }
    }
    // deduplicate, preserving first occurrence order
    std::vector<VolMatrix> unique;
    for (auto& c : controls)
        if (std::find(unique.begin(), unique.end(), c) == unique.end())
            unique.push_back(std::move(c));
    ControlGrid g;
    g.controls_ = std::move(unique);
    g.policy_ = policy;
    return g;
}

} // namespace gsde
