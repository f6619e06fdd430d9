#include "gsde/ensemble.hpp"

#include "driver_common.hpp"
#include "gsde/errors.hpp"
#include "gsde/rng.hpp"

#include <cmath>

namespace gsde {

PathEnsemble::PathEnsemble(Data data) : d_(std::move(data)) {
    const std::size_t np = d_.grid.size();
    const std::size_t pairs = d_.driver_dim * (d_.driver_dim + 1) / 2;
    if (d_.control_count == 0 || d_.replicates == 0)
        throw InputError("PathEnsemble: empty ensemble");
    if (d_.theta_per_step.size() != d_.control_count * d_.grid.steps())
        throw InputError("PathEnsemble: theta array size mismatch");
    if (d_.qv.size() != d_.control_count * pairs * np)
        throw InputError("PathEnsemble: variation array size mismatch");
    if (d_.states.size() != d_.control_count * d_.replicates * np * d_.state_dim)
        throw InputError("PathEnsemble: state array size mismatch");
    if (d_.driver.size() != d_.control_count * d_.replicates * np * d_.driver_dim)
        throw InputError("PathEnsemble: driver array size mismatch");
}

std::size_t PathEnsemble::pair_index(std::size_t i, std::size_t j) const {
    const std::size_t d = d_.driver_dim;
    if (i >= d || j >= d) throw InputError("PathEnsemble: variation index out of range");
    if (i > j) std::swap(i, j);
    return i * d - i * (i - 1) / 2 + (j - i);
}

double PathEnsemble::quad_variation(std::size_t c, std::size_t i, std::size_t j,
                                    std::size_t t_index) const {
    const std::size_t pairs = d_.driver_dim * (d_.driver_dim + 1) / 2;
    return d_.qv[(c * pairs + pair_index(i, j)) * d_.grid.size() + t_index];
}

double PathEnsemble::qv_increment(std::size_t c, std::size_t i, std::size_t j,
                                  std::size_t k) const {
    return quad_variation(c, i, j, k + 1) - quad_variation(c, i, j, k);
}

std::span<const double> PathEnsemble::state_path(std::size_t c, std::size_t r) const {
    const std::size_t len = d_.grid.size() * d_.state_dim;
    return {d_.states.data() + (c * d_.replicates + r) * len, len};
}

std::span<const double> PathEnsemble::driver_path(std::size_t c, std::size_t r) const {
    const std::size_t len = d_.grid.size() * d_.driver_dim;
    return {d_.driver.data() + (c * d_.replicates + r) * len, len};
}

PathEnsemble simulate_gbm(const VolatilityUncertainty& u, const ControlGrid& cg,
                          const TimeGrid& grid, std::size_t replicates, std::uint64_t seed,
                          const ParallelOptions& par, bool crn) {
    if (replicates < 1) throw InputError("simulate_gbm: need at least one replicate");
    if (cg.size() == 0) throw InputError("simulate_gbm: empty control grid");
    const std::size_t d = u.dimension();
    const std::size_t np = grid.size();
    const std::size_t steps = grid.steps();
    const std::size_t controls = cg.size();

    PathEnsemble::Data data{grid, u};
    data.replicates = replicates;
    data.state_dim = d;
    data.driver_dim = d;
    data.seed = seed;
    data.common_random_numbers = crn;
    data.control_count = controls;
    data.theta_per_step = detail::control_path(cg, grid, seed);
    data.qv = detail::accumulate_variation(data.theta_per_step, grid, controls, d);
    data.driver.assign(controls * replicates * np * d, 0.0);

    const auto& theta = data.theta_per_step;
    double* driver = data.driver.data();
    parallel_for(controls * replicates, par, [&](std::size_t begin, std::size_t end) {
        std::vector<double> xi(d);
        for (std::size_t s = begin; s < end; ++s) {
            const std::size_t c = s / replicates;
            const std::size_t r = s % replicates;
            const std::uint32_t stream = crn ? 0u : static_cast<std::uint32_t>(c);
            double* path = driver + s * np * d;
            for (std::size_t k = 0; k < steps; ++k) {
                const double sdt = std::sqrt(grid.dt(k));
                for (std::size_t j = 0; j < d; ++j)
                    xi[j] = rng::standard_normal(seed, stream, static_cast<std::uint32_t>(r),
                                                 static_cast<std::uint32_t>(k),
                                                 static_cast<std::uint32_t>(j));
                const VolMatrix& th = theta[c * steps + k];
                for (std::size_t i = 0; i < d; ++i) {
                    double inc = 0.0;
                    for (std::size_t j = 0; j < d; ++j) inc += th.at(i, j) * xi[j];
                    path[(k + 1) * d + i] = path[k * d + i] + inc * sdt;
                }
            }
        }
    });

    data.states = data.driver; // X = B for a bare driver simulation
    return PathEnsemble(std::move(data));
}

std::vector<std::vector<double>> mutual_variation(const PathEnsemble& ens,
                                                  std::span<const double> a,
                                                  std::span<const double> abar) {
    const std::size_t d = ens.driver_dim();
    if (a.size() != d || abar.size() != d)
        throw InputError("mutual_variation: direction dimension mismatch");
    const std::size_t np = ens.grid().size();

    // <B^v>_t from the stored pair components: v^T theta theta^T v dt summed
    auto quad_path = [&](std::span<const double> v, std::size_t c, std::vector<double>& out) {
        for (std::size_t t = 0; t < np; ++t) {
            double s = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                s += v[i] * v[i] * ens.quad_variation(c, i, i, t);
                for (std::size_t j = i + 1; j < d; ++j)
                    s += 2.0 * v[i] * v[j] * ens.quad_variation(c, i, j, t);
            }
            out[t] = s;
        }
    };

    std::vector<double> plus(d), minus(d);
    for (std::size_t i = 0; i < d; ++i) {
        plus[i] = a[i] + abar[i];
        minus[i] = a[i] - abar[i];
    }
    std::vector<std::vector<double>> result(ens.control_count(),
                                            std::vector<double>(np, 0.0));
    std::vector<double> qp(np), qm(np);
    for (std::size_t c = 0; c < ens.control_count(); ++c) {
        quad_path(plus, c, qp);
        quad_path(minus, c, qm);
        for (std::size_t t = 0; t < np; ++t) result[c][t] = 0.25 * (qp[t] - qm[t]);
    }
    return result;
}

EmpiricalSublinearDistribution distribution_of(const PathEnsemble& ens,
                                               std::size_t t_index) {
    if (t_index >= ens.grid().size())
        throw InputError("distribution_of: time index out of range");
    const std::size_t n = ens.state_dim();
    std::vector<WeightedMeasure> measures;
    measures.reserve(ens.control_count());
    for (std::size_t c = 0; c < ens.control_count(); ++c) {
        std::vector<double> pts(ens.replicate_count() * n);
        for (std::size_t r = 0; r < ens.replicate_count(); ++r)
            for (std::size_t comp = 0; comp < n; ++comp)
                pts[r * n + comp] = ens.state_at(c, r, t_index, comp);
        measures.push_back(WeightedMeasure::uniform_on(std::move(pts), n));
    }
    return EmpiricalSublinearDistribution(std::move(measures));
}

DistributionProcess distribution_process(const PathEnsemble& ens) {
    std::vector<EmpiricalSublinearDistribution> entries;
    entries.reserve(ens.grid().size());
    for (std::size_t k = 0; k < ens.grid().size(); ++k)
        entries.push_back(distribution_of(ens, k));
    return DistributionProcess(ens.grid(), std::move(entries));
}

MomentSummary ScenarioField::control_summary(std::size_t c) const {
    return summarize(control_slice(c));
}

ScenarioField::SublinearEstimate ScenarioField::sublinear() const {
    SublinearEstimate best;
    for (std::size_t c = 0; c < controls_; ++c) {
        const MomentSummary s = control_summary(c);
        if (c == 0 || s.mean > best.value) {
            best.value = s.mean;
            best.std_error = s.std_error;
            best.control = c;
        }
    }
    return best;
}

} // namespace gsde
