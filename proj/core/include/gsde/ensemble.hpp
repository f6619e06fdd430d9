#pragma once

#include "gsde/parallel.hpp"
#include "gsde/sublinear.hpp"
#include "gsde/time_grid.hpp"
#include "gsde/volatility.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace gsde {

/// Discrete paths of state X, driver B and the analytic variation processes
/// for every (control, replicate) scenario. Immutable once built.
///
/// The variation components are accumulated analytically as
/// (theta theta^T)_{ij} dt per step, so per scenario they are exact given the
/// control; across controls they spread, which is the whole point.
class PathEnsemble {
public:
    struct Data {
        Data(TimeGrid g, VolatilityUncertainty u)
            : grid(std::move(g)), uncertainty(std::move(u)) {}

        TimeGrid grid;
        VolatilityUncertainty uncertainty;
        std::size_t replicates = 0;
        std::size_t state_dim = 1;
        std::size_t driver_dim = 1;
        std::uint64_t seed = 0;
        bool common_random_numbers = true;
        std::vector<VolMatrix> theta_per_step; ///< controls * steps matrices
        std::size_t control_count = 0;
        std::vector<double> qv;     ///< controls * pairs * (steps+1), cumulative
        std::vector<double> states; ///< controls * replicates * (steps+1) * n
        std::vector<double> driver; ///< controls * replicates * (steps+1) * d
    };

    explicit PathEnsemble(Data data);

    const TimeGrid& grid() const { return d_.grid; }
    const VolatilityUncertainty& uncertainty() const { return d_.uncertainty; }
    std::size_t control_count() const { return d_.control_count; }
    std::size_t replicate_count() const { return d_.replicates; }
    std::size_t scenario_count() const { return d_.control_count * d_.replicates; }
    std::size_t state_dim() const { return d_.state_dim; }
    std::size_t driver_dim() const { return d_.driver_dim; }
    std::uint64_t seed() const { return d_.seed; }
    bool common_random_numbers() const { return d_.common_random_numbers; }

    /// Volatility matrix in force on step k for control c.
    const VolMatrix& theta(std::size_t c, std::size_t k) const {
        return d_.theta_per_step[c * grid().steps() + k];
    }

    /// Cumulative variation <B>^{ij}_{t_k} under control c (i, j any order).
    double quad_variation(std::size_t c, std::size_t i, std::size_t j,
                          std::size_t t_index) const;
    /// One-step increment of <B>^{ij} on [t_k, t_{k+1}].
    double qv_increment(std::size_t c, std::size_t i, std::size_t j, std::size_t k) const;

    /// State path of one scenario: (steps+1) x state_dim, row-major.
    std::span<const double> state_path(std::size_t c, std::size_t r) const;
    /// Driver path of one scenario: (steps+1) x driver_dim, row-major.
    std::span<const double> driver_path(std::size_t c, std::size_t r) const;

    double state_at(std::size_t c, std::size_t r, std::size_t k, std::size_t comp) const {
        return state_path(c, r)[k * d_.state_dim + comp];
    }
    double driver_at(std::size_t c, std::size_t r, std::size_t k, std::size_t comp) const {
        return driver_path(c, r)[k * d_.driver_dim + comp];
    }

    std::size_t pair_index(std::size_t i, std::size_t j) const;

private:
    Data d_;
};

/// Simulates driver paths under volatility uncertainty. For each control
/// theta and replicate,
/// dB_k = theta_k sqrt(dt_k) xi_k with xi_k standard Gaussian from a
/// counter-based stream keyed by (seed, stream, replicate, step, component).
/// With common random numbers (default) the stream id is shared across
/// controls, so the same xi drives every control. The state X is set equal
/// to the driver.
PathEnsemble simulate_gbm(const VolatilityUncertainty& u, const ControlGrid& cg,
                          const TimeGrid& grid, std::size_t replicates, std::uint64_t seed,
                          const ParallelOptions& par = {}, bool crn = true);

/// Per-control path of the mutual variation <B^a, B^abar>_t, computed by the
/// polarization identity (<B^{a+abar}> - <B^{a-abar}>)/4 from the stored
/// variation components. Identical across replicates of one control.
std::vector<std::vector<double>> mutual_variation(const PathEnsemble& ens,
                                                  std::span<const double> a,
                                                  std::span<const double> abar);

/// Empirical sublinear distribution of X_{t_index}: one uniformly weighted
/// measure per control, particles given by the replicate values.
EmpiricalSublinearDistribution distribution_of(const PathEnsemble& ens,
                                               std::size_t t_index);

/// distribution_of applied at every grid time.
DistributionProcess distribution_process(const PathEnsemble& ens);

/// One scalar per scenario plus the sublinear (max over controls of
/// replicate means) reduction with the attaining control's standard error.
class ScenarioField {
public:
    ScenarioField(std::size_t controls, std::size_t replicates)
        : controls_(controls), replicates_(replicates),
          values_(controls * replicates, 0.0) {}

    double& at(std::size_t c, std::size_t r) { return values_[c * replicates_ + r]; }
    double at(std::size_t c, std::size_t r) const { return values_[c * replicates_ + r]; }
    std::span<const double> control_slice(std::size_t c) const {
        return {values_.data() + c * replicates_, replicates_};
    }
    std::size_t control_count() const { return controls_; }
    std::size_t replicate_count() const { return replicates_; }

    MomentSummary control_summary(std::size_t c) const;

    struct SublinearEstimate {
        double value = 0.0;
        double std_error = 0.0;
        std::size_t control = 0;
    };
    /// max over controls of replicate means; the SE is the attaining
    /// control's standard error (conservative convention).
    SublinearEstimate sublinear() const;

private:
    std::size_t controls_, replicates_;
    std::vector<double> values_;
};

} // namespace gsde
