#pragma once

#include "gsde/ensemble.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace gsde {

/// Read-only window onto one scenario's path history up to a step limit.
/// Accessing any index beyond the limit throws, which is how adaptedness of
/// simple integrands is enforced mechanically.
class PathView {
public:
    PathView(const PathEnsemble& ens, std::size_t control, std::size_t replicate,
             std::size_t limit)
        : ens_(&ens), c_(control), r_(replicate), limit_(limit) {}

    std::size_t limit() const { return limit_; }
    double time(std::size_t k) const;
    double driver(std::size_t k, std::size_t comp = 0) const;
    double state(std::size_t k, std::size_t comp = 0) const;

private:
    void check(std::size_t k) const;
    const PathEnsemble* ens_;
    std::size_t c_, r_, limit_;
};

/// Grid-aligned simple integrand: one value per (scenario, step), constant
/// on [t_k, t_{k+1}). Adapted by construction: the causal constructor only
/// exposes the path up to t_k when computing the step-k value.
class SimpleProcess {
public:
    using CausalFn = std::function<double(const PathView&, std::size_t step)>;

    static SimpleProcess constant(const PathEnsemble& ens, double value,
                                  std::string label = "const");
    static SimpleProcess of_time(const PathEnsemble& ens,
                                 const std::function<double(double)>& fn,
                                 std::string label = "of_time");
    static SimpleProcess from_causal(const PathEnsemble& ens, const CausalFn& fn,
                                     std::string label = "causal");

    std::size_t control_count() const { return controls_; }
    std::size_t replicate_count() const { return replicates_; }
    std::size_t steps() const { return steps_; }
    const std::string& label() const { return label_; }

    double value(std::size_t c, std::size_t r, std::size_t k) const {
        return values_[(c * replicates_ + r) * steps_ + k];
    }

private:
    SimpleProcess(std::size_t controls, std::size_t replicates, std::size_t steps,
                  std::string label)
        : controls_(controls), replicates_(replicates), steps_(steps),
          label_(std::move(label)), values_(controls * replicates * steps, 0.0) {}

    std::size_t controls_, replicates_, steps_;
    std::string label_;
    std::vector<double> values_;
};

/// Ito integral sum_k eta_k (B^a_{t_{k+1}} - B^a_{t_k}) per scenario.
ScenarioField ito_integral(const SimpleProcess& eta, const PathEnsemble& ens,
                           std::span<const double> a);

/// sum_k eta_k (<B>^{ij}_{t_{k+1}} - <B>^{ij}_{t_k}) per scenario, using the
/// analytic variation increments (indices 0-based, i <= j required).
ScenarioField qv_integral(const SimpleProcess& eta, const PathEnsemble& ens, std::size_t i,
                          std::size_t j);

/// Left-endpoint Riemann sum of eta dt per scenario.
ScenarioField time_integral(const SimpleProcess& eta, const PathEnsemble& ens);

/// One verified inequality: margins are in standard-error units,
/// (rhs - lhs) / se, except the BDG row where `margin` is the implied
/// constant ratio lhs / rhs_rest (the constant itself is not pinned down).
struct InequalityRow {
    std::string lemma;
    double p = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double se = 0.0;
    double margin = 0.0;
};

struct InequalityReport {
    std::vector<InequalityRow> rows;
};

/// Estimates both sides of the integral inequalities for the driver by
/// max-over-controls Monte Carlo:
///  - mean-zero:      E[int eta dB^a] = 0,
///  - second moment:  E[(int eta dB^a)^2] <= sigma^2_{aa^T} E[int eta^2 dt],
///  - BDG (p >= 2):   sup-of-integral moment vs. C_p sigma^p ... (ratio only),
///  - variation bound (p >= 1) for int eta d<B^a,B^abar>.
/// The window [s, t] is given as grid indices [k_from, k_to].
InequalityReport inequality_harness(const PathEnsemble& ens, const SimpleProcess& eta,
                                    double p_bdg, double p_var, std::span<const double> a,
                                    std::span<const double> abar, std::size_t k_from = 0,
                                    std::size_t k_to = static_cast<std::size_t>(-1));

} // namespace gsde
