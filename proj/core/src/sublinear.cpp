#include "gsde/sublinear.hpp"

#include "gsde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gsde {

EmpiricalSublinearDistribution::EmpiricalSublinearDistribution(
    std::vector<WeightedMeasure> measures)
    : measures_(std::move(measures)) {
    if (measures_.empty())
        throw InputError("EmpiricalSublinearDistribution: need at least one measure");
    dim_ = measures_.front().dimension();
    for (const auto& m : measures_)
        if (m.dimension() != dim_)
            throw InputError("EmpiricalSublinearDistribution: mixed dimensions");
}

EmpiricalSublinearDistribution
EmpiricalSublinearDistribution::dirac(std::span<const double> x) {
    std::vector<WeightedMeasure> ms;
    ms.push_back(WeightedMeasure::dirac(x));
    return EmpiricalSublinearDistribution(std::move(ms));
}

EmpiricalSublinearDistribution EmpiricalSublinearDistribution::dirac1d(double x) {
    std::vector<WeightedMeasure> ms;
    ms.push_back(WeightedMeasure::dirac1d(x));
    return EmpiricalSublinearDistribution(std::move(ms));
}

double EmpiricalSublinearDistribution::evaluate(const TestFunction& phi) const {
    return evaluate_detailed(phi).value;
}

EmpiricalSublinearDistribution::Evaluation
EmpiricalSublinearDistribution::evaluate_detailed(const TestFunction& phi) const {
    if (phi.dimension() != 0 && phi.dimension() != dim_)
        throw InputError("evaluate: test function dimension mismatch");
    Evaluation out;
    out.value = measures_[0].mean_of(phi);
    for (std::size_t i = 1; i < measures_.size(); ++i) {
        const double v = measures_[i].mean_of(phi);
        if (v > out.value) { // strict: ties keep the first index
            out.value = v;
            out.attaining_measure = i;
        }
    }
    return out;
}

std::vector<double> EmpiricalSublinearDistribution::union_support() const {
    std::vector<double> pts;
    for (const auto& m : measures_) {
        auto flat = m.flat_points();
        pts.insert(pts.end(), flat.begin(), flat.end());
    }
    return pts;
}

EmpiricalSublinearDistribution thin(const EmpiricalSublinearDistribution& dist,
                                    std::size_t cap) {
    if (cap == 0) throw InputError("thin: cap must be positive");
    std::vector<WeightedMeasure> out;
    out.reserve(dist.measure_count());
    const std::size_t dim = dist.dimension();
    for (std::size_t mi = 0; mi < dist.measure_count(); ++mi) {
        const auto& m = dist.measure(mi);
        if (m.size() <= cap) {
            out.push_back(m);
            continue;
        }
        std::vector<double> pts;
        std::vector<double> w;
        pts.reserve(cap * dim);
        w.reserve(cap);
        double total = 0.0;
        for (std::size_t i = 0; i < cap; ++i) {
            const std::size_t idx = i * m.size() / cap; // deterministic stride
            auto p = m.point(idx);
            pts.insert(pts.end(), p.begin(), p.end());
            w.push_back(m.weight(idx));
            total += m.weight(idx);
        }
        for (double& wi : w) wi /= total;
        out.emplace_back(std::move(pts), dim, std::move(w));
    }
    return EmpiricalSublinearDistribution(std::move(out));
}

namespace {

std::string describe_point(std::span<const double> x) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
    os << ")";
    return os.str();
}

} // namespace

AxiomReport check_axioms(const EmpiricalSublinearDistribution& dist,
                         const TestFunction& phi, const TestFunction& psi, double lambda,
                         std::span<const double> extra_points) {
    if (!(lambda >= 0.0)) throw InputError("check_axioms: lambda must be >= 0");
    const double tol = 1e-12;
    AxiomReport report;
    const std::size_t dim = dist.dimension();

    std::vector<double> sample = dist.union_support();
    sample.insert(sample.end(), extra_points.begin(), extra_points.end());
    if (sample.size() % dim != 0)
        throw InputError("check_axioms: extra points not divisible by dimension");
    const std::size_t n_sample = sample.size() / dim;

    const double f_phi = dist.evaluate(phi);
    const double f_psi = dist.evaluate(psi);

    // (1) Monotonicity: phi >= psi pointwise on the sample => F(phi) >= F(psi).
    {
        AxiomCheck c;
        c.axiom = "monotonicity";
        bool hypothesis = true;
        std::size_t violating = 0;
        for (std::size_t i = 0; i < n_sample; ++i) {
            std::span<const double> x{sample.data() + i * dim, dim};
            if (phi(x) < psi(x)) {
                hypothesis = false;
                violating = i;
                break;
            }
        }
        c.lhs = f_phi;
        c.rhs = f_psi;
        if (!hypothesis) {
            c.applicable = false;
            c.pass = true;
            c.witness = "hypothesis phi >= psi fails at " +
                        describe_point({sample.data() + violating * dim, dim}) +
                        "; vacuously true";
        } else {
            c.pass = f_phi >= f_psi - tol;
            c.witness = c.pass ? "F(phi) >= F(psi) on the representation"
                               : "monotonicity violated";
        }
        report.checks.push_back(std::move(c));
    }

    // (2) Constants preserving: F(c) = c.
    {
        const double candidates[] = {0.0, 1.0, -2.5, f_phi};
        for (double cval : candidates) {
            AxiomCheck c;
            c.axiom = "constants_preserving";
            c.lhs = dist.evaluate(TestFunction::constant(cval));
            c.rhs = cval;
            c.pass = std::abs(c.lhs - c.rhs) <= tol * std::max(1.0, std::abs(cval));
            c.witness = "c = " + std::to_string(cval);
            report.checks.push_back(std::move(c));
        }
    }

    // (3) Sub-additivity: F(phi + psi) <= F(phi) + F(psi).
    {
        AxiomCheck c;
        c.axiom = "sub_additivity";
        c.lhs = dist.evaluate(phi + psi);
        c.rhs = f_phi + f_psi;
        c.pass = c.lhs <= c.rhs + tol * std::max(1.0, std::abs(c.rhs));
        c.witness = "F(phi+psi) vs F(phi)+F(psi)";
        report.checks.push_back(std::move(c));
    }

    // (4) Positive homogeneity: F(lambda phi) = lambda F(phi).
    {
        AxiomCheck c;
        c.axiom = "positive_homogeneity";
        c.lhs = dist.evaluate(lambda * phi);
        c.rhs = lambda * f_phi;
        c.pass = std::abs(c.lhs - c.rhs) <= tol * std::max(1.0, std::abs(c.rhs));
        c.witness = "lambda = " + std::to_string(lambda);
        report.checks.push_back(std::move(c));
    }

    for (const auto& c : report.checks) report.all_pass = report.all_pass && c.pass;
    return report;
}

DistributionProcess::DistributionProcess(TimeGrid grid,
                                         std::vector<EmpiricalSublinearDistribution> entries)
    : grid_(std::move(grid)), entries_(std::move(entries)) {
    if (entries_.size() != grid_.size())
        throw InputError("DistributionProcess: entries length must equal grid length");
    const std::size_t dim = entries_.front().dimension();
    for (const auto& e : entries_)
        if (e.dimension() != dim)
            throw InputError("DistributionProcess: mixed dimensions");
}

DistributionProcess DistributionProcess::dirac(const TimeGrid& grid,
                                               std::span<const double> x) {
    std::vector<EmpiricalSublinearDistribution> entries(
        grid.size(), EmpiricalSublinearDistribution::dirac(x));
    return DistributionProcess(grid, std::move(entries));
}

} // namespace gsde
