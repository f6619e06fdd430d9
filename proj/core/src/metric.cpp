#include "gsde/metric.hpp"

#include "gsde/errors.hpp"
#include "gsde/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace gsde {

namespace {

struct SupportIndex {
    std::size_t dim = 1;
    std::vector<double> points; ///< flat, sorted lexicographically, deduplicated
    std::size_t size() const { return dim == 0 ? 0 : points.size() / dim; }
    std::span<const double> point(std::size_t i) const {
        return {points.data() + i * dim, dim};
    }
};

bool lex_less(std::span<const double> a, std::span<const double> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

/// Union support of both distributions, sorted, exact duplicates removed.
SupportIndex build_support(const EmpiricalSublinearDistribution& F,
                           const EmpiricalSublinearDistribution& G) {
    SupportIndex s;
    s.dim = F.dimension();
    std::vector<std::vector<double>> pts;
    auto collect = [&](const EmpiricalSublinearDistribution& dist) {
        for (std::size_t mi = 0; mi < dist.measure_count(); ++mi) {
            const auto& m = dist.measure(mi);
            for (std::size_t i = 0; i < m.size(); ++i) {
                auto p = m.point(i);
                pts.emplace_back(p.begin(), p.end());
            }
        }
    };
    collect(F);
    collect(G);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    s.points.reserve(pts.size() * s.dim);
    for (const auto& p : pts) s.points.insert(s.points.end(), p.begin(), p.end());
    return s;
}

std::size_t locate(const SupportIndex& s, std::span<const double> x) {
    // binary search over the lexicographic order; points are exact copies
    std::size_t lo = 0, hi = s.size();
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (lex_less(s.point(mid), x)) lo = mid + 1;
        else hi = mid;
    }
    return lo;
}

/// Weights of one measure accumulated onto the union support grid.
std::vector<double> weights_on_support(const SupportIndex& s, const WeightedMeasure& m) {
    std::vector<double> w(s.size(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i) w[locate(s, m.point(i))] += m.weight(i);
    return w;
}

double euclid(std::span<const double> a, std::span<const double> b) {
    double d2 = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        const double d = a[c] - b[c];
        d2 += d * d;
    }
    return std::sqrt(d2);
}

struct DirectionalBest {
    double value = -std::numeric_limits<double>::infinity();
    std::size_t measure = 0;
    std::vector<double> witness; ///< v on the support, anchored at index 0
};

/// sup over the Lipschitz polytope of mean_P(v) - max_Q mean_Q(v), maximized
/// over P, for dimension one. Solved in difference coordinates
/// s_k = v_{k+1} - v_k with |s_k| <= gap_k; mean_R(v) = sum_k S_R[k] s_k
/// where S_R[k] is the measure mass strictly to the right of gap k.
DirectionalBest direction_value_1d(const SupportIndex& s,
                                   const std::vector<std::vector<double>>& wP,
                                   const std::vector<std::vector<double>>& wQ,
                                   const LpBackend& lp) {
    const std::size_t m = s.size();
    DirectionalBest best;
    if (m == 1) {
        best.value = 0.0;
        best.witness = {0.0};
        return best;
    }
    const std::size_t gaps = m - 1;
    auto survival = [&](const std::vector<double>& w) {
        std::vector<double> surv(gaps, 0.0);
        double acc = 0.0;
        for (std::size_t k = gaps; k-- > 0;) {
            acc += w[k + 1];
            surv[k] = acc;
        }
        return surv;
    };
    std::vector<std::vector<double>> sP(wP.size()), sQ(wQ.size());
    for (std::size_t i = 0; i < wP.size(); ++i) sP[i] = survival(wP[i]);
    for (std::size_t i = 0; i < wQ.size(); ++i) sQ[i] = survival(wQ[i]);

    const double span = s.points[m - 1] - s.points[0];
    LpProblem problem(gaps + 1); // s_0..s_{gaps-1}, t
    for (std::size_t k = 0; k < gaps; ++k) {
        const double g = s.points[k + 1] - s.points[k];
        problem.lower[k] = -g;
        problem.upper[k] = g;
    }
    problem.lower[gaps] = -span - 1.0;
    problem.upper[gaps] = span + 1.0;
    std::vector<double> row(gaps + 1);
    for (const auto& q : sQ) {
        std::copy(q.begin(), q.end(), row.begin());
        row[gaps] = -1.0;
        problem.add_row(row, 0.0);
    }

    for (std::size_t pi = 0; pi < sP.size(); ++pi) {
        std::fill(problem.objective.begin(), problem.objective.end(), 0.0);
        std::copy(sP[pi].begin(), sP[pi].end(), problem.objective.begin());
        problem.objective[gaps] = -1.0;
        const LpSolution sol = lp.solve(problem);
        if (sol.status != LpStatus::optimal)
            throw InternalError("d1: inner LP not optimal on a feasible instance");
        if (sol.objective > best.value) {
            best.value = sol.objective;
            best.measure = pi;
            best.witness.assign(m, 0.0);
            for (std::size_t k = 0; k < gaps; ++k)
                best.witness[k + 1] = best.witness[k] + sol.x[k];
        }
    }
    return best;
}

/// Same directional problem in general dimension with explicit pairwise
/// Lipschitz constraints over the anchored values v_1..v_{m-1}.
DirectionalBest direction_value_nd(const SupportIndex& s,
                                   const std::vector<std::vector<double>>& wP,
                                   const std::vector<std::vector<double>>& wQ,
                                   const LpBackend& lp) {
    const std::size_t m = s.size();
    DirectionalBest best;
    if (m == 1) {
        best.value = 0.0;
        best.witness = {0.0};
        return best;
    }
    const std::size_t nv = m - 1; // v_0 is the anchor, fixed to 0
    LpProblem problem(nv + 1);
    double dmax = 0.0;
    for (std::size_t i = 1; i < m; ++i) {
        const double di = euclid(s.point(i), s.point(0));
        problem.lower[i - 1] = -di;
        problem.upper[i - 1] = di;
        dmax = std::max(dmax, di);
    }
    problem.lower[nv] = -dmax - 1.0;
    problem.upper[nv] = dmax + 1.0;

    std::vector<double> row(nv + 1, 0.0);
    for (std::size_t i = 1; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double dij = euclid(s.point(i), s.point(j));
            std::fill(row.begin(), row.end(), 0.0);
            row[i - 1] = 1.0;
            row[j - 1] = -1.0;
            problem.add_row(row, dij);
            row[i - 1] = -1.0;
            row[j - 1] = 1.0;
            problem.add_row(row, dij);
        }
    }
    for (const auto& q : wQ) {
        std::fill(row.begin(), row.end(), 0.0);
        for (std::size_t i = 1; i < m; ++i) row[i - 1] = q[i];
        row[nv] = -1.0;
        problem.add_row(row, 0.0);
    }

    for (std::size_t pi = 0; pi < wP.size(); ++pi) {
        std::fill(problem.objective.begin(), problem.objective.end(), 0.0);
        for (std::size_t i = 1; i < m; ++i) problem.objective[i - 1] = wP[pi][i];
        problem.objective[nv] = -1.0;
        const LpSolution sol = lp.solve(problem);
        if (sol.status != LpStatus::optimal)
            throw InternalError("d1: inner LP not optimal on a feasible instance");
        if (sol.objective > best.value) {
            best.value = sol.objective;
            best.measure = pi;
            best.witness.assign(m, 0.0);
            for (std::size_t i = 1; i < m; ++i) best.witness[i] = sol.x[i - 1];
        }
    }
    return best;
}

} // namespace

MetricResult d1(const EmpiricalSublinearDistribution& F,
                const EmpiricalSublinearDistribution& G, const MetricOptions& opts) {
    if (F.dimension() != G.dimension())
        throw InputError("d1: distributions have different dimensions");
    const LpBackend& lp = opts.backend ? *opts.backend : default_lp_backend();

    const SupportIndex support = build_support(F, G);
    if (support.dim >= 2 && support.size() > opts.pairwise_cap)
        throw CapacityError("d1: union support of " + std::to_string(support.size()) +
                            " points exceeds the multi-dimensional cap of " +
                            std::to_string(opts.pairwise_cap));

    std::vector<std::vector<double>> wF(F.measure_count()), wG(G.measure_count());
    for (std::size_t i = 0; i < F.measure_count(); ++i)
        wF[i] = weights_on_support(support, F.measure(i));
    for (std::size_t i = 0; i < G.measure_count(); ++i)
        wG[i] = weights_on_support(support, G.measure(i));

    const bool one_d = support.dim == 1;
    const DirectionalBest fg = one_d ? direction_value_1d(support, wF, wG, lp)
                                     : direction_value_nd(support, wF, wG, lp);
    const DirectionalBest gf = one_d ? direction_value_1d(support, wG, wF, lp)
                                     : direction_value_nd(support, wG, wF, lp);

    MetricResult out;
    out.dim = support.dim;
    out.support = support.points;
    if (fg.value >= gf.value) { // ties report the F-G direction
        out.value = std::max(0.0, fg.value);
        out.direction = +1;
        out.attaining_measure = fg.measure;
        out.witness = fg.witness;
    } else {
        out.value = std::max(0.0, gf.value);
        out.direction = -1;
        out.attaining_measure = gf.measure;
        out.witness = gf.witness;
    }
    return out;
}

double dr(const EmpiricalSublinearDistribution& F, const EmpiricalSublinearDistribution& G,
          double r, const MetricOptions& opts) {
    if (!(r > 0.0)) throw InputError("dr: r must be positive");
    return r * d1(F, G, opts).value;
}

MetricResult d1T(const DistributionProcess& Fp, const DistributionProcess& Gp,
                 std::size_t up_to, const MetricOptions& opts) {
    if (!(Fp.grid() == Gp.grid())) throw InputError("d1T: processes on different grids");
    const std::size_t last = std::min(up_to, Fp.size() - 1);
    MetricResult best;
    best.value = -1.0;
    for (std::size_t k = 0; k <= last; ++k) {
        MetricResult r = d1(Fp.at(k), Gp.at(k), opts);
        if (r.value > best.value) {
            best = std::move(r);
            best.argmax_time = k;
        }
    }
    return best;
}

namespace {

/// max over P-side survival vectors of
/// min over mixtures lambda of the Q side of sum_k gap_k |S_P[k] - S_lambda[k]|,
/// by exhaustive enumeration of the arrangement vertices in the simplex.
double direction_dual_enumeration(const std::vector<std::vector<double>>& sP,
                                  const std::vector<std::vector<double>>& sQ,
                                  const std::vector<double>& gap) {
    const std::size_t q = sQ.size();
    const std::size_t gaps = gap.size();
    if (q > 6)
        throw CapacityError("d1_bruteforce: dual enumeration capped at 6 measures/side");

    auto dual_value = [&](const std::vector<double>& sp, const std::vector<double>& lam) {
        double total = 0.0;
        for (std::size_t k = 0; k < gaps; ++k) {
            double mix = 0.0;
            for (std::size_t j = 0; j < q; ++j) mix += lam[j] * sQ[j][k];
            total += gap[k] * std::abs(sp[k] - mix);
        }
        return total;
    };

    double direction_best = 0.0;
    std::vector<std::size_t> subset(q > 0 ? q - 1 : 0);
    std::vector<std::vector<double>> system(q, std::vector<double>(q + 1, 0.0));

    for (const auto& sp : sP) {
        double best = std::numeric_limits<double>::infinity();
        if (q == 1) {
            best = dual_value(sp, {1.0});
            direction_best = std::max(direction_best, best);
            continue;
        }
        // hyperplane i < gaps: sum_j lambda_j sQ[j][i] = sp[i];
        // hyperplane gaps + j: lambda_j = 0
        const std::size_t planes = gaps + q;
        auto try_subset = [&]() {
            // rows: chosen hyperplanes, plus the normalization sum lambda = 1
            for (std::size_t r = 0; r < q - 1; ++r) {
                const std::size_t h = subset[r];
                if (h < gaps) {
                    for (std::size_t j = 0; j < q; ++j) system[r][j] = sQ[j][h];
                    system[r][q] = sp[h];
                } else {
                    for (std::size_t j = 0; j < q; ++j) system[r][j] = 0.0;
                    system[r][h - gaps] = 1.0;
                    system[r][q] = 0.0;
                }
            }
            for (std::size_t j = 0; j < q; ++j) system[q - 1][j] = 1.0;
            system[q - 1][q] = 1.0;
            // gaussian elimination with partial pivoting
            for (std::size_t col = 0; col < q; ++col) {
                std::size_t piv = col;
                for (std::size_t r = col + 1; r < q; ++r)
                    if (std::abs(system[r][col]) > std::abs(system[piv][col])) piv = r;
                if (std::abs(system[piv][col]) < 1e-12) return; // singular subset
                std::swap(system[piv], system[col]);
                for (std::size_t r = 0; r < q; ++r) {
                    if (r == col) continue;
                    const double f = system[r][col] / system[col][col];
                    for (std::size_t j = col; j <= q; ++j)
                        system[r][j] -= f * system[col][j];
                }
            }
            std::vector<double> lam(q);
            for (std::size_t j = 0; j < q; ++j) {
                lam[j] = system[j][q] / system[j][j];
                if (lam[j] < -1e-9 || lam[j] > 1.0 + 1e-9) return; // outside the simplex
                lam[j] = std::clamp(lam[j], 0.0, 1.0);
            }
            best = std::min(best, dual_value(sp, lam));
        };
        // all (q-1)-subsets of the planes
        std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start,
                                                                std::size_t depth) {
            if (depth == q - 1) {
                try_subset();
                return;
            }
            for (std::size_t i = start; i < planes; ++i) {
                subset[depth] = i;
                rec(i + 1, depth + 1);
            }
        };
        rec(0, 0);
        direction_best = std::max(direction_best, best);
    }
    return direction_best;
}

} // namespace

double d1_bruteforce(const EmpiricalSublinearDistribution& F,
                     const EmpiricalSublinearDistribution& G, std::size_t cap) {
    if (F.dimension() != G.dimension())
        throw InputError("d1_bruteforce: distributions have different dimensions");
    const SupportIndex support = build_support(F, G);
    const std::size_t m = support.size();

    std::vector<std::vector<double>> wF(F.measure_count()), wG(G.measure_count());
    for (std::size_t i = 0; i < F.measure_count(); ++i)
        wF[i] = weights_on_support(support, F.measure(i));
    for (std::size_t i = 0; i < G.measure_count(); ++i)
        wG[i] = weights_on_support(support, G.measure(i));

    auto score = [&](const std::vector<double>& v) {
        auto mx = [&](const std::vector<std::vector<double>>& ws) {
            double b = -std::numeric_limits<double>::infinity();
            for (const auto& w : ws)
                b = std::max(b, std::inner_product(w.begin(), w.end(), v.begin(), 0.0));
            return b;
        };
        return std::abs(mx(wF) - mx(wG));
    };

    if (support.dim == 1) {
        if (m > cap)
            throw CapacityError("d1_bruteforce: support of " + std::to_string(m) +
                                " points exceeds cap " + std::to_string(cap));
        if (m == 1) return 0.0;
        const std::size_t gaps = m - 1;
        std::vector<double> gap(gaps);
        for (std::size_t k = 0; k < gaps; ++k)
            gap[k] = support.points[k + 1] - support.points[k];
        auto survival = [&](const std::vector<double>& w) {
            std::vector<double> surv(gaps, 0.0);
            double acc = 0.0;
            for (std::size_t k = gaps; k-- > 0;) {
                acc += w[k + 1];
                surv[k] = acc;
            }
            return surv;
        };
        std::vector<std::vector<double>> sF(wF.size()), sG(wG.size());
        for (std::size_t i = 0; i < wF.size(); ++i) sF[i] = survival(wF[i]);
        for (std::size_t i = 0; i < wG.size(); ++i) sG[i] = survival(wG[i]);

        // floor: max of |F - G| over the 2^(m-1) extreme Lipschitz functions
        std::vector<double> v(m, 0.0);
        double vertex_best = 0.0;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << gaps); ++mask) {
            for (std::size_t k = 0; k < gaps; ++k)
                v[k + 1] = v[k] + ((mask >> k) & 1 ? gap[k] : -gap[k]);
            vertex_best = std::max(vertex_best, score(v));
        }

        // exact value: with several measures per side the maximizer can sit
        // on an interior kink, so vertex enumeration alone under-counts. By
        // minimax duality,
        //   sup_v [mean_P(v) - max_Q mean_Q(v)]
        //     = min over mixtures lambda of sum_k gap_k |S_P[k] - S_lambda[k]|,
        // and this convex piecewise-linear minimum over the simplex is
        // attained at a vertex of the hyperplane arrangement
        // { S_lambda[k] = S_P[k] } u { lambda_Q = 0 }, a finite candidate
        // set enumerated below.
        const double dual_best =
            std::max(direction_dual_enumeration(sF, sG, gap),
                     direction_dual_enumeration(sG, sF, gap));
        if (dual_best < vertex_best - 1e-9)
            throw InternalError("d1_bruteforce: dual enumeration below the vertex floor");
        return dual_best;
    }

    // dimension >= 2: vertex sampling over the pairwise Lipschitz polytope
    constexpr std::size_t kNdCap = 16;
    if (m > kNdCap)
        throw CapacityError("d1_bruteforce: multi-dimensional sampling capped at " +
                            std::to_string(kNdCap) + " support points");
    if (m == 1) return 0.0;

    const std::size_t nv = m - 1;
    LpProblem polytope(nv);
    for (std::size_t i = 1; i < m; ++i) {
        const double di = euclid(support.point(i), support.point(0));
        polytope.lower[i - 1] = -di;
        polytope.upper[i - 1] = di;
    }
    std::vector<double> row(nv, 0.0);
    for (std::size_t i = 1; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double dij = euclid(support.point(i), support.point(j));
            std::fill(row.begin(), row.end(), 0.0);
            row[i - 1] = 1.0;
            row[j - 1] = -1.0;
            polytope.add_row(row, dij);
            row[i - 1] = -1.0;
            row[j - 1] = 1.0;
            polytope.add_row(row, dij);
        }
    }

    const LpBackend& lp = default_lp_backend();
    double best = 0.0;
    std::vector<double> v(m, 0.0);
    auto try_objective = [&](std::span<const double> c) {
        std::copy(c.begin(), c.end(), polytope.objective.begin());
        const LpSolution sol = lp.solve(polytope);
        if (sol.status != LpStatus::optimal) return;
        for (std::size_t i = 1; i < m; ++i) v[i] = sol.x[i - 1];
        best = std::max(best, score(v));
    };

    std::vector<double> c(nv);
    for (const auto& wp : wF) {
        for (const auto& wq : wG) {
            for (std::size_t i = 1; i < m; ++i) c[i - 1] = wp[i] - wq[i];
            try_objective(c);
            for (std::size_t i = 1; i < m; ++i) c[i - 1] = wq[i] - wp[i];
            try_objective(c);
        }
    }
    for (std::uint32_t sample = 0; sample < 256; ++sample) {
        for (std::size_t i = 0; i < nv; ++i) {
            const auto block = rng::philox4x32(
                0x5EEDBA5Eu, {sample, static_cast<std::uint32_t>(i), 0u, 0u});
            c[i] = 2.0 * rng::uniform_closed_open(block[0], block[1]) - 1.0;
        }
        try_objective(c);
    }
    return best;
}

double wasserstein1_1d(const WeightedMeasure& mu, const WeightedMeasure& nu) {
    if (mu.dimension() != 1 || nu.dimension() != 1)
        throw InputError("wasserstein1_1d: only dimension one is supported");

    auto sorted = [](const WeightedMeasure& m) {
        std::vector<std::pair<double, double>> pw(m.size());
        for (std::size_t i = 0; i < m.size(); ++i) pw[i] = {m.point(i)[0], m.weight(i)};
        std::sort(pw.begin(), pw.end());
        return pw;
    };
    const auto a = sorted(mu);
    const auto b = sorted(nu);

    // pair off quantile mass between the two sorted supports
    double total = 0.0;
    std::size_t i = 0, j = 0;
    double ra = a[0].second, rb = b[0].second;
    while (i < a.size() && j < b.size()) {
        const double mass = std::min(ra, rb);
        total += mass * std::abs(a[i].first - b[j].first);
        ra -= mass;
        rb -= mass;
        if (ra <= 1e-15 && i + 1 < a.size()) ra = a[++i].second;
        else if (ra <= 1e-15) ++i;
        if (rb <= 1e-15 && j + 1 < b.size()) rb = b[++j].second;
        else if (rb <= 1e-15) ++j;
    }
    return total;
}

} // namespace gsde
