#include "gsde/linprog.hpp"

#include "gsde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gsde {

void LpProblem::add_row(std::span<const double> coefficients, double b) {
    if (coefficients.size() != num_vars)
        throw InputError("LpProblem: row length mismatch");
    rows.insert(rows.end(), coefficients.begin(), coefficients.end());
    rhs.push_back(b);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarStatus : unsigned char { basic, at_lower, at_upper };

/// Full-tableau simplex state over the shifted problem (all lower bounds 0).
struct Tableau {
    std::size_t m = 0;        // rows
    std::size_t cols = 0;     // structural + slack + artificial
    std::size_t n_struct = 0; // structural count
    std::size_t art_start = 0;
    double tol = 1e-9;

    std::vector<double> t;     // m x cols
    std::vector<double> red;   // reduced costs, per column
    std::vector<double> xb;    // basic values, per row
    std::vector<double> ub;    // per column (inf for slack/artificial)
    std::vector<int> basis;    // row -> column
    std::vector<VarStatus> stat;
    double obj = 0.0;

    double& at(std::size_t i, std::size_t j) { return t[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return t[i * cols + j]; }

    double value_of(std::size_t j) const {
        if (stat[j] == VarStatus::at_lower) return 0.0;
        if (stat[j] == VarStatus::at_upper) return ub[j];
        for (std::size_t i = 0; i < m; ++i)
            if (basis[i] == static_cast<int>(j)) return xb[i];
        return 0.0;
    }

    void compute_reduced_costs(const std::vector<double>& cost) {
        red = cost;
        obj = 0.0;
        for (std::size_t j = 0; j < cols; ++j)
            if (stat[j] != VarStatus::basic && stat[j] == VarStatus::at_upper)
                obj += cost[j] * ub[j];
        for (std::size_t i = 0; i < m; ++i) {
            const double cb = cost[static_cast<std::size_t>(basis[i])];
            obj += cb * xb[i];
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j < cols; ++j) red[j] -= cb * at(i, j);
        }
        for (std::size_t i = 0; i < m; ++i) red[static_cast<std::size_t>(basis[i])] = 0.0;
    }

    /// Runs the simplex for one phase. `dead_from` disables columns >= it as
    /// entering candidates. Returns optimal/unbounded/iteration_limit.
    LpStatus iterate(std::size_t dead_from) {
        const std::size_t max_iter = 200 + 60 * (m + cols);
        std::size_t stall = 0;
        bool bland = false;
        double best_obj = obj;
        for (std::size_t iter = 0; iter < max_iter; ++iter) {
            // entering column
            std::size_t enter = cols;
            double best = tol;
            for (std::size_t j = 0; j < dead_from; ++j) {
                if (stat[j] == VarStatus::basic) continue;
                const double d = red[j];
                const bool eligible = (stat[j] == VarStatus::at_lower && d > tol) ||
                                      (stat[j] == VarStatus::at_upper && d < -tol);
                if (!eligible) continue;
                if (bland) { enter = j; break; }
                if (std::abs(d) > best) {
                    best = std::abs(d);
                    enter = j;
                }
            }
            if (enter == cols) return LpStatus::optimal;

            const double dir = stat[enter] == VarStatus::at_lower ? 1.0 : -1.0;

            // ratio test: entering moves by t >= 0 in direction dir, basics
            // follow xb -= t * dir * column until one of them (or the
            // entering variable itself) hits a bound
            double t_row = kInf;
            std::size_t leave_row = m;
            bool leave_to_upper = false;
            for (std::size_t i = 0; i < m; ++i) {
                const double e = dir * at(i, enter);
                double limit = kInf;
                bool to_upper = false;
                if (e > tol) {
                    limit = std::max(0.0, xb[i]) / e; // basic falls to lower
                } else if (e < -tol) {
                    const double cap = ub[static_cast<std::size_t>(basis[i])];
                    if (cap < kInf) {
                        limit = std::max(0.0, (cap - xb[i]) / (-e)); // basic climbs to upper
                        to_upper = true;
                    }
                }
                if (limit < t_row - 1e-12) {
                    t_row = limit;
                    leave_row = i;
                    leave_to_upper = to_upper;
                } else if (limit <= t_row + 1e-12 && leave_row < m &&
                           basis[i] < basis[leave_row]) {
                    t_row = std::min(t_row, limit);
                    leave_row = i;
                    leave_to_upper = to_upper;
                }
            }
            const double t_own = ub[enter];
            const double t_star = std::min(t_own, t_row);
            if (t_star == kInf) return LpStatus::unbounded;

            const double delta = dir * t_star;
            for (std::size_t i = 0; i < m; ++i) xb[i] -= delta * at(i, enter);
            obj += red[enter] * delta;

            if (t_own <= t_row) { // bound flip, basis unchanged
                stat[enter] = stat[enter] == VarStatus::at_lower ? VarStatus::at_upper
                                                                 : VarStatus::at_lower;
                if (obj > best_obj + tol) { best_obj = obj; stall = 0; }
                else if (++stall > 2 * (m + cols)) bland = true;
                continue;
            }

            // pivot
            const std::size_t leaving = static_cast<std::size_t>(basis[leave_row]);
            const double enter_value =
                (stat[enter] == VarStatus::at_lower ? 0.0 : ub[enter]) + delta;
            const double piv = at(leave_row, enter);
            const double inv = 1.0 / piv;
            for (std::size_t j = 0; j < cols; ++j) at(leave_row, j) *= inv;
            at(leave_row, enter) = 1.0;
            for (std::size_t i = 0; i < m; ++i) {
                if (i == leave_row) continue;
                const double f = at(i, enter);
                if (f == 0.0) continue;
                for (std::size_t j = 0; j < cols; ++j) at(i, j) -= f * at(leave_row, j);
                at(i, enter) = 0.0;
            }
            {
                const double f = red[enter];
                if (f != 0.0) {
                    for (std::size_t j = 0; j < cols; ++j) red[j] -= f * at(leave_row, j);
                }
                red[enter] = 0.0;
            }
            basis[leave_row] = static_cast<int>(enter);
            stat[enter] = VarStatus::basic;
            stat[leaving] = leave_to_upper ? VarStatus::at_upper : VarStatus::at_lower;
            xb[leave_row] = enter_value;
            for (std::size_t i = 0; i < m; ++i)
                if (xb[i] < 0.0 && xb[i] > -1e-9) xb[i] = 0.0;

            if (obj > best_obj + tol) { best_obj = obj; stall = 0; }
            else if (++stall > 2 * (m + cols)) bland = true;
        }
        return LpStatus::iteration_limit;
    }
};

} // namespace

LpSolution DenseSimplex::solve(const LpProblem& p) const {
    const std::size_t n = p.num_vars;
    const std::size_t m = p.num_rows();
    if (p.objective.size() != n || p.lower.size() != n || p.upper.size() != n)
        throw InputError("DenseSimplex: inconsistent problem arrays");
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(p.lower[j]) || !std::isfinite(p.upper[j]))
            throw InputError("DenseSimplex: finite variable bounds required");
        if (p.lower[j] > p.upper[j]) return {LpStatus::infeasible, 0.0, {}};
    }

    LpSolution sol;
    if (n == 0) {
        for (double b : p.rhs)
            if (b < -tol_) return {LpStatus::infeasible, 0.0, {}};
        return {LpStatus::optimal, 0.0, {}};
    }

    // shift x = y + lower so that all structural lower bounds are 0
    std::vector<double> bhat(m);
    for (std::size_t i = 0; i < m; ++i) {
        double s = p.rhs[i];
        for (std::size_t j = 0; j < n; ++j) s -= p.rows[i * n + j] * p.lower[j];
        bhat[i] = s;
    }

    std::vector<std::size_t> art_rows;
    for (std::size_t i = 0; i < m; ++i)
        if (bhat[i] < 0.0) art_rows.push_back(i);

    Tableau tb;
    tb.m = m;
    tb.n_struct = n;
    tb.art_start = n + m;
    tb.cols = n + m + art_rows.size();
    tb.tol = tol_;
    tb.t.assign(m * tb.cols, 0.0);
    tb.ub.assign(tb.cols, kInf);
    for (std::size_t j = 0; j < n; ++j) tb.ub[j] = p.upper[j] - p.lower[j];
    tb.stat.assign(tb.cols, VarStatus::at_lower);
    tb.basis.assign(m, -1);
    tb.xb.assign(m, 0.0);

    std::size_t art = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const bool neg = bhat[i] < 0.0;
        const double sign = neg ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) tb.at(i, j) = sign * p.rows[i * n + j];
        tb.at(i, n + i) = sign; // slack
        if (neg) {
            const std::size_t aj = tb.art_start + art++;
            tb.at(i, aj) = 1.0;
            tb.basis[i] = static_cast<int>(aj);
            tb.stat[aj] = VarStatus::basic;
            tb.xb[i] = -bhat[i];
        } else {
            tb.basis[i] = static_cast<int>(n + i);
            tb.stat[n + i] = VarStatus::basic;
            tb.xb[i] = bhat[i];
        }
    }

    if (!art_rows.empty()) {
        std::vector<double> phase1(tb.cols, 0.0);
        for (std::size_t j = tb.art_start; j < tb.cols; ++j) phase1[j] = -1.0;
        tb.compute_reduced_costs(phase1);
        const LpStatus st = tb.iterate(tb.cols);
        if (st == LpStatus::iteration_limit) return {st, 0.0, {}};
        if (tb.obj < -1e-7) return {LpStatus::infeasible, 0.0, {}};
        // drive surviving artificials out of the basis where possible
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t bj = static_cast<std::size_t>(tb.basis[i]);
            if (bj < tb.art_start) continue;
            for (std::size_t j = 0; j < tb.art_start; ++j) {
                if (tb.stat[j] == VarStatus::basic) continue;
                if (std::abs(tb.at(i, j)) <= tol_) continue;
                const double piv = tb.at(i, j);
                const double inv = 1.0 / piv;
                for (std::size_t k = 0; k < tb.cols; ++k) tb.at(i, k) *= inv;
                tb.at(i, j) = 1.0;
                for (std::size_t r = 0; r < m; ++r) {
                    if (r == i) continue;
                    const double f = tb.at(r, j);
                    if (f == 0.0) continue;
                    for (std::size_t k = 0; k < tb.cols; ++k)
                        tb.at(r, k) -= f * tb.at(i, k);
                    tb.at(r, j) = 0.0;
                }
                tb.stat[bj] = VarStatus::at_lower;
                // entering keeps its current (bound) value; the row stays at 0
                tb.xb[i] = tb.stat[j] == VarStatus::at_upper ? tb.ub[j] : 0.0;
                tb.stat[j] = VarStatus::basic;
                tb.basis[i] = static_cast<int>(j);
                break;
            }
        }
    }

    std::vector<double> phase2(tb.cols, 0.0);
    for (std::size_t j = 0; j < n; ++j) phase2[j] = p.objective[j];
    tb.compute_reduced_costs(phase2);
    const LpStatus st = tb.iterate(tb.art_start);
    if (st != LpStatus::optimal) return {st, 0.0, {}};

    sol.status = LpStatus::optimal;
    sol.x.resize(n);
    for (std::size_t j = 0; j < n; ++j) sol.x[j] = tb.value_of(j) + p.lower[j];
    double obj = 0.0;
    for (std::size_t j = 0; j < n; ++j) obj += p.objective[j] * sol.x[j];
    sol.objective = obj;
    return sol;
}

const LpBackend& default_lp_backend() {
    static const DenseSimplex backend;
    return backend;
}

} // namespace gsde
