#include "hardybox/lp.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace hardybox {

namespace {

void validate_problem(const LpProblem& p) {
    if (p.vars == 0) throw std::invalid_argument("lp: no variables");
    if (p.objective.size() != p.vars)
        throw std::invalid_argument("lp: objective length != variable count");
    if (p.rows.size() != p.rhs.size())
        throw std::invalid_argument("lp: row/rhs count mismatch");
    for (const auto& row : p.rows)
        if (row.size() != p.vars) throw std::invalid_argument("lp: row length != variable count");
}

// Dense exact tableau. Columns: originals [0, n), artificials [n, n+m);
// column `cols` holds the right-hand side. Row `z` carries reduced costs
// (z_j >= 0 everywhere means optimal for maximization) and, in its rhs
// slot, the current objective value.
struct Tableau {
    std::size_t m, n, cols;
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> z;
    std::vector<std::size_t> basis;
    std::vector<std::size_t> priority;  // Bland order over all columns
    std::vector<char> may_enter;
    std::size_t pivots = 0;

    void pivot(std::size_t r, std::size_t c) {
        auto& row = a[r];
        const Rational piv = row[c];
        if (piv != 1)
            for (auto& v : row) v /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r) continue;
            const Rational f = a[i][c];
            if (f == 0) continue;
            for (std::size_t j = 0; j <= cols; ++j)
                if (row[j] != 0) a[i][j] -= f * row[j];
        }
        const Rational fz = z[c];
        if (fz != 0)
            for (std::size_t j = 0; j <= cols; ++j)
                if (row[j] != 0) z[j] -= fz * row[j];
        basis[r] = c;
        ++pivots;
    }

    LpStatus run() {
        for (;;) {
            std::size_t enter = cols;
            for (std::size_t c = 0; c < cols; ++c)
                if (may_enter[c] && z[c] < 0 && (enter == cols || priority[c] < priority[enter]))
                    enter = c;
            if (enter == cols) return LpStatus::optimal;
            std::size_t leave = m;
            Rational best;
            for (std::size_t i = 0; i < m; ++i) {
                if (a[i][enter] <= 0) continue;
                Rational ratio = a[i][cols] / a[i][enter];
                if (leave == m || ratio < best ||
                    (ratio == best && priority[basis[i]] < priority[basis[leave]])) {
                    leave = i;
                    best = std::move(ratio);
                }
            }
            if (leave == m) return LpStatus::unbounded;
            pivot(leave, enter);
        }
    }
};

LpSolution solve_ordered(const LpProblem& p, const std::vector<std::size_t>& order) {
    validate_problem(p);
    const std::size_t n = p.vars;
    {
        std::vector<char> seen(n, 0);
        if (order.size() != n) throw std::invalid_argument("lp: pivot order size != vars");
        for (std::size_t v : order) {
            if (v >= n || seen[v]) throw std::invalid_argument("lp: pivot order not a permutation");
            seen[v] = 1;
        }
    }

    Tableau t;
    t.m = p.rows.size();
    t.n = n;
    t.cols = n + t.m;
    t.a.assign(t.m, std::vector<Rational>(t.cols + 1, Rational(0)));
    for (std::size_t i = 0; i < t.m; ++i) {
        const bool flip = p.rhs[i] < 0;
        for (std::size_t j = 0; j < n; ++j) t.a[i][j] = flip ? Rational(-p.rows[i][j]) : p.rows[i][j];
        t.a[i][t.cols] = flip ? Rational(-p.rhs[i]) : p.rhs[i];
        t.a[i][n + i] = 1;
    }
    t.basis.resize(t.m);
    std::iota(t.basis.begin(), t.basis.end(), n);
    t.priority.resize(t.cols);
    for (std::size_t k = 0; k < n; ++k) t.priority[order[k]] = k;
    for (std::size_t k = n; k < t.cols; ++k) t.priority[k] = k;
    t.may_enter.assign(t.cols, 1);
    for (std::size_t k = n; k < t.cols; ++k) t.may_enter[k] = 0;

    // Phase 1: maximize -(sum of artificials). Initial reduced costs of the
    // original columns are the negated column sums; value is -(sum of b).
    t.z.assign(t.cols + 1, Rational(0));
    for (std::size_t j = 0; j <= t.cols; ++j) {
        Rational s(0);
        for (std::size_t i = 0; i < t.m; ++i) s += t.a[i][j];
        if (j < n || j == t.cols) t.z[j] = -s;  // artificial columns come out 0
    }
    if (t.run() != LpStatus::optimal)
        throw std::logic_error("lp: phase 1 cannot be unbounded");

    LpSolution sol;
    if (t.z[t.cols] != 0) {  // artificials stuck above zero
        sol.status = LpStatus::infeasible;
        sol.pivots = t.pivots;
        return sol;
    }

    // Drive leftover (zero-valued) artificials out of the basis; rows that
    // offer no original pivot column are redundant and get dropped.
    for (std::size_t i = t.m; i-- > 0;) {
        if (t.basis[i] < n) continue;
        std::size_t c = n;
        for (std::size_t j = 0; j < n && c == n; ++j)
            if (t.a[i][j] != 0) c = j;
        if (c < n) {
            t.pivot(i, c);
        } else {
            t.a.erase(t.a.begin() + static_cast<std::ptrdiff_t>(i));
            t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
            --t.m;
        }
    }

    // Phase 2: real objective, reduced costs rebuilt from the current basis.
    t.z.assign(t.cols + 1, Rational(0));
    for (std::size_t j = 0; j <= t.cols; ++j) {
        Rational s(0);
        for (std::size_t i = 0; i < t.m; ++i)
            if (t.basis[i] < n && p.objective[t.basis[i]] != 0)
                s += p.objective[t.basis[i]] * t.a[i][j];
        t.z[j] = s;
        if (j < n) t.z[j] -= p.objective[j];
    }
    const LpStatus st = t.run();
    sol.pivots = t.pivots;
    if (st == LpStatus::unbounded) {
        sol.status = LpStatus::unbounded;
        return sol;
    }

    sol.status = LpStatus::optimal;
    sol.value = t.z[t.cols];
    sol.x.assign(n, Rational(0));
    for (std::size_t i = 0; i < t.m; ++i)
        if (t.basis[i] < n) sol.x[t.basis[i]] = t.a[i][t.cols];
    sol.basis = t.basis;
    std::sort(sol.basis.begin(), sol.basis.end());

    // Exact self-check against the problem as given.
    Rational dot(0);
    for (std::size_t j = 0; j < n; ++j) {
        if (sol.x[j] < 0) throw std::logic_error("lp: negative coordinate in optimum");
        if (p.objective[j] != 0) dot += p.objective[j] * sol.x[j];
    }
    if (dot != sol.value) throw std::logic_error("lp: objective mismatch in optimum");
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
        Rational lhs(0);
        for (std::size_t j = 0; j < n; ++j)
            if (p.rows[i][j] != 0) lhs += p.rows[i][j] * sol.x[j];
        if (lhs != p.rhs[i]) throw std::logic_error("lp: residual nonzero in optimum");
    }
    return sol;
}

}  // namespace

LpSolution lp_solve(const LpProblem& problem) {
    std::vector<std::size_t> identity(problem.vars);
    std::iota(identity.begin(), identity.end(), 0);
    return solve_ordered(problem, identity);
}

LpSolution lp_solve(const LpProblem& problem, const std::vector<std::size_t>& pivot_order) {
    return solve_ordered(problem, pivot_order);
}

std::vector<std::size_t> random_pivot_order(std::size_t vars, std::uint64_t seed) {
    std::vector<std::size_t> order(vars);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    return order;
}

LpProblem build_hardy_lp(const Scenario& scenario, const HardyPattern& pattern) {
    if (!(scenario == pattern.scenario))
        throw std::invalid_argument("build_hardy_lp: scenario does not match the pattern");
    validate_pattern(pattern);
    const int n = scenario.parties;
    LpProblem p;
    p.vars = scenario.table_size();
    p.objective.assign(p.vars, Rational(0));
    p.objective[encode_index(scenario, pattern.target.settings, pattern.target.outcomes)] = 1;

    auto blank = [&] { return std::vector<Rational>(p.vars, Rational(0)); };

    for (std::size_t c = 0; c < scenario.context_count(); ++c) {
        auto row = blank();
        for (std::size_t o = 0; o < scenario.outcomes_per_context(); ++o)
            row[index_from_parts(scenario, c, o)] = 1;
        p.rows.push_back(std::move(row));
        p.rhs.push_back(1);
    }

    // No-signaling: party m's summed-out pair of entries agrees across its
    // two settings, for every fixed settings/outcomes of the other parties.
    const std::size_t co_count = std::size_t{1} << (n - 1);
    std::vector<int> settings(static_cast<std::size_t>(n)), outcomes(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        for (std::size_t cs = 0; cs < co_count; ++cs) {
            for (std::size_t co = 0; co < co_count; ++co) {
                auto row = blank();
                int pos = 0;
                for (int j = 0; j < n; ++j) {
                    if (j == m) continue;
                    settings[static_cast<std::size_t>(j)] = static_cast<int>((cs >> (n - 2 - pos)) & 1u);
                    outcomes[static_cast<std::size_t>(j)] = static_cast<int>((co >> (n - 2 - pos)) & 1u);
                    ++pos;
                }
                for (int s = 0; s < 2; ++s) {
                    settings[static_cast<std::size_t>(m)] = s;
                    for (int om = 0; om < 2; ++om) {
                        outcomes[static_cast<std::size_t>(m)] = om;
                        row[encode_index(scenario, settings, outcomes)] = s == 0 ? 1 : -1;
                    }
                }
                p.rows.push_back(std::move(row));
                p.rhs.push_back(0);
            }
        }
    }

    for (const JointEvent& z : pattern.zeros) {
        auto row = blank();
        row[encode_index(scenario, z.settings, z.outcomes)] = 1;
        p.rows.push_back(std::move(row));
        p.rhs.push_back(0);
    }
    return p;
}

HardyLpResult hardy_lp_max(const HardyPattern& pattern) {
    const LpProblem p = build_hardy_lp(pattern.scenario, pattern);
    LpSolution sol = lp_solve(p);
    HardyLpResult res;
    res.status = sol.status;
    res.vars = p.vars;
    res.rows = p.rows.size();
    res.pivots = sol.pivots;
    if (sol.status == LpStatus::optimal) {
        res.max_q = sol.value;
        res.box = RationalBehavior::from_table(pattern.scenario, std::move(sol.x));
    }
    return res;
}

CoordinateRangesResult coordinate_ranges(const LpProblem& problem,
                                         const Rational& fixed_objective_value) {
    std::vector<std::size_t> all(problem.vars);
    std::iota(all.begin(), all.end(), 0);
    return coordinate_ranges(problem, fixed_objective_value, all);
}

CoordinateRangesResult coordinate_ranges(const LpProblem& problem,
                                         const Rational& fixed_objective_value,
                                         const std::vector<std::size_t>& variables) {
    validate_problem(problem);
    for (std::size_t v : variables)
        if (v >= problem.vars) throw std::invalid_argument("coordinate_ranges: variable out of range");

    LpProblem pinned = problem;
    pinned.rows.push_back(problem.objective);
    pinned.rhs.push_back(fixed_objective_value);

    CoordinateRangesResult res;
    {
        LpProblem probe = pinned;
        probe.objective.assign(probe.vars, Rational(0));
        const LpSolution sol = lp_solve(probe);
        if (sol.status != LpStatus::optimal) {
            res.status = sol.status;
            return res;
        }
    }

    // The 2k coordinate LPs share nothing; farm them out across threads.
    const auto solve_one = [&pinned](std::size_t var, bool maximize) {
        LpProblem p = pinned;
        p.objective.assign(p.vars, Rational(0));
        p.objective[var] = maximize ? 1 : -1;
        const LpSolution sol = lp_solve(p);
        if (sol.status == LpStatus::unbounded)
            throw std::runtime_error("coordinate_ranges: coordinate unbounded");
        if (sol.status != LpStatus::optimal)
            throw std::logic_error("coordinate_ranges: pinned problem became infeasible");
        return maximize ? sol.value : Rational(-sol.value);
    };

    res.ranges.resize(variables.size());
    const std::size_t workers =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), variables.size());
    std::vector<std::future<void>> futs;
    std::atomic<std::size_t> next{0};
    for (std::size_t w = 0; w < workers; ++w)
        futs.push_back(std::async(std::launch::async, [&] {
            for (std::size_t k = next.fetch_add(1); k < variables.size(); k = next.fetch_add(1)) {
                res.ranges[k].hi = solve_one(variables[k], true);
                res.ranges[k].lo = solve_one(variables[k], false);
            }
        }));
    for (auto& f : futs) f.get();  // rethrows any worker failure
    res.status = LpStatus::optimal;
    return res;
}

std::string lp_dump_text(const LpProblem& problem) {
    validate_problem(problem);
    std::ostringstream os;
    const auto terms = [&os](const std::vector<Rational>& coeffs) {
        bool first = true;
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            const Rational& c = coeffs[j];
            if (c == 0) continue;
            const Rational mag = c < 0 ? Rational(-c) : c;
            if (first)
                os << (c < 0 ? "-" : "");
            else
                os << (c < 0 ? " - " : " + ");
            if (mag != 1) os << to_fraction_string(mag) << " ";
            os << "x" << j;
            first = false;
        }
        if (first) os << "0";
    };
    os << "vars " << problem.vars << "\n";
    os << "max ";
    terms(problem.objective);
    os << "\n";
    for (std::size_t i = 0; i < problem.rows.size(); ++i) {
        terms(problem.rows[i]);
        os << " = " << to_fraction_string(problem.rhs[i]) << "\n";
    }
    return os.str();
}

}  // namespace hardybox
