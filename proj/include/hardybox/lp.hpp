#pragma once

#include <cstdint>
#include <optional>

#include "hardybox/behavior.hpp"
#include "hardybox/hardy.hpp"

namespace hardybox {

enum class LpStatus { optimal, infeasible, unbounded };

// max c.x  subject to  A x = b, x >= 0, everything rational and exact.
struct LpProblem {
    std::size_t vars = 0;
    std::vector<Rational> objective;          // size vars (maximized)
    std::vector<std::vector<Rational>> rows;  // each of size vars
    std::vector<Rational> rhs;                // one entry per row
};

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    Rational value{0};
    std::vector<Rational> x;         // primal point (empty unless optimal)
    std::vector<std::size_t> basis;  // basic variable indices (empty unless optimal)
    std::size_t pivots = 0;
};

// Two-phase simplex with Bland's anti-cycling rule. Optimal solutions are
// re-checked against the ORIGINAL rows before returning (exact residuals);
// a failed self-check throws std::logic_error.
LpSolution lp_solve(const LpProblem& problem);

// Same, with Bland's "first/smallest index" read through the given variable
// priority permutation — lets tests re-solve along a different pivot path.
LpSolution lp_solve(const LpProblem& problem, const std::vector<std::size_t>& pivot_order);
std::vector<std::size_t> random_pivot_order(std::size_t vars, std::uint64_t seed);

// Variables are the raw 4^n joint probabilities (no elimination); rows are
// 2^n normalization equalities, n*4^(n-1) no-signaling equalities, one
// equality per pattern zero. Objective selects the target probability.
LpProblem build_hardy_lp(const Scenario& scenario, const HardyPattern& pattern);

struct HardyLpResult {
    LpStatus status = LpStatus::infeasible;
    Rational max_q{0};
    std::optional<RationalBehavior> box;  // an optimal box, when optimal
    std::size_t vars = 0;
    std::size_t rows = 0;
    std::size_t pivots = 0;
};
HardyLpResult hardy_lp_max(const HardyPattern& pattern);

// Uniqueness probe: pin the objective to a fixed value with one extra
// equality, then minimize and maximize each requested coordinate. All-
// degenerate ranges certify a unique optimum. An unattainable pin comes
// back as status infeasible.
struct CoordinateRange {
    Rational lo, hi;
    bool degenerate() const { return lo == hi; }
};

struct CoordinateRangesResult {
    LpStatus status = LpStatus::infeasible;
    std::vector<CoordinateRange> ranges;  // matches the requested variables
};

CoordinateRangesResult coordinate_ranges(const LpProblem& problem,
                                         const Rational& fixed_objective_value);
CoordinateRangesResult coordinate_ranges(const LpProblem& problem,
                                         const Rational& fixed_objective_value,
                                         const std::vector<std::size_t>& variables);

// Deterministic text form, one line per constraint: "x0 + x1 - 3/2 x2 = 1/1".
std::string lp_dump_text(const LpProblem& problem);

}  // namespace hardybox
