#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "hardybox/behavior.hpp"

namespace hardybox {

using Complex = std::complex<double>;

// Margin on the squared moduli |a|^2, |b|^2: both must sit in
// [margin, 1 - margin]. Strictly degenerate observables (|b| in {0,1})
// collapse the Hardy subspace construction.
inline constexpr double observable_margin = 1e-3;
inline constexpr double unit_norm_tolerance = 1e-12;
// Singular values below this fraction of the largest count as zero.
inline constexpr double null_space_threshold = 1e-10;

// One qubit's measurement pair (U, D): amplitudes of |U=+1> in the D-basis,
// |U=+1> = a|D=+1> + b|D=-1>.
struct ObservablePair {
    Complex a, b;

    ObservablePair(Complex a_, Complex b_);
    static ObservablePair from_beta(double beta, double phase_x = 0.0, double phase_y = 0.0);

    double beta() const { return std::norm(b); }  // |b|^2
};

// Amplitudes in the D-basis; party 1 is the slowest (most significant) index
// bit, and bit value 0 means D=+1.
struct StateVector {
    int qubits = 0;
    std::vector<Complex> amps;

    double norm() const;
};

// <x|y> with the physics convention (conjugate-linear in x).
Complex inner(const StateVector& x, const StateVector& y);

// Tensor product of single-qubit factors, first factor slowest.
StateVector product_state(const std::vector<StateVector>& factors);

struct UBasis {
    StateVector plus;   // |U=+1>
    StateVector minus;  // |U=-1> = b*|D=+1> - a*|D=-1>
};
UBasis u_basis(const ObservablePair& pair);

// The n+1 product states every Hardy state must avoid: one |D_m=+1> factor
// with the rest |U=+1>, for each m, plus the all-|D=-1> state.
std::vector<StateVector> s1_states(const std::vector<ObservablePair>& observables);

// The 2^n - n - 2 product states with per-factor choice {|D=+1>, |U=-1>}
// and between 1 and n-2 |D=+1> factors (empty for n = 2).
std::vector<StateVector> s2_states(const std::vector<ObservablePair>& observables);

// Orthonormal basis of the orthogonal complement of span(vectors) in the
// given dimension (a power of two), via SVD with relative rank threshold.
std::vector<StateVector> null_space(const std::vector<StateVector>& vectors, std::size_t dim);

// The unique unit vector orthogonal to s1 and s2, phase-fixed so that
// <all-U=+1 | psi0> is real and positive. Throws std::runtime_error if the
// complement is not one-dimensional.
StateVector hardy_state(const std::vector<ObservablePair>& observables);

// p = |<U_1=+1, ..., U_n=+1 | state>|^2. Requires a unit state.
double success_probability(const StateVector& state,
                           const std::vector<ObservablePair>& observables);

// Three-qubit closed forms: N = b1b2 + b2b3 + b3b1 - 2 b1b2b3 (squared
// moduli), p = b1b2b3 (1-N)/N; and the symmetric restriction k/(3-2k) - k^3.
double closed_form_p3(double beta1, double beta2, double beta3);
double symmetric_p3(double k);

enum class OptimizeMode { symmetric, full };

struct HardyQuantumResult {
    OptimizeMode mode = OptimizeMode::symmetric;
    std::vector<double> betas;  // per-qubit |b_j|^2 (all equal in symmetric mode)
    StateVector state;
    double p = 0.0;
    std::size_t evaluations = 0;
};

// Derivative-free maximization of the numeric pipeline over beta parameters
// (phases pinned to zero): golden-section in symmetric mode, coarse grid plus
// coordinate descent in full mode. A seed adds random-restart descents.
HardyQuantumResult optimize_hardy(int parties, OptimizeMode mode, int grid_points = 9,
                                  std::optional<std::uint64_t> seed = std::nullopt);

// The box a state induces: per party, setting 0 measures U, setting 1
// measures D; outcome bit 0 is the +1 result.
FloatBehavior behavior_from_state(const StateVector& state,
                                  const std::vector<ObservablePair>& observables);

struct StateHardyReport {
    std::vector<double> zeros;  // the n+1 forbidden-event probabilities
    double target = 0.0;
    bool pass = false;          // zeros all <= tolerance and target > tolerance
};
StateHardyReport check_state_hardy(const StateVector& state,
                                   const std::vector<ObservablePair>& observables,
                                   double tolerance = 1e-10);

}  // namespace hardybox
