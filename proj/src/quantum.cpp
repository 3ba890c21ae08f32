#include "hardybox/quantum.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <random>

namespace hardybox {

namespace {

bool is_pow2(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

int qubits_of_dim(std::size_t dim) {
    if (!is_pow2(dim)) throw std::invalid_argument("state dimension must be a power of two");
    int n = 0;
    while ((std::size_t{1} << n) < dim) ++n;
    return n;
}

void require_unit(const StateVector& s, const char* what) {
    if (std::abs(s.norm() - 1.0) > unit_norm_tolerance)
        throw std::invalid_argument(std::string(what) + ": state is not unit-norm");
}

void require_match(const StateVector& s, const std::vector<ObservablePair>& obs,
                   const char* what) {
    if (obs.size() < 2) throw std::invalid_argument(std::string(what) + ": need at least 2 qubits");
    if (s.qubits != static_cast<int>(obs.size()) ||
        s.amps.size() != (std::size_t{1} << obs.size()))
        throw std::invalid_argument(std::string(what) +
                                    ": state dimension does not match the observable count");
}

StateVector all_u_plus(const std::vector<ObservablePair>& obs) {
    std::vector<StateVector> factors;
    factors.reserve(obs.size());
    for (const ObservablePair& pair : obs) factors.push_back(u_basis(pair).plus);
    return product_state(factors);
}

double pipeline_p(const std::vector<double>& betas) {
    std::vector<ObservablePair> obs;
    obs.reserve(betas.size());
    for (double b : betas) obs.push_back(ObservablePair::from_beta(b));
    return success_probability(hardy_state(obs), obs);
}

}  // namespace

ObservablePair::ObservablePair(Complex a_, Complex b_) : a(a_), b(b_) {
    const double na = std::norm(a), nb = std::norm(b);
    if (std::abs(na + nb - 1.0) > unit_norm_tolerance)
        throw std::invalid_argument("observable pair: |a|^2 + |b|^2 must be 1");
    // The margin comparison gets the same slack as the norm check: sqrt/square
    // round trips at the boundary may land one ulp outside the closed interval.
    if (na < observable_margin - unit_norm_tolerance ||
        na > 1.0 - observable_margin + unit_norm_tolerance)
        throw std::invalid_argument("observable pair: |a|^2 outside the open-domain margin");
    if (nb < observable_margin - unit_norm_tolerance ||
        nb > 1.0 - observable_margin + unit_norm_tolerance)
        throw std::invalid_argument("observable pair: |b|^2 outside the open-domain margin");
}

ObservablePair ObservablePair::from_beta(double beta, double phase_x, double phase_y) {
    if (!(beta >= observable_margin && beta <= 1.0 - observable_margin))
        throw std::invalid_argument("observable pair: beta outside [margin, 1-margin]");
    const Complex a = std::polar(std::sqrt(1.0 - beta), phase_x);
    const Complex b = std::polar(std::sqrt(beta), phase_y);
    return ObservablePair(a, b);
}

double StateVector::norm() const {
    double s = 0;
    for (const Complex& c : amps) s += std::norm(c);
    return std::sqrt(s);
}

Complex inner(const StateVector& x, const StateVector& y) {
    if (x.amps.size() != y.amps.size())
        throw std::invalid_argument("inner: dimension mismatch");
    Complex s{0, 0};
    for (std::size_t i = 0; i < x.amps.size(); ++i) s += std::conj(x.amps[i]) * y.amps[i];
    return s;
}

StateVector product_state(const std::vector<StateVector>& factors) {
    if (factors.empty()) throw std::invalid_argument("product_state: no factors");
    StateVector out{0, {Complex{1, 0}}};
    for (const StateVector& f : factors) {
        std::vector<Complex> next(out.amps.size() * f.amps.size());
        for (std::size_t i = 0; i < out.amps.size(); ++i)
            for (std::size_t j = 0; j < f.amps.size(); ++j)
                next[i * f.amps.size() + j] = out.amps[i] * f.amps[j];
        out.amps = std::move(next);
        out.qubits += f.qubits;
    }
    return out;
}

UBasis u_basis(const ObservablePair& pair) {
    UBasis u;
    u.plus = StateVector{1, {pair.a, pair.b}};
    u.minus = StateVector{1, {std::conj(pair.b), -std::conj(pair.a)}};
    return u;
}

std::vector<StateVector> s1_states(const std::vector<ObservablePair>& observables) {
    const int n = static_cast<int>(observables.size());
    if (n < 2) throw std::invalid_argument("s1_states: need at least 2 qubits");
    const StateVector d_plus{1, {Complex{1, 0}, Complex{0, 0}}};
    const StateVector d_minus{1, {Complex{0, 0}, Complex{1, 0}}};
    std::vector<StateVector> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    for (int m = 0; m < n; ++m) {
        std::vector<StateVector> factors;
        for (int j = 0; j < n; ++j)
            factors.push_back(j == m ? d_plus : u_basis(observables[static_cast<std::size_t>(j)]).plus);
        out.push_back(product_state(factors));
    }
    out.push_back(product_state(std::vector<StateVector>(static_cast<std::size_t>(n), d_minus)));
    return out;
}

std::vector<StateVector> s2_states(const std::vector<ObservablePair>& observables) {
    const int n = static_cast<int>(observables.size());
    if (n < 2) throw std::invalid_argument("s2_states: need at least 2 qubits");
    const StateVector d_plus{1, {Complex{1, 0}, Complex{0, 0}}};
    std::vector<StateVector> out;
    for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
        const int d_count = std::popcount(mask);
        if (d_count < 1 || d_count > n - 2) continue;
        std::vector<StateVector> factors;
        for (int j = 0; j < n; ++j) {
            const bool use_d = (mask >> (n - 1 - j)) & 1u;
            factors.push_back(use_d ? d_plus
                                    : u_basis(observables[static_cast<std::size_t>(j)]).minus);
        }
        out.push_back(product_state(factors));
    }
    return out;
}

std::vector<StateVector> null_space(const std::vector<StateVector>& vectors, std::size_t dim) {
    const int qubits = qubits_of_dim(dim);
    std::vector<StateVector> basis;
    if (vectors.empty()) {
        for (std::size_t i = 0; i < dim; ++i) {
            StateVector e{qubits, std::vector<Complex>(dim, Complex{0, 0})};
            e.amps[i] = 1;
            basis.push_back(std::move(e));
        }
        return basis;
    }
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(vectors.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].amps.size() != dim)
            throw std::invalid_argument("null_space: vector dimension mismatch");
        for (std::size_t j = 0; j < dim; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::conj(vectors[i].amps[j]);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    Eigen::Index rank = 0;
    if (sigma.size() > 0 && sigma(0) > 0) {
        const double cutoff = null_space_threshold * sigma(0);
        while (rank < sigma.size() && sigma(rank) > cutoff) ++rank;
    }
    const Eigen::MatrixXcd& v = svd.matrixV();
    for (Eigen::Index c = rank; c < v.cols(); ++c) {
        StateVector s{qubits, std::vector<Complex>(dim)};
        for (std::size_t j = 0; j < dim; ++j) s.amps[j] = v(static_cast<Eigen::Index>(j), c);
        basis.push_back(std::move(s));
    }
    return basis;
}

StateVector hardy_state(const std::vector<ObservablePair>& observables) {
    const std::size_t dim = std::size_t{1} << observables.size();
    std::vector<StateVector> span = s1_states(observables);
    for (StateVector& s : s2_states(observables)) span.push_back(std::move(s));
    std::vector<StateVector> complement = null_space(span, dim);
    if (complement.size() != 1)
        throw std::runtime_error("hardy_state: complement dimension is " +
                                 std::to_string(complement.size()) + ", expected 1");
    StateVector psi = std::move(complement.front());
    const Complex overlap = inner(all_u_plus(observables), psi);
    const double mag = std::abs(overlap);
    if (mag > 1e-14) {
        const Complex rot = std::conj(overlap) / mag;
        for (Complex& c : psi.amps) c *= rot;
    }
    return psi;
}

double success_probability(const StateVector& state,
                           const std::vector<ObservablePair>& observables) {
    require_match(state, observables, "success_probability");
    require_unit(state, "success_probability");
    return std::norm(inner(all_u_plus(observables), state));
}

double closed_form_p3(double beta1, double beta2, double beta3) {
    for (double b : {beta1, beta2, beta3})
        if (!(b > 0.0 && b < 1.0)) throw std::domain_error("closed_form_p3: beta outside (0,1)");
    const double n = beta1 * beta2 + beta2 * beta3 + beta3 * beta1 - 2.0 * beta1 * beta2 * beta3;
    return beta1 * beta2 * beta3 * (1.0 - n) / n;
}

double symmetric_p3(double k) {
    if (!(k > 0.0 && k < 1.0)) throw std::domain_error("symmetric_p3: k outside (0,1)");
    return k / (3.0 - 2.0 * k) - k * k * k;
}

namespace {

// Golden-section maximization of f on [lo, hi] down to interval width `tol`.
template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double tol,
                                     std::size_t& evals) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    evals += 2;
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        }
        ++evals;
    }
    const double mid = (a + b) / 2;
    ++evals;
    return {mid, f(mid)};
}

// Coordinate descent with shrinking step from a starting tuple.
template <class F>
std::pair<std::vector<double>, double> descend(F&& f, std::vector<double> x, double step,
                                               double lo, double hi, std::size_t& evals) {
    double best = f(x);
    ++evals;
    while (step > 1e-7) {
        bool improved = false;
        for (std::size_t j = 0; j < x.size(); ++j) {
            for (double dir : {+1.0, -1.0}) {
                const double saved = x[j];
                x[j] = std::clamp(saved + dir * step, lo, hi);
                if (x[j] == saved) continue;
                const double val = f(x);
                ++evals;
                if (val > best) {
                    best = val;
                    improved = true;
                    break;  // keep the move, go on to the next coordinate
                }
                x[j] = saved;
            }
        }
        if (!improved) step /= 3.0;
    }
    return {std::move(x), best};
}

}  // namespace

HardyQuantumResult optimize_hardy(int parties, OptimizeMode mode, int grid_points,
                                  std::optional<std::uint64_t> seed) {
    if (parties < 2 || parties > 4)
        throw std::invalid_argument("optimize_hardy: party count must be 2, 3 or 4");
    if (grid_points < 2) throw std::invalid_argument("optimize_hardy: need at least 2 grid points");
    const double lo = observable_margin, hi = 1.0 - observable_margin;
    const std::size_t n = static_cast<std::size_t>(parties);

    HardyQuantumResult res;
    res.mode = mode;

    if (mode == OptimizeMode::symmetric) {
        auto f = [&](double k) { return pipeline_p(std::vector<double>(n, k)); };
        auto [k, p] = golden_max(f, lo, hi, 1e-10, res.evaluations);
        res.betas.assign(n, k);
        res.p = p;
    } else {
        auto f = [&](const std::vector<double>& betas) { return pipeline_p(betas); };

        // Coarse grid; ties keep the lexicographically first tuple.
        std::vector<double> ticks(static_cast<std::size_t>(grid_points));
        for (int g = 0; g < grid_points; ++g)
            ticks[static_cast<std::size_t>(g)] = lo + (hi - lo) * g / (grid_points - 1);
        ticks.back() = hi;  // exact endpoint, no fp drift past the margin
        std::vector<double> cursor(n), best_x;
        double best_p = -1.0;
        std::vector<std::size_t> digit(n, 0);
        bool more = true;
        while (more) {
            for (std::size_t j = 0; j < n; ++j) cursor[j] = ticks[digit[j]];
            const double val = f(cursor);
            ++res.evaluations;
            if (val > best_p) {
                best_p = val;
                best_x = cursor;
            }
            more = false;
            for (std::size_t j = n; j-- > 0;) {
                if (++digit[j] < ticks.size()) {
                    more = true;
                    break;
                }
                digit[j] = 0;
            }
        }

        const double step0 = (hi - lo) / (grid_points - 1);
        auto [x, p] = descend(f, best_x, step0, lo, hi, res.evaluations);
        best_x = std::move(x);
        best_p = p;

        if (seed) {
            std::mt19937_64 rng(*seed);
            std::uniform_real_distribution<double> dist(lo, hi);
            for (int r = 0; r < 8; ++r) {
                std::vector<double> start(n);
                for (double& v : start) v = dist(rng);
                auto [rx, rp] = descend(f, std::move(start), step0, lo, hi, res.evaluations);
                if (rp > best_p) {
                    best_p = rp;
                    best_x = std::move(rx);
                }
            }
        }
        res.betas = std::move(best_x);
        res.p = best_p;
    }

    std::vector<ObservablePair> obs;
    for (double b : res.betas) obs.push_back(ObservablePair::from_beta(b));
    res.state = hardy_state(obs);
    res.p = success_probability(res.state, obs);
    return res;
}

FloatBehavior behavior_from_state(const StateVector& state,
                                  const std::vector<ObservablePair>& observables) {
    require_match(state, observables, "behavior_from_state");
    require_unit(state, "behavior_from_state");
    const int n = static_cast<int>(observables.size());
    const Scenario sc(n);

    // basis[j][setting][outcome]
    std::vector<std::array<std::array<StateVector, 2>, 2>> basis;
    const StateVector d_plus{1, {Complex{1, 0}, Complex{0, 0}}};
    const StateVector d_minus{1, {Complex{0, 0}, Complex{1, 0}}};
    for (int j = 0; j < n; ++j) {
        const UBasis u = u_basis(observables[static_cast<std::size_t>(j)]);
        std::array<std::array<StateVector, 2>, 2> per_party;
        per_party[0] = {u.plus, u.minus};
        per_party[1] = {d_plus, d_minus};
        basis.push_back(std::move(per_party));
    }

    std::vector<double> table(sc.table_size(), 0.0);
    std::vector<int> settings(static_cast<std::size_t>(n)), outcomes(static_cast<std::size_t>(n));
    std::vector<StateVector> factors(static_cast<std::size_t>(n));
    for (std::size_t idx = 0; idx < table.size(); ++idx) {
        decode_index(sc, idx, settings, outcomes);
        for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j)
            factors[j] = basis[j][static_cast<std::size_t>(settings[j])]
                               [static_cast<std::size_t>(outcomes[j])];
        table[idx] = std::norm(inner(product_state(factors), state));
    }
    return FloatBehavior::from_table(sc, std::move(table));
}

StateHardyReport check_state_hardy(const StateVector& state,
                                   const std::vector<ObservablePair>& observables,
                                   double tolerance) {
    require_match(state, observables, "check_state_hardy");
    require_unit(state, "check_state_hardy");
    StateHardyReport rep;
    for (const StateVector& phi : s1_states(observables))
        rep.zeros.push_back(std::norm(inner(phi, state)));
    rep.target = std::norm(inner(all_u_plus(observables), state));
    rep.pass = rep.target > tolerance;
    for (double z : rep.zeros)
        if (z > tolerance) rep.pass = false;
    return rep;
}

}  // namespace hardybox
