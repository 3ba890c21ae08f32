#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hardybox/hardy.hpp"
#include "hardybox/quantum.hpp"

using namespace hardybox;

namespace {

constexpr double kRoot5 = 2.23606797749978969;          // sqrt(5)
constexpr double kTwoQubitMax = (5 * kRoot5 - 11) / 2;  // ~0.09016994
constexpr double kTwoQubitArgmax = (3 - kRoot5) / 2;    // ~0.38196601

// Independent two-qubit closed form, derived by hand from the orthogonality
// system: p = a1 a2 b1 b2 / M with M = b1 b2 + a2 b1 + a1 b2 (squared moduli).
double oracle_p2(double beta1, double beta2) {
    const double a1 = 1 - beta1, a2 = 1 - beta2;
    return a1 * a2 * beta1 * beta2 / (beta1 * beta2 + a2 * beta1 + a1 * beta2);
}

// Independent three-qubit state oracle: the explicit U-product-basis
// expansion of the unique Hardy state (real parameters), re-expressed in the
// D basis through the same u_basis convention.
StateVector oracle_state3(double beta1, double beta2, double beta3) {
    const double b[3] = {std::sqrt(beta1), std::sqrt(beta2), std::sqrt(beta3)};
    const double a[3] = {std::sqrt(1 - beta1), std::sqrt(1 - beta2), std::sqrt(1 - beta3)};
    const double n = beta1 * beta2 + beta2 * beta3 + beta3 * beta1 - 2 * beta1 * beta2 * beta3;
    const double ratio = n / (1 - n);
    double coef[8];
    coef[0b000] = 1;
    coef[0b001] = -a[2] / b[2];
    coef[0b010] = -a[1] / b[1];
    coef[0b011] = -(a[1] * a[2] / (b[1] * b[2])) * ratio;
    coef[0b100] = -a[0] / b[0];
    coef[0b101] = -(a[0] * a[2] / (b[0] * b[2])) * ratio;
    coef[0b110] = -(a[0] * a[1] / (b[0] * b[1])) * ratio;
    coef[0b111] = +(a[0] * a[1] * a[2] / (b[0] * b[1] * b[2])) * ratio;
    const double pre = b[0] * b[1] * b[2] * std::sqrt((1 - n) / n);

    StateVector psi{3, std::vector<Complex>(8, Complex{0, 0})};
    for (int s = 0; s < 8; ++s) {
        std::vector<StateVector> factors;
        for (int j = 0; j < 3; ++j) {
            const UBasis u = u_basis(ObservablePair::from_beta(j == 0 ? beta1 : j == 1 ? beta2 : beta3));
            factors.push_back(((s >> (2 - j)) & 1) ? u.minus : u.plus);
        }
        const StateVector prod = product_state(factors);
        for (int i = 0; i < 8; ++i) psi.amps[i] += pre * coef[s] * prod.amps[i];
    }
    return psi;
}

StateVector random_unit_state(int qubits, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    StateVector s{qubits, std::vector<Complex>(std::size_t{1} << qubits)};
    for (Complex& c : s.amps) c = Complex{g(rng), g(rng)};
    const double nrm = s.norm();
    for (Complex& c : s.amps) c /= nrm;
    return s;
}

std::vector<ObservablePair> random_observables(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> beta(observable_margin, 1 - observable_margin);
    std::uniform_real_distribution<double> phase(0.0, 2 * 3.14159265358979324);
    std::vector<ObservablePair> obs;
    for (int j = 0; j < n; ++j)
        obs.push_back(ObservablePair::from_beta(beta(rng), phase(rng), phase(rng)));
    return obs;
}

}  // namespace

TEST_CASE("observable pairs enforce normalization and the open-domain margin") {
    CHECK_NOTHROW(ObservablePair(Complex{std::sqrt(0.5), 0}, Complex{std::sqrt(0.5), 0}));
    CHECK_THROWS_AS(ObservablePair(Complex{1.0, 0}, Complex{1.0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(ObservablePair(Complex{1.0, 0}, Complex{0.0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(ObservablePair::from_beta(1e-4), std::invalid_argument);
    CHECK_THROWS_AS(ObservablePair::from_beta(1 - 1e-4), std::invalid_argument);
    CHECK(ObservablePair::from_beta(0.25).beta() == doctest::Approx(0.25).epsilon(1e-12));

    // Phases land where the convention says: a = e^{ix}\sqrt{1-b}, b = e^{iy}\sqrt{b}.
    auto pair = ObservablePair::from_beta(0.5, 0.3, -0.7);
    CHECK(std::arg(pair.a) == doctest::Approx(0.3));
    CHECK(std::arg(pair.b) == doctest::Approx(-0.7));
}

TEST_CASE("u_basis produces the orthonormal U eigenvectors") {
    auto even = ObservablePair::from_beta(0.5);
    auto u = u_basis(even);
    CHECK(std::abs(u.plus.amps[0] - std::sqrt(0.5)) < 1e-15);
    CHECK(std::abs(u.plus.amps[1] - std::sqrt(0.5)) < 1e-15);

    std::mt19937_64 rng(7);
    for (int i = 0; i < 25; ++i) {
        auto obs = random_observables(2, rng);
        auto ub = u_basis(obs[0]);
        CHECK(std::abs(ub.plus.norm() - 1) < 1e-12);
        CHECK(std::abs(ub.minus.norm() - 1) < 1e-12);
        CHECK(std::abs(inner(ub.plus, ub.minus)) < 1e-12);
    }
}

TEST_CASE("product states use party-1-slowest indexing") {
    StateVector d_plus{1, {Complex{1, 0}, Complex{0, 0}}};
    StateVector d_minus{1, {Complex{0, 0}, Complex{1, 0}}};
    auto prod = product_state({d_plus, d_minus});  // |D1=+1, D2=-1>
    REQUIRE(prod.amps.size() == 4);
    CHECK(std::abs(prod.amps[0b01] - 1.0) < 1e-15);
    CHECK(prod.qubits == 2);

    auto triple = product_state({d_minus, d_plus, d_minus});  // index 101
    CHECK(std::abs(triple.amps[0b101] - 1.0) < 1e-15);
}

TEST_CASE("s1 yields n+1 states of the documented shape") {
    auto obs2 = {ObservablePair::from_beta(0.3), ObservablePair::from_beta(0.7)};
    auto s1 = s1_states(obs2);
    REQUIRE(s1.size() == 3);
    // |D1=+1, U2=+1> has amplitudes (a2, b2, 0, 0).
    auto pair2 = ObservablePair::from_beta(0.7);
    CHECK(std::abs(s1[0].amps[0] - pair2.a) < 1e-15);
    CHECK(std::abs(s1[0].amps[1] - pair2.b) < 1e-15);
    CHECK(std::abs(s1[0].amps[2]) < 1e-15);
    // The closing state is all-|D=-1>.
    CHECK(std::abs(s1[2].amps[3] - 1.0) < 1e-15);

    auto obs3 = std::vector<ObservablePair>(3, ObservablePair::from_beta(0.4));
    CHECK(s1_states(obs3).size() == 4);
}

TEST_CASE("s2 counts 2^n - n - 2 product states") {
    auto obs2 = std::vector<ObservablePair>(2, ObservablePair::from_beta(0.4));
    CHECK(s2_states(obs2).empty());

    auto obs3 = std::vector<ObservablePair>(3, ObservablePair::from_beta(0.4));
    auto s2 = s2_states(obs3);
    REQUIRE(s2.size() == 3);
    // Each has exactly one |D=+1> factor: overlap with all-D+ equals one
    // factor's <D+|U-> = b* on the other two qubits... check via the known
    // component: amplitude at the all-D+ index 0 equals product of the two
    // U- states' D+ components = conj(b)^2.
    const Complex b = ObservablePair::from_beta(0.4).b;
    for (const auto& s : s2) CHECK(std::abs(s.amps[0] - std::conj(b) * std::conj(b)) < 1e-12);

    auto obs4 = std::vector<ObservablePair>(4, ObservablePair::from_beta(0.4));
    CHECK(s2_states(obs4).size() == 10);
}

TEST_CASE("null_space handles the textbook cases") {
    // e1..e7 in dim 8 -> one-dimensional complement along e8.
    std::vector<StateVector> evecs;
    for (int i = 0; i < 7; ++i) {
        StateVector e{3, std::vector<Complex>(8, Complex{0, 0})};
        e.amps[static_cast<std::size_t>(i)] = 1;
        evecs.push_back(std::move(e));
    }
    auto comp = null_space(evecs, 8);
    REQUIRE(comp.size() == 1);
    CHECK(std::abs(std::abs(comp[0].amps[7]) - 1.0) < 1e-12);

    // A full basis leaves nothing.
    evecs.clear();
    for (int i = 0; i < 4; ++i) {
        StateVector e{2, std::vector<Complex>(4, Complex{0, 0})};
        e.amps[static_cast<std::size_t>(i)] = 1;
        evecs.push_back(std::move(e));
    }
    CHECK(null_space(evecs, 4).empty());

    // No vectors: the whole space, orthonormal.
    auto full = null_space({}, 4);
    REQUIRE(full.size() == 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) CHECK(std::abs(inner(full[i], full[j])) < 1e-15);

    CHECK_THROWS_AS((void)null_space({}, 5), std::invalid_argument);
}

TEST_CASE("dimension ledger for three qubits: 4 + 3 spanning, 1 left over") {
    auto obs = std::vector<ObservablePair>(3, ObservablePair::from_beta(0.37));
    auto s1 = s1_states(obs);
    auto s2 = s2_states(obs);
    CHECK(null_space(s1, 8).size() == 4);  // rank(S1) = 4
    CHECK(null_space(s2, 8).size() == 5);  // rank(S2) = 3
    std::vector<StateVector> all = s1;
    for (auto& s : s2) all.push_back(s);
    CHECK(null_space(all, 8).size() == 1);
}

TEST_CASE("hardy_state matches the explicit three-qubit expansion") {
    for (auto betas : {std::array<double, 3>{0.3, 0.3, 0.3}, std::array<double, 3>{0.5, 0.5, 0.5},
                       std::array<double, 3>{0.2, 0.55, 0.7}}) {
        std::vector<ObservablePair> obs;
        for (double v : betas) obs.push_back(ObservablePair::from_beta(v));
        auto psi = hardy_state(obs);
        auto oracle = oracle_state3(betas[0], betas[1], betas[2]);
        CHECK(std::abs(oracle.norm() - 1) < 1e-12);  // oracle sanity
        for (int i = 0; i < 8; ++i) CHECK(std::abs(psi.amps[i] - oracle.amps[i]) < 1e-9);
    }
}

TEST_CASE("hardy_state is orthogonal to every spanning state") {
    std::mt19937_64 rng(20260813);
    for (int draw = 0; draw < 30; ++draw) {
        const int n = 2 + draw % 3;
        auto obs = random_observables(n, rng);
        auto psi = hardy_state(obs);
        CHECK(std::abs(psi.norm() - 1) < 1e-12);
        auto span = s1_states(obs);
        for (auto& s : s2_states(obs)) span.push_back(s);
        for (const auto& phi : span) CHECK(std::abs(inner(phi, psi)) < 1e-10);
        // canonical phase: positive real target overlap
        std::vector<StateVector> ups;
        for (auto& o : obs) ups.push_back(u_basis(o).plus);
        const Complex t = inner(product_state(ups), psi);
        CHECK(t.real() > 0);
        CHECK(std::abs(t.imag()) < 1e-10);
    }
}

TEST_CASE("success probability agrees with the closed forms") {
    auto obs_k = [](double k, int n) {
        return std::vector<ObservablePair>(static_cast<std::size_t>(n),
                                           ObservablePair::from_beta(k));
    };
    // k = 1/2 three-qubit state: exactly the 1/8 point.
    auto obs = obs_k(0.5, 3);
    CHECK(success_probability(hardy_state(obs), obs) == doctest::Approx(0.125).epsilon(1e-12));

    // beta = (1/2, 1/2, 1/4): N = 0.375, p = 5/48.
    std::vector<ObservablePair> mixed = {ObservablePair::from_beta(0.5),
                                         ObservablePair::from_beta(0.5),
                                         ObservablePair::from_beta(0.25)};
    const double p = success_probability(hardy_state(mixed), mixed);
    CHECK(std::abs(p - 5.0 / 48.0) < 1e-9);
    CHECK(std::abs(p - closed_form_p3(0.5, 0.5, 0.25)) < 1e-9);

    // The bare product target state has p = 1 but is not a Hardy state.
    std::vector<StateVector> ups;
    for (auto& o : mixed) ups.push_back(u_basis(o).plus);
    auto product = product_state(ups);
    CHECK(success_probability(product, mixed) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(check_state_hardy(product, mixed).pass);

    // Non-unit states are refused.
    auto bad = product;
    bad.amps[0] *= 2.0;
    CHECK_THROWS_AS((void)success_probability(bad, mixed), std::invalid_argument);
}

TEST_CASE("pipeline equals closed form on the three-qubit beta grid") {
    const double grid[5] = {0.1, 0.3, 0.5, 0.7, 0.9};
    for (double b1 : grid)
        for (double b2 : grid)
            for (double b3 : grid) {
                std::vector<ObservablePair> obs = {ObservablePair::from_beta(b1),
                                                   ObservablePair::from_beta(b2),
                                                   ObservablePair::from_beta(b3)};
                const double numeric = success_probability(hardy_state(obs), obs);
                CHECK(std::abs(numeric - closed_form_p3(b1, b2, b3)) < 1e-9);
            }
}

TEST_CASE("pipeline equals the independent two-qubit closed form") {
    const double grid[5] = {0.1, 0.3, 0.5, 0.7, 0.9};
    for (double b1 : grid)
        for (double b2 : grid) {
            std::vector<ObservablePair> obs = {ObservablePair::from_beta(b1),
                                               ObservablePair::from_beta(b2)};
            const double numeric = success_probability(hardy_state(obs), obs);
            CHECK(std::abs(numeric - oracle_p2(b1, b2)) < 1e-9);
        }
}

TEST_CASE("closed forms: values, symmetry, domain") {
    CHECK(closed_form_p3(0.5, 0.5, 0.5) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(closed_form_p3(0.25, 0.25, 0.25) == doctest::Approx(0.084375).epsilon(1e-15));
    CHECK(symmetric_p3(0.5) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(symmetric_p3(0.25) == doctest::Approx(0.084375).epsilon(1e-15));

    // Permutation symmetry, essentially exact.
    const double base = closed_form_p3(0.2, 0.45, 0.8);
    CHECK(std::abs(closed_form_p3(0.2, 0.8, 0.45) - base) <= 1e-15);
    CHECK(std::abs(closed_form_p3(0.45, 0.2, 0.8) - base) <= 1e-15);
    CHECK(std::abs(closed_form_p3(0.45, 0.8, 0.2) - base) <= 1e-15);
    CHECK(std::abs(closed_form_p3(0.8, 0.2, 0.45) - base) <= 1e-15);
    CHECK(std::abs(closed_form_p3(0.8, 0.45, 0.2) - base) <= 1e-15);

    // Agreement between the general and symmetric forms.
    for (double k = 0.05; k < 1.0; k += 0.05)
        CHECK(std::abs(closed_form_p3(k, k, k) - symmetric_p3(k)) < 1e-12);

    // Vanishing edges.
    CHECK(closed_form_p3(1e-6, 0.5, 0.5) < 1e-5);
    CHECK(symmetric_p3(0.999999) < 1e-5);

    CHECK_THROWS_AS((void)closed_form_p3(0.0, 0.5, 0.5), std::domain_error);
    CHECK_THROWS_AS((void)closed_form_p3(0.5, 1.0, 0.5), std::domain_error);
    CHECK_THROWS_AS((void)symmetric_p3(0.0), std::domain_error);
    CHECK_THROWS_AS((void)symmetric_p3(1.0), std::domain_error);
}

TEST_CASE("phase choices do not move the success probability") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
    const std::vector<std::vector<double>> fixtures = {
        {0.3, 0.7}, {0.3, 0.6, 0.45}, {0.2, 0.4, 0.6, 0.35}};
    for (const auto& betas : fixtures) {
        std::vector<ObservablePair> plain;
        for (double b : betas) plain.push_back(ObservablePair::from_beta(b));
        const double p0 = success_probability(hardy_state(plain), plain);
        for (int draw = 0; draw < 10; ++draw) {
            std::vector<ObservablePair> dressed;
            for (double b : betas)
                dressed.push_back(ObservablePair::from_beta(b, phase(rng), phase(rng)));
            const double p = success_probability(hardy_state(dressed), dressed);
            CHECK(std::abs(p - p0) < 1e-10);
        }
    }
}

TEST_CASE("symmetric optimization lands on the known maxima") {
    auto r3 = optimize_hardy(3, OptimizeMode::symmetric);
    CHECK(std::abs(r3.betas[0] - 0.5) < 1e-6);
    CHECK(std::abs(r3.p - 0.125) < 1e-9);
    CHECK(r3.betas.size() == 3);

    auto r2 = optimize_hardy(2, OptimizeMode::symmetric);
    CHECK(std::abs(r2.betas[0] - kTwoQubitArgmax) < 1e-6);
    CHECK(std::abs(r2.p - kTwoQubitMax) < 1e-9);

    // Four qubits: exposed as an experiment, no asserted optimum.
    auto r4 = optimize_hardy(4, OptimizeMode::symmetric);
    CHECK(r4.p > 0.0);
    CHECK(r4.p < 1.0);
    CHECK(r4.betas[0] > 0.0);

    CHECK_THROWS_AS((void)optimize_hardy(5, OptimizeMode::symmetric), std::invalid_argument);
    CHECK_THROWS_AS((void)optimize_hardy(3, OptimizeMode::full, 1), std::invalid_argument);
}

TEST_CASE("full optimization matches the symmetric answers") {
    auto r3 = optimize_hardy(3, OptimizeMode::full);
    CHECK(std::abs(r3.p - 0.125) < 1e-6);
    for (double b : r3.betas) CHECK(std::abs(b - 0.5) < 1e-2);

    auto r2 = optimize_hardy(2, OptimizeMode::full);
    CHECK(std::abs(r2.p - kTwoQubitMax) < 1e-4);
    CHECK(std::abs(r2.p - 0.09) < 0.005);  // the two-decimal headline number

    // Seeded random restarts cannot beat (only confirm) the optimum.
    auto seeded = optimize_hardy(2, OptimizeMode::full, 9, 12345u);
    CHECK(std::abs(seeded.p - r2.p) < 1e-7);
}

TEST_CASE("quantum boxes: no-signaling, hardy content, and q = p") {
    auto obs = std::vector<ObservablePair>(3, ObservablePair::from_beta(0.5));
    auto psi = hardy_state(obs);
    auto box = behavior_from_state(psi, obs);
    CHECK(no_signaling_check(box, 1e-12).pass());
    auto rep = hardy_check(box, standard_pattern(3), 1e-10);
    CHECK(rep.zeros_pass);
    CHECK(std::abs(rep.q - 0.125) < 1e-10);
    CHECK(std::abs(box.at(0) - success_probability(psi, obs)) < 1e-12);

    // The product target state violates the zeros: P(D1=+1, U2=+1, U3=+1) = |a1|^2.
    std::vector<StateVector> ups;
    for (auto& o : obs) ups.push_back(u_basis(o).plus);
    auto product_box = behavior_from_state(product_state(ups), obs);
    auto bad = hardy_check(product_box, standard_pattern(3), 1e-10);
    CHECK_FALSE(bad.zeros_pass);
    CHECK(std::abs(bad.zeros[0].value - 0.5) < 1e-12);

    // Two-qubit optimum: q ~= 0.0902.
    auto r2 = optimize_hardy(2, OptimizeMode::symmetric);
    std::vector<ObservablePair> obs2 = {ObservablePair::from_beta(r2.betas[0]),
                                        ObservablePair::from_beta(r2.betas[1])};
    auto box2 = behavior_from_state(r2.state, obs2);
    auto rep2 = hardy_check(box2, standard_pattern(2), 1e-10);
    CHECK(rep2.zeros_pass);
    CHECK(std::abs(rep2.q - 0.0902) < 1e-3);

    CHECK_THROWS_AS((void)behavior_from_state(psi, obs2), std::invalid_argument);
}

TEST_CASE("random states induce no-signaling boxes") {
    std::mt19937_64 rng(4242);
    for (int draw = 0; draw < 20; ++draw) {
        const int n = 2 + draw % 2;
        auto obs = random_observables(n, rng);
        auto box = behavior_from_state(random_unit_state(n, rng), obs);
        CHECK(no_signaling_check(box, 1e-12).pass());
    }
}

TEST_CASE("state-level hardy check") {
    std::mt19937_64 rng(31337);
    auto obs = random_observables(3, rng);
    auto psi = hardy_state(obs);
    CHECK(check_state_hardy(psi, obs).pass);

    // Mixing in an S2 direction keeps the zeros at zero and the target alive.
    auto s2 = s2_states(obs);
    REQUIRE_FALSE(s2.empty());
    StateVector mix = psi;
    for (std::size_t i = 0; i < mix.amps.size(); ++i) mix.amps[i] += s2[0].amps[i];
    const double nrm = mix.norm();
    for (auto& c : mix.amps) c /= nrm;
    auto rep = check_state_hardy(mix, obs);
    CHECK(rep.pass);
    CHECK(rep.target > 0.0);
    REQUIRE(rep.zeros.size() == 4);
    for (double z : rep.zeros) CHECK(z < 1e-10);

    // Any product state fails.
    std::vector<StateVector> ups;
    for (auto& o : obs) ups.push_back(u_basis(o).plus);
    CHECK_FALSE(check_state_hardy(product_state(ups), obs).pass);
}
