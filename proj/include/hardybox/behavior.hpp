#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hardybox/rational.hpp"

namespace hardybox {

// ---------------------------------------------------------------------------
// Scenario: n parties, two settings per party, two outcomes per setting.
//
// Canonical flat encoding of a joint probability entry, generalized from the
// three-party convention 32*s1 + 16*o1 + 8*s2 + 4*o2 + 2*s3 + o3: party 1 is
// most significant, and each party contributes a (setting, outcome) bit pair
// in that order. Setting bit 0 is the X/U-type observable, 1 the Y/D-type;
// outcome bit 0 means "+1"/up, 1 means "-1"/down.
// ---------------------------------------------------------------------------

struct Scenario {
    int parties = 2;

    explicit Scenario(int n) : parties(n) {
        if (n < 2 || n > 6)
            throw std::domain_error("scenario: party count must be in [2,6], got " +
                                    std::to_string(n));
    }

    std::size_t context_count() const { return std::size_t{1} << parties; }
    std::size_t outcomes_per_context() const { return std::size_t{1} << parties; }
    std::size_t table_size() const { return std::size_t{1} << (2 * parties); }

    bool operator==(const Scenario&) const = default;
};

std::size_t encode_index(const Scenario& sc, const std::vector<int>& settings,
                         const std::vector<int>& outcomes);
void decode_index(const Scenario& sc, std::size_t index, std::vector<int>& settings,
                  std::vector<int>& outcomes);

// Context id = setting bits only (party 1 most significant); outcome id likewise.
std::size_t context_of(const Scenario& sc, std::size_t index);
std::size_t outcome_of(const Scenario& sc, std::size_t index);
std::size_t index_from_parts(const Scenario& sc, std::size_t context, std::size_t outcome);

// Classic per-index label: the 1-based p1..p16 block label for two parties,
// the 0-based p0..p63 canonical label for three. Empty for other n.
std::string classic_label(const Scenario& sc, std::size_t index);

// Two-party block layout: entries p1..p16 tabulated as four contexts
// (A,B), (A',B), (A,B'), (A',B') with outcome rows (++, +-, -+, --).
// The primed observables are the canonical setting-0 measurements with
// outcome +1 = bit 0; the unprimed ones are the setting-1 measurements
// with INVERTED outcome signs (+1 = bit 1). This is the labeling under
// which the maximal Hardy box has its familiar table and CHSH value.
std::size_t block_to_canonical(int block_label_1_based);
int canonical_to_block(std::size_t canonical_index);

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct ValidationIssue {
    enum class Kind { range, normalization };
    Kind kind;
    std::size_t where;  // table index for range, context id for normalization
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
};

namespace detail {
inline double num_abs(double x) { return std::fabs(x); }
inline Rational num_abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }
inline double default_tol(double) { return 1e-12; }
inline Rational default_tol(const Rational&) { return Rational(0); }
std::string num_str(double x);
inline std::string num_str(const Rational& x) { return to_fraction_string(x); }
}  // namespace detail

template <class T>
ValidationReport validate_table(const Scenario& sc, const std::vector<T>& values,
                                T tol = detail::default_tol(T{})) {
    ValidationReport rep;
    if (values.size() != sc.table_size())
        throw std::invalid_argument("table has " + std::to_string(values.size()) +
                                    " entries, expected " + std::to_string(sc.table_size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < T(0) - tol || values[i] > T(1) + tol)
            rep.issues.push_back({ValidationIssue::Kind::range, i,
                                  "entry x" + std::to_string(i) + " = " + detail::num_str(values[i]) +
                                      " outside [0,1]"});
    }
    for (std::size_t c = 0; c < sc.context_count(); ++c) {
        T sum{0};
        for (std::size_t o = 0; o < sc.outcomes_per_context(); ++o)
            sum += values[index_from_parts(sc, c, o)];
        if (detail::num_abs(sum - T(1)) > tol)
            rep.issues.push_back({ValidationIssue::Kind::normalization, c,
                                  "context " + std::to_string(c) + " sums to " +
                                      detail::num_str(sum) + ", expected 1"});
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Behavior (a "box"): immutable validated joint probability table.
// Normalization and range are invariants; no-signaling is NOT (verify it
// explicitly with no_signaling_check).
// ---------------------------------------------------------------------------

template <class T>
class Behavior {
public:
    static Behavior from_table(const Scenario& sc, std::vector<T> values,
                               T tol = detail::default_tol(T{})) {
        ValidationReport rep = validate_table(sc, values, tol);
        if (!rep.ok()) throw std::invalid_argument("invalid box: " + rep.issues.front().message);
        return Behavior(sc, std::move(values));
    }

    const Scenario& scenario() const { return scenario_; }
    const std::vector<T>& table() const { return table_; }

    const T& at(std::size_t index) const { return table_.at(index); }
    const T& at(const std::vector<int>& settings, const std::vector<int>& outcomes) const {
        return table_[encode_index(scenario_, settings, outcomes)];
    }

private:
    Behavior(const Scenario& sc, std::vector<T> values)
        : scenario_(sc), table_(std::move(values)) {}

    Scenario scenario_;
    std::vector<T> table_;
};

using RationalBehavior = Behavior<Rational>;
using FloatBehavior = Behavior<double>;

// ---------------------------------------------------------------------------
// No-signaling check
// ---------------------------------------------------------------------------

template <class T>
struct NoSignalingViolation {
    int party;                      // whose setting the marginal must not depend on
    std::vector<int> co_settings;   // settings of the remaining parties
    std::vector<int> co_outcomes;   // outcomes of the remaining parties
    T lhs, rhs;                     // marginal with party's setting 0 vs 1
    std::string equation;           // "x0+x1 = x2+x3"-style, canonical indices
};

template <class T>
struct NoSignalingReport {
    std::vector<NoSignalingViolation<T>> violations;
    bool pass() const { return violations.empty(); }
};

template <class T>
NoSignalingReport<T> no_signaling_check(const Behavior<T>& box,
                                        T tol = detail::default_tol(T{})) {
    const Scenario& sc = box.scenario();
    const int n = sc.parties;
    NoSignalingReport<T> rep;
    std::vector<int> settings(n), outcomes(n);
    const std::size_t co_count = std::size_t{1} << (n - 1);
    for (int m = 0; m < n; ++m) {
        for (std::size_t cs = 0; cs < co_count; ++cs) {
            for (std::size_t co = 0; co < co_count; ++co) {
                // Distribute cs/co bits over the parties other than m.
                int pos = 0;
                for (int j = 0; j < n; ++j) {
                    if (j == m) continue;
                    settings[j] = static_cast<int>((cs >> (n - 2 - pos)) & 1u);
                    outcomes[j] = static_cast<int>((co >> (n - 2 - pos)) & 1u);
                    ++pos;
                }
                T side[2];
                std::string eq[2];
                for (int s = 0; s < 2; ++s) {
                    settings[m] = s;
                    T sum{0};
                    for (int om = 0; om < 2; ++om) {
                        outcomes[m] = om;
                        std::size_t idx = encode_index(sc, settings, outcomes);
                        sum += box.at(idx);
                        eq[s] += (om ? "+x" : "x") + std::to_string(idx);
                    }
                    side[s] = sum;
                }
                if (detail::num_abs(side[0] - side[1]) > tol) {
                    NoSignalingViolation<T> v;
                    v.party = m + 1;
                    for (int j = 0; j < n; ++j) {
                        if (j == m) continue;
                        v.co_settings.push_back(settings[j]);
                        v.co_outcomes.push_back(outcomes[j]);
                    }
                    v.lhs = side[0];
                    v.rhs = side[1];
                    v.equation = eq[0] + " = " + eq[1];
                    rep.violations.push_back(std::move(v));
                }
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Marginals (well-defined only for no-signaling boxes)
// ---------------------------------------------------------------------------

template <class T>
struct Marginal {
    std::vector<int> parties;   // 1-based, ascending
    std::vector<int> settings;  // one bit per listed party
    std::vector<T> probs;       // indexed by outcome bits, first listed party MSB
};

template <class T>
Marginal<T> marginal(const Behavior<T>& box, const std::vector<int>& parties,
                     const std::vector<int>& subset_settings,
                     T tol = detail::default_tol(T{})) {
    const Scenario& sc = box.scenario();
    const int n = sc.parties;
    if (parties.empty() || parties.size() != subset_settings.size())
        throw std::invalid_argument("marginal: parties/settings size mismatch");
    std::vector<int> in_subset(n, -1);
    for (std::size_t i = 0; i < parties.size(); ++i) {
        int p = parties[i];
        if (p < 1 || p > n) throw std::invalid_argument("marginal: party out of range");
        if (in_subset[p - 1] >= 0) throw std::invalid_argument("marginal: duplicate party");
        in_subset[p - 1] = static_cast<int>(i);
    }
    const int k = static_cast<int>(parties.size());
    const int others = n - k;
    const std::size_t completions = std::size_t{1} << others;
    const std::size_t other_outcomes = std::size_t{1} << others;
    std::vector<T> first;
    std::vector<int> settings(n), outcomes(n);
    for (std::size_t comp = 0; comp < completions; ++comp) {
        std::vector<T> dist(std::size_t{1} << k, T{0});
        int pos = 0;
        for (int j = 0; j < n; ++j) {
            if (in_subset[j] >= 0)
                settings[j] = subset_settings[in_subset[j]];
            else
                settings[j] = others == 0 ? 0 : static_cast<int>((comp >> (others - 1 - pos++)) & 1u);
        }
        for (std::size_t so = 0; so < dist.size(); ++so) {
            for (std::size_t oo = 0; oo < other_outcomes; ++oo) {
                int opos = 0;
                for (int j = 0; j < n; ++j) {
                    if (in_subset[j] >= 0)
                        outcomes[j] = static_cast<int>((so >> (k - 1 - in_subset[j])) & 1u);
                    else
                        outcomes[j] = others == 0 ? 0 : static_cast<int>((oo >> (others - 1 - opos++)) & 1u);
                }
                dist[so] += box.at(encode_index(sc, settings, outcomes));
            }
        }
        if (first.empty()) {
            first = dist;
        } else {
            for (std::size_t so = 0; so < dist.size(); ++so)
                if (detail::num_abs(dist[so] - first[so]) > tol)
                    throw std::runtime_error(
                        "marginal is ill-defined: behavior signals (completion " +
                        std::to_string(comp) + " disagrees)");
        }
    }
    return Marginal<T>{parties, subset_settings, std::move(first)};
}

// ---------------------------------------------------------------------------
// Deterministic boxes (local-realistic extreme points)
// ---------------------------------------------------------------------------

struct DeterministicAssignment {
    int parties;
    std::vector<int> bits;  // bits[2*party + setting], parties 0-based here

    DeterministicAssignment(int n, std::vector<int> b) : parties(n), bits(std::move(b)) {
        if (static_cast<int>(bits.size()) != 2 * n)
            throw std::invalid_argument("deterministic assignment needs 2n bits");
        for (int v : bits)
            if (v != 0 && v != 1) throw std::invalid_argument("assignment bits must be 0/1");
    }

    int outcome(int party_0_based, int setting) const {
        return bits[2 * party_0_based + setting];
    }
};

RationalBehavior deterministic_box(const DeterministicAssignment& a);
std::vector<DeterministicAssignment> enumerate_deterministic(int parties);

// Exact convex combination; weights must be nonnegative and sum to 1.
RationalBehavior convex_combination(const std::vector<Rational>& weights,
                                    const std::vector<RationalBehavior>& boxes);

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

// Known boxes: "eq32-max-hardy" (the unique two-party maximal Hardy box),
// "eq40-max-hardy-3" (a three-party maximal Hardy box),
// "footnote-alt-hardy" (maximal box for the sign-permuted Hardy pattern).
RationalBehavior preset_box(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace hardybox
