#pragma once

#include <optional>

#include "hardybox/behavior.hpp"

namespace hardybox {

namespace detail {
// Forbidden-event tolerance: exact for rationals; floating boxes built from
// the quantum pipeline carry O(1e-14) residuals, so 1e-10 is comfortably
// above noise and far below any genuine probability.
inline Rational hardy_zero_tol(Rational) { return Rational(0); }
inline double hardy_zero_tol(double) { return 1e-10; }
}  // namespace detail

// A joint event: one setting and one outcome bit per party.
struct JointEvent {
    std::vector<int> settings;
    std::vector<int> outcomes;

    bool operator==(const JointEvent&) const = default;
};

// A Hardy-type pattern: a set of joint probabilities forced to zero plus a
// target probability q to be made large. The paradox: with the standard
// pattern every local-realistic box has q = 0, yet q > 0 is attainable.
struct HardyPattern {
    Scenario scenario;
    std::vector<JointEvent> zeros;
    JointEvent target;
};

// Throws std::invalid_argument on size/bit problems or a target that is
// itself one of the zeros.
void validate_pattern(const HardyPattern& pattern);

// The n-party ladder pattern: for each party, the event "this party measures
// its second observable and everyone sees +" is forbidden; so is "everyone
// measures the second observable and sees -". The target is "everyone
// measures the first observable and sees +".
HardyPattern standard_pattern(int parties);

// The sign-permuted two-party variant of the same paradox.
HardyPattern alt_pattern_2();

template <class T>
struct HardyZeroValue {
    std::size_t index;  // canonical flat index
    std::string label;  // classic p_k label where defined
    T value;
    bool ok;
};

template <class T>
struct HardyReport {
    std::vector<HardyZeroValue<T>> zeros;
    bool zeros_pass = false;  // every forbidden event is within tol of zero
    T q{};                    // probability of the target event
    std::size_t target_index = 0;
    std::string target_label;
    bool paradoxical() const { return zeros_pass && q > T(0); }
};

template <class T>
HardyReport<T> hardy_check(const Behavior<T>& box, const HardyPattern& pattern,
                           T tol = detail::hardy_zero_tol(T{})) {
    validate_pattern(pattern);
    if (!(box.scenario() == pattern.scenario))
        throw std::invalid_argument("hardy_check: box and pattern disagree on party count");
    HardyReport<T> rep;
    rep.zeros_pass = true;
    for (const JointEvent& z : pattern.zeros) {
        const std::size_t idx = encode_index(box.scenario(), z.settings, z.outcomes);
        const T v = box.at(idx);
        const bool ok = detail::num_abs(v) <= tol;
        rep.zeros.push_back({idx, classic_label(box.scenario(), idx), v, ok});
        if (!ok) rep.zeros_pass = false;
    }
    rep.target_index = encode_index(box.scenario(), pattern.target.settings, pattern.target.outcomes);
    rep.target_label = classic_label(box.scenario(), rep.target_index);
    rep.q = box.at(rep.target_index);
    return rep;
}

// Exhaustive scan of all 2^(2n) deterministic boxes: among those satisfying
// every zero exactly, the largest attainable target probability.
struct DeterministicScan {
    Rational max_q{0};
    std::size_t satisfying_count = 0;
    std::size_t total_count = 0;
    std::optional<DeterministicAssignment> witness;  // attains max_q
};

DeterministicScan local_realism_scan(const HardyPattern& pattern);

}  // namespace hardybox
