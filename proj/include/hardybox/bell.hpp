#pragma once
// CHSH evaluation of two-party boxes: per-context correlators and the eight
// sign variants of the Bell combination
//
//   B = |(-1)^alpha E(A',B) + (-1)^beta E(A,B') + (-1)^gamma E(A',B')
//        + (-1)^(alpha+beta+gamma+1) E(A,B)|
//
// where (0,0,0) is the textbook expression E(A',B)+E(A,B')+E(A',B')-E(A,B).

#include <array>
#include <stdexcept>

#include "hardybox/behavior.hpp"

namespace hardybox {

// Which observable each party measures. A "primed" observable is the one the
// canonical tables store under setting 0 (its +1 outcome is outcome bit 0);
// the unprimed observable lives under setting 1 with inverted outcome signs.
struct ObservableChoice {
    bool party1_primed = false;
    bool party2_primed = false;
};

// The (alpha, beta, gamma) bits selecting one CHSH expression variant.
struct ChshSigns {
    int alpha = 0;
    int beta = 0;
    int gamma = 0;
};

// All eight sign tuples in lexicographic (alpha, beta, gamma) order.
std::array<ChshSigns, 8> all_chsh_signs();

// One evaluated combination: the four correlators in the fixed order
// E(A,B), E(A',B), E(A,B'), E(A',B'), and the absolute value B.
template <class T>
struct ChshValue {
    std::array<T, 4> correlators{};
    T b{};
};

template <class T>
struct ChshBest {
    ChshSigns signs{};
    ChshValue<T> value{};
};

// E = P(++) - P(+-) - P(-+) + P(--) for the chosen pair of observables.
template <class T>
T correlator(const Behavior<T>& box, ObservableChoice which) {
    if (box.scenario().parties != 2)
        throw std::invalid_argument("correlator: CHSH is defined for two-party boxes only");
    // Group order in the classic block labels: (A,B) = p1..p4, (A',B) =
    // p5..p8, (A,B') = p9..p12, (A',B') = p13..p16; rows ++, +-, -+, --.
    const int group = (which.party1_primed ? 1 : 0) + (which.party2_primed ? 2 : 0);
    const int first = 4 * group + 1;
    const T pp = box.at(block_to_canonical(first + 0));
    const T pm = box.at(block_to_canonical(first + 1));
    const T mp = box.at(block_to_canonical(first + 2));
    const T mm = box.at(block_to_canonical(first + 3));
    return pp - pm - mp + mm;
}

template <class T>
ChshValue<T> chsh(const Behavior<T>& box, ChshSigns signs) {
    for (int bit : {signs.alpha, signs.beta, signs.gamma})
        if (bit != 0 && bit != 1)
            throw std::invalid_argument("chsh: sign bits must be 0 or 1");
    ChshValue<T> out;
    out.correlators[0] = correlator(box, ObservableChoice{false, false});  // E(A,B)
    out.correlators[1] = correlator(box, ObservableChoice{true, false});   // E(A',B)
    out.correlators[2] = correlator(box, ObservableChoice{false, true});   // E(A,B')
    out.correlators[3] = correlator(box, ObservableChoice{true, true});    // E(A',B')
    auto flip = [](int bit, const T& v) { return bit ? T(-v) : v; };
    const T sum = flip(signs.alpha, out.correlators[1]) + flip(signs.beta, out.correlators[2]) +
                  flip(signs.gamma, out.correlators[3]) +
                  flip((signs.alpha + signs.beta + signs.gamma + 1) % 2, out.correlators[0]);
    out.b = detail::num_abs(sum);
    return out;
}

// Maximum of chsh() over all eight sign tuples; ties keep the first tuple in
// lexicographic (alpha, beta, gamma) order.
template <class T>
ChshBest<T> chsh_max_over_signs(const Behavior<T>& box) {
    ChshBest<T> best;
    bool have = false;
    for (const ChshSigns& s : all_chsh_signs()) {
        ChshValue<T> v = chsh(box, s);
        if (!have || v.b > best.value.b) {
            best = {s, std::move(v)};
            have = true;
        }
    }
    return best;
}

}  // namespace hardybox
