#include "hardybox/behavior.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace hardybox {

namespace detail {
std::string num_str(double x) {
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}
}  // namespace detail

std::size_t encode_index(const Scenario& sc, const std::vector<int>& settings,
                         const std::vector<int>& outcomes) {
    const int n = sc.parties;
    if (static_cast<int>(settings.size()) != n || static_cast<int>(outcomes.size()) != n)
        throw std::invalid_argument("encode_index: need one setting and one outcome per party");
    std::size_t idx = 0;
    for (int j = 0; j < n; ++j) {
        if ((settings[j] & ~1) || (outcomes[j] & ~1))
            throw std::invalid_argument("encode_index: settings/outcomes must be 0 or 1");
        const int shift = 2 * (n - 1 - j);
        idx += static_cast<std::size_t>(settings[j]) << (shift + 1);
        idx += static_cast<std::size_t>(outcomes[j]) << shift;
    }
    return idx;
}

void decode_index(const Scenario& sc, std::size_t index, std::vector<int>& settings,
                  std::vector<int>& outcomes) {
    const int n = sc.parties;
    if (index >= sc.table_size()) throw std::out_of_range("decode_index: index out of range");
    settings.assign(n, 0);
    outcomes.assign(n, 0);
    for (int j = 0; j < n; ++j) {
        const int shift = 2 * (n - 1 - j);
        settings[j] = static_cast<int>((index >> (shift + 1)) & 1u);
        outcomes[j] = static_cast<int>((index >> shift) & 1u);
    }
}

std::size_t context_of(const Scenario& sc, std::size_t index) {
    std::size_t ctx = 0;
    for (int j = 0; j < sc.parties; ++j)
        ctx |= ((index >> (2 * (sc.parties - 1 - j) + 1)) & 1u) << (sc.parties - 1 - j);
    return ctx;
}

std::size_t outcome_of(const Scenario& sc, std::size_t index) {
    std::size_t out = 0;
    for (int j = 0; j < sc.parties; ++j)
        out |= ((index >> (2 * (sc.parties - 1 - j))) & 1u) << (sc.parties - 1 - j);
    return out;
}

std::size_t index_from_parts(const Scenario& sc, std::size_t context, std::size_t outcome) {
    std::size_t idx = 0;
    for (int j = 0; j < sc.parties; ++j) {
        const int shift = 2 * (sc.parties - 1 - j);
        idx |= ((context >> (sc.parties - 1 - j)) & 1u) << (shift + 1);
        idx |= ((outcome >> (sc.parties - 1 - j)) & 1u) << shift;
    }
    return idx;
}

namespace {
// block_canonical[k-1] = canonical flat index of the two-party entry p_k.
// Layout: p1..p4 = (A,B) outcomes ++,+-,-+,--; p5..p8 = (A',B); p9..p12 =
// (A,B'); p13..p16 = (A',B'). A'/B' are canonical setting 0 with direct
// signs; A/B are canonical setting 1 with inverted signs.
constexpr std::array<std::size_t, 16> block_canonical = {
    15, 14, 11, 10,  // (A,B):   both setting 1, inverted outcome bits
    3, 2, 7, 6,      // (A',B):  settings (0,1)
    12, 13, 8, 9,    // (A,B'):  settings (1,0)
    0, 1, 4, 5,      // (A',B'): both setting 0, direct outcome bits
};
}  // namespace

std::size_t block_to_canonical(int block_label_1_based) {
    if (block_label_1_based < 1 || block_label_1_based > 16)
        throw std::out_of_range("block label must be in [1,16]");
    return block_canonical[static_cast<std::size_t>(block_label_1_based - 1)];
}

int canonical_to_block(std::size_t canonical_index) {
    for (int k = 0; k < 16; ++k)
        if (block_canonical[static_cast<std::size_t>(k)] == canonical_index) return k + 1;
    throw std::out_of_range("canonical index must be in [0,15]");
}

std::string classic_label(const Scenario& sc, std::size_t index) {
    if (index >= sc.table_size()) throw std::out_of_range("classic_label: index out of range");
    if (sc.parties == 2) return "p" + std::to_string(canonical_to_block(index));
    if (sc.parties == 3) return "p" + std::to_string(index);
    return {};
}

RationalBehavior deterministic_box(const DeterministicAssignment& a) {
    Scenario sc(a.parties);
    std::vector<Rational> table(sc.table_size(), Rational(0));
    std::vector<int> settings(a.parties), outcomes(a.parties);
    for (std::size_t ctx = 0; ctx < sc.context_count(); ++ctx) {
        for (int j = 0; j < a.parties; ++j) {
            settings[j] = static_cast<int>((ctx >> (a.parties - 1 - j)) & 1u);
            outcomes[j] = a.outcome(j, settings[j]);
        }
        table[encode_index(sc, settings, outcomes)] = 1;
    }
    return RationalBehavior::from_table(sc, std::move(table));
}

std::vector<DeterministicAssignment> enumerate_deterministic(int parties) {
    Scenario sc(parties);  // validates the range
    const std::size_t count = std::size_t{1} << (2 * parties);
    std::vector<DeterministicAssignment> out;
    out.reserve(count);
    for (std::size_t mask = 0; mask < count; ++mask) {
        std::vector<int> bits(2 * static_cast<std::size_t>(parties));
        for (std::size_t b = 0; b < bits.size(); ++b) bits[b] = static_cast<int>((mask >> b) & 1u);
        out.emplace_back(parties, std::move(bits));
    }
    return out;
}

RationalBehavior convex_combination(const std::vector<Rational>& weights,
                                    const std::vector<RationalBehavior>& boxes) {
    if (weights.empty() || weights.size() != boxes.size())
        throw std::invalid_argument("convex_combination: need matching weights and boxes");
    Rational total(0);
    for (const Rational& w : weights) {
        if (w < 0) throw std::invalid_argument("convex_combination: negative weight");
        total += w;
    }
    if (total != 1) throw std::invalid_argument("convex_combination: weights must sum to 1");
    const Scenario sc = boxes.front().scenario();
    std::vector<Rational> table(sc.table_size(), Rational(0));
    for (std::size_t b = 0; b < boxes.size(); ++b) {
        if (!(boxes[b].scenario() == sc))
            throw std::invalid_argument("convex_combination: mixed scenarios");
        for (std::size_t i = 0; i < table.size(); ++i) table[i] += weights[b] * boxes[b].at(i);
    }
    return RationalBehavior::from_table(sc, std::move(table));
}

namespace {
RationalBehavior half_at(int parties, std::initializer_list<std::size_t> support) {
    Scenario sc(parties);
    std::vector<Rational> table(sc.table_size(), Rational(0));
    for (std::size_t i : support) table[i] = Rational(1, 2);
    return RationalBehavior::from_table(sc, std::move(table));
}
}  // namespace

RationalBehavior preset_box(const std::string& name) {
    if (name == "eq32-max-hardy")
        return half_at(2, {0, 3, 5, 6, 9, 11, 12, 14});
    if (name == "eq40-max-hardy-3")
        return half_at(3, {0, 3, 12, 15, 17, 18, 29, 30, 33, 35, 45, 47, 48, 50, 60, 62});
    if (name == "footnote-alt-hardy")
        return half_at(2, {1, 2, 4, 7, 9, 11, 12, 14});
    throw std::invalid_argument("unknown preset box '" + name + "'");
}

std::vector<std::string> preset_names() {
    return {"eq32-max-hardy", "eq40-max-hardy-3", "footnote-alt-hardy"};
}

}  // namespace hardybox
