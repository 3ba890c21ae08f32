#include "hardybox/hardy.hpp"

namespace hardybox {

namespace {
void validate_event(const Scenario& sc, const JointEvent& e, const char* what) {
    if (static_cast<int>(e.settings.size()) != sc.parties ||
        static_cast<int>(e.outcomes.size()) != sc.parties)
        throw std::invalid_argument(std::string(what) + ": event needs one setting and one "
                                                        "outcome bit per party");
    for (int b : e.settings)
        if (b != 0 && b != 1) throw std::invalid_argument(std::string(what) + ": setting bits must be 0/1");
    for (int b : e.outcomes)
        if (b != 0 && b != 1) throw std::invalid_argument(std::string(what) + ": outcome bits must be 0/1");
}

// Does this deterministic assignment produce the event under its settings?
bool produces(const DeterministicAssignment& a, const JointEvent& e) {
    for (int j = 0; j < a.parties; ++j)
        if (a.outcome(j, e.settings[static_cast<std::size_t>(j)]) !=
            e.outcomes[static_cast<std::size_t>(j)])
            return false;
    return true;
}
}  // namespace

void validate_pattern(const HardyPattern& pattern) {
    if (pattern.zeros.empty())
        throw std::invalid_argument("pattern: needs at least one zero constraint");
    for (const JointEvent& z : pattern.zeros) validate_event(pattern.scenario, z, "pattern zero");
    validate_event(pattern.scenario, pattern.target, "pattern target");
    for (const JointEvent& z : pattern.zeros)
        if (z == pattern.target)
            throw std::invalid_argument("pattern: target coincides with a zero constraint");
}

HardyPattern standard_pattern(int parties) {
    Scenario sc(parties);
    HardyPattern p{sc, {}, {}};
    for (int j = 0; j < parties; ++j) {
        JointEvent z{std::vector<int>(parties, 0), std::vector<int>(parties, 0)};
        z.settings[static_cast<std::size_t>(j)] = 1;
        p.zeros.push_back(std::move(z));
    }
    p.zeros.push_back({std::vector<int>(parties, 1), std::vector<int>(parties, 1)});
    p.target = {std::vector<int>(parties, 0), std::vector<int>(parties, 0)};
    return p;
}

HardyPattern alt_pattern_2() {
    // Zeros at canonical indices 13, 6, 0; target at 14.
    Scenario sc(2);
    HardyPattern p{sc, {}, {}};
    p.zeros.push_back({{1, 0}, {1, 1}});  // index 13
    p.zeros.push_back({{0, 1}, {1, 0}});  // index 6
    p.zeros.push_back({{0, 0}, {0, 0}});  // index 0
    p.target = {{1, 1}, {1, 0}};          // index 14
    return p;
}

DeterministicScan local_realism_scan(const HardyPattern& pattern) {
    validate_pattern(pattern);
    DeterministicScan scan;
    const auto assignments = enumerate_deterministic(pattern.scenario.parties);
    scan.total_count = assignments.size();
    for (const DeterministicAssignment& a : assignments) {
        bool ok = true;
        for (const JointEvent& z : pattern.zeros)
            if (produces(a, z)) {
                ok = false;
                break;
            }
        if (!ok) continue;
        ++scan.satisfying_count;
        const Rational q = produces(a, pattern.target) ? 1 : 0;
        if (!scan.witness || q > scan.max_q) {
            scan.max_q = q;
            scan.witness = a;
        }
    }
    return scan;
}

}  // namespace hardybox
