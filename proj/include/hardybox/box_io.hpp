#pragma once

#include <string>
#include <vector>

#include "hardybox/behavior.hpp"
#include "hardybox/hardy.hpp"

namespace hardybox {

inline constexpr int box_format_version = 1;
inline constexpr const char* box_encoding_id = "interleaved-setting-outcome-msb-party1";

// A parsed-but-not-yet-validated box file. Schema problems (missing fields,
// wrong table size, unparseable entries) throw std::runtime_error at parse
// time; probability-level validity is the caller's business (validate_table /
// Behavior::from_table), so invalid boxes can still be loaded and reported on.
struct ParsedBox {
    Scenario scenario{2};
    bool is_rational = true;
    std::vector<Rational> rational_table;  // filled when is_rational
    std::vector<double> float_table;       // filled otherwise
};

ParsedBox parse_box_json(const std::string& text);
ParsedBox read_box_file(const std::string& path);

std::string box_to_json(const RationalBehavior& box);
std::string box_to_json(const FloatBehavior& box);
void write_box_file(const std::string& path, const RationalBehavior& box);
void write_box_file(const std::string& path, const FloatBehavior& box);

// Validated load; throws std::invalid_argument if the table is not a proper
// probability distribution (or not rational-valued).
RationalBehavior load_rational_box(const std::string& path);

HardyPattern pattern_from_json(const std::string& text);
HardyPattern read_pattern_file(const std::string& path);
std::string pattern_to_json(const HardyPattern& pattern);
void write_pattern_file(const std::string& path, const HardyPattern& pattern);

}  // namespace hardybox
