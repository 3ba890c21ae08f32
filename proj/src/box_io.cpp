#include "hardybox/box_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace hardybox {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& what) {
    throw std::runtime_error("box/pattern schema: " + what);
}

json parse_or_throw(const std::string& text) {
    json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw std::runtime_error("not valid JSON");
    return j;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

int parties_field(const json& j) {
    if (!j.contains("parties") || !j["parties"].is_number_integer())
        schema_error("missing integer field 'parties'");
    const int n = j["parties"].get<int>();
    if (n < 2 || n > 6) schema_error("'parties' must be in [2,6]");
    return n;
}

json box_header(const Scenario& sc, const char* numeric) {
    json j;
    j["format_version"] = box_format_version;
    j["parties"] = sc.parties;
    j["encoding"] = box_encoding_id;
    j["numeric"] = numeric;
    return j;
}

JointEvent event_from_json(const json& j, int parties, const char* what) {
    if (!j.is_object() || !j.contains("settings") || !j.contains("outcomes"))
        schema_error(std::string(what) + " needs 'settings' and 'outcomes' arrays");
    JointEvent e;
    for (const char* key : {"settings", "outcomes"}) {
        const json& arr = j[key];
        if (!arr.is_array() || static_cast<int>(arr.size()) != parties)
            schema_error(std::string(what) + "." + key + " must list one bit per party");
        for (const json& b : arr) {
            if (!b.is_number_integer() || (b.get<int>() != 0 && b.get<int>() != 1))
                schema_error(std::string(what) + "." + key + " bits must be 0/1");
            (key[0] == 's' ? e.settings : e.outcomes).push_back(b.get<int>());
        }
    }
    return e;
}

json event_to_json(const JointEvent& e) {
    return json{{"settings", e.settings}, {"outcomes", e.outcomes}};
}

}  // namespace

ParsedBox parse_box_json(const std::string& text) {
    const json j = parse_or_throw(text);
    if (!j.is_object()) schema_error("top level must be an object");
    if (!j.contains("format_version") || j["format_version"] != box_format_version)
        schema_error("missing or unsupported 'format_version'");
    if (j.contains("encoding") && j["encoding"] != box_encoding_id)
        schema_error("unknown 'encoding' (expected " + std::string(box_encoding_id) + ")");
    ParsedBox box;
    box.scenario = Scenario(parties_field(j));
    if (!j.contains("numeric") || !j["numeric"].is_string())
        schema_error("missing string field 'numeric'");
    const std::string numeric = j["numeric"].get<std::string>();
    if (numeric != "rational" && numeric != "float")
        schema_error("'numeric' must be \"rational\" or \"float\"");
    box.is_rational = numeric == "rational";
    if (!j.contains("table") || !j["table"].is_array() ||
        j["table"].size() != box.scenario.table_size())
        schema_error("'table' must be an array of " + std::to_string(box.scenario.table_size()) +
                     " entries");
    for (const json& v : j["table"]) {
        if (box.is_rational) {
            if (!v.is_string()) schema_error("rational table entries must be \"num/den\" strings");
            try {
                box.rational_table.push_back(rational_from_string(v.get<std::string>()));
            } catch (const std::invalid_argument& e) {
                schema_error(e.what());
            }
        } else {
            if (!v.is_number()) schema_error("float table entries must be numbers");
            box.float_table.push_back(v.get<double>());
        }
    }
    return box;
}

ParsedBox read_box_file(const std::string& path) { return parse_box_json(slurp(path)); }

std::string box_to_json(const RationalBehavior& box) {
    json j = box_header(box.scenario(), "rational");
    json table = json::array();
    for (const Rational& v : box.table()) table.push_back(to_fraction_string(v));
    j["table"] = std::move(table);
    return j.dump(2) + "\n";
}

std::string box_to_json(const FloatBehavior& box) {
    json j = box_header(box.scenario(), "float");
    j["table"] = box.table();
    return j.dump(2) + "\n";
}

void write_box_file(const std::string& path, const RationalBehavior& box) {
    spill(path, box_to_json(box));
}

void write_box_file(const std::string& path, const FloatBehavior& box) {
    spill(path, box_to_json(box));
}

RationalBehavior load_rational_box(const std::string& path) {
    ParsedBox parsed = read_box_file(path);
    if (!parsed.is_rational)
        throw std::invalid_argument("'" + path + "' holds a float box, need a rational one");
    return RationalBehavior::from_table(parsed.scenario, std::move(parsed.rational_table));
}

HardyPattern pattern_from_json(const std::string& text) {
    const json j = parse_or_throw(text);
    if (!j.is_object()) schema_error("top level must be an object");
    const int n = parties_field(j);
    if (!j.contains("zeros") || !j["zeros"].is_array() || j["zeros"].empty())
        schema_error("'zeros' must be a non-empty array of events");
    if (!j.contains("target")) schema_error("missing 'target' event");
    HardyPattern p{Scenario(n), {}, {}};
    for (const json& z : j["zeros"]) p.zeros.push_back(event_from_json(z, n, "zero"));
    p.target = event_from_json(j["target"], n, "target");
    validate_pattern(p);
    return p;
}

HardyPattern read_pattern_file(const std::string& path) {
    return pattern_from_json(slurp(path));
}

std::string pattern_to_json(const HardyPattern& pattern) {
    validate_pattern(pattern);
    json j;
    j["parties"] = pattern.scenario.parties;
    json zeros = json::array();
    for (const JointEvent& z : pattern.zeros) zeros.push_back(event_to_json(z));
    j["zeros"] = std::move(zeros);
    j["target"] = event_to_json(pattern.target);
    return j.dump(2) + "\n";
}

void write_pattern_file(const std::string& path, const HardyPattern& pattern) {
    spill(path, pattern_to_json(pattern));
}

}  // namespace hardybox
