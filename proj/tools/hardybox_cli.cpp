// hardybox: run the LP and quantum Hardy experiments, verify boxes, emit
// presets and CHSH reports.
//
// Exit codes: 0 success, 1 check failure, 2 usage error, 3 I/O or parse error.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "hardybox/behavior.hpp"
#include "hardybox/bell.hpp"
#include "hardybox/box_io.hpp"
#include "hardybox/hardy.hpp"
#include "hardybox/lp.hpp"
#include "hardybox/quantum.hpp"

using namespace hardybox;
using nlohmann::json;

namespace {

enum class Format { table, json_out, csv };

struct GlobalFlags {
    bool want_json = false;
    bool want_csv = false;
    double tol = 1e-10;  // floating-point boxes only; rationals check exactly
    std::optional<std::uint64_t> seed;

    Format format() const {
        return want_json ? Format::json_out : want_csv ? Format::csv : Format::table;
    }
};

std::string fs(double v, int digits = 10) {
    std::ostringstream os;
    os << std::setprecision(digits) << v;
    return os.str();
}

std::string rs(const Rational& v) { return to_fraction_string(v); }

// "x0" plus the classic p_k label where one is defined (2 and 3 parties).
std::string index_label(const Scenario& sc, std::size_t idx) {
    std::string out = "x" + std::to_string(idx);
    const std::string classic = classic_label(sc, idx);
    if (!classic.empty()) out += " [" + classic + "]";
    return out;
}

double wall_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

void emit(const GlobalFlags& g, const json& report, const std::string& table_text) {
    if (g.format() == Format::json_out)
        std::cout << report.dump(2) << "\n";
    else
        std::cout << table_text;
}

HardyPattern resolve_pattern(const std::string& spec, int parties) {
    if (spec == "standard") return standard_pattern(parties);
    if (spec == "alt") {
        if (parties != 2)
            throw std::invalid_argument("the alternate sign-permuted pattern is two-party only");
        return alt_pattern_2();
    }
    return read_pattern_file(spec);
}

// ---------------------------------------------------------------------------
// lp-max
// ---------------------------------------------------------------------------

int run_lp_max(const GlobalFlags& g, int parties, bool unique,
               const std::vector<std::string>& extra_zeros, const std::string& out_path) {
    const auto start = std::chrono::steady_clock::now();
    const Scenario sc(parties);
    const HardyPattern pattern = standard_pattern(parties);
    LpProblem problem = build_hardy_lp(sc, pattern);

    std::vector<std::size_t> pinned;
    for (const std::string& spec : extra_zeros) {
        std::size_t idx;
        if (spec == "target") {
            idx = encode_index(sc, pattern.target.settings, pattern.target.outcomes);
        } else {
            std::size_t pos = 0;
            try {
                idx = std::stoull(spec, &pos);
            } catch (const std::exception&) {
                pos = std::string::npos;
            }
            if (pos != spec.size())
                throw std::invalid_argument("--extra-zero wants an entry index or 'target', got '" +
                                            spec + "'");
        }
        if (idx >= sc.table_size())
            throw std::invalid_argument("--extra-zero index " + std::to_string(idx) +
                                        " out of range for " + std::to_string(parties) +
                                        " parties");
        std::vector<Rational> row(problem.vars, Rational(0));
        row[idx] = Rational(1);
        problem.rows.push_back(std::move(row));
        problem.rhs.emplace_back(0);
        pinned.push_back(idx);
    }

    const LpSolution sol = lp_solve(problem);

    json rep = {{"command", "lp-max"},
                {"parties", parties},
                {"status", sol.status == LpStatus::optimal ? "optimal" : "infeasible"},
                {"lp", {{"vars", problem.vars}, {"rows", problem.rows.size()}, {"pivots", sol.pivots}}},
                {"extra_zeros", pinned}};
    std::ostringstream txt;
    txt << "lp-max: parties=" << parties << "  vars=" << problem.vars
        << "  rows=" << problem.rows.size() << "  pivots=" << sol.pivots << "\n";

    if (sol.status != LpStatus::optimal) {
        txt << "status: infeasible (the pinned entries admit no box)\n";
        rep["wall_ms"] = wall_ms(start);
        emit(g, rep, txt.str());
        return 1;
    }

    rep["max_q"] = rs(sol.value);
    rep["max_q_float"] = static_cast<double>(sol.value);
    txt << "max q = " << rs(sol.value) << "  (objective "
        << index_label(sc, encode_index(sc, pattern.target.settings, pattern.target.outcomes))
        << ")\n";

    RationalBehavior box = RationalBehavior::from_table(sc, sol.x);
    rep["box"] = json::parse(box_to_json(box));
    txt << "optimal box:\n";
    for (std::size_t i = 0; i < box.table().size(); ++i) {
        if (parties > 3 && box.at(i) == 0) continue;  // larger tables: nonzero only
        txt << "  " << std::left << std::setw(12) << index_label(sc, i) << " " << rs(box.at(i))
            << "\n";
    }

    if (unique) {
        const CoordinateRangesResult cr = coordinate_ranges(problem, sol.value);
        bool all_degenerate = cr.status == LpStatus::optimal;
        json ranges = json::array();
        txt << "coordinate ranges at q = " << rs(sol.value) << ":\n";
        for (std::size_t i = 0; i < cr.ranges.size(); ++i) {
            const CoordinateRange& r = cr.ranges[i];
            if (!r.degenerate()) all_degenerate = false;
            ranges.push_back({{"index", i},
                              {"label", classic_label(sc, i)},
                              {"lo", rs(r.lo)},
                              {"hi", rs(r.hi)},
                              {"degenerate", r.degenerate()}});
            txt << "  " << std::left << std::setw(12) << index_label(sc, i) << " [" << rs(r.lo)
                << ", " << rs(r.hi) << "]" << (r.degenerate() ? "" : "  (free)") << "\n";
        }
        rep["ranges"] = std::move(ranges);
        rep["unique"] = all_degenerate;
        txt << "unique optimum: " << (all_degenerate ? "yes" : "no") << "\n";
    }

    if (!out_path.empty()) {
        write_box_file(out_path, box);
        rep["out"] = out_path;
        txt << "wrote " << out_path << "\n";
    }
    rep["wall_ms"] = wall_ms(start);
    emit(g, rep, txt.str());
    return 0;
}

// ---------------------------------------------------------------------------
// quantum-max
// ---------------------------------------------------------------------------

int run_quantum_max(const GlobalFlags& g, int parties, bool symmetric, int grid,
                    const std::string& out_path) {
    const auto start = std::chrono::steady_clock::now();
    const OptimizeMode mode = symmetric ? OptimizeMode::symmetric : OptimizeMode::full;
    const HardyQuantumResult res = optimize_hardy(parties, mode, grid, g.seed);

    std::vector<ObservablePair> obs;
    for (double b : res.betas) obs.push_back(ObservablePair::from_beta(b));
    const FloatBehavior box = behavior_from_state(res.state, obs);

    json rep = {{"command", "quantum-max"},
                {"parties", parties},
                {"mode", symmetric ? "symmetric" : "full"},
                {"grid", grid},
                {"p", res.p},
                {"betas", res.betas},
                {"evaluations", res.evaluations},
                {"box", json::parse(box_to_json(box))}};
    std::ostringstream txt;
    txt << "quantum-max: parties=" << parties << "  mode=" << (symmetric ? "symmetric" : "full")
        << "  evaluations=" << res.evaluations << "\n";
    txt << "p* = " << fs(res.p) << "\n";
    txt << "beta* =";
    for (double b : res.betas) txt << " " << fs(b);
    txt << "\n";

    if (!out_path.empty()) {
        write_box_file(out_path, box);
        rep["out"] = out_path;
        txt << "wrote " << out_path << "\n";
    }
    rep["wall_ms"] = wall_ms(start);
    emit(g, rep, txt.str());
    return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

template <class T>
int verify_typed(const GlobalFlags& g, const std::string& path, const Scenario& sc,
                 const std::vector<T>& table, const std::string& kind,
                 const std::string& hardy_spec, bool want_chsh, T tol,
                 std::chrono::steady_clock::time_point start) {
    json rep = {{"command", "verify"}, {"path", path}, {"parties", sc.parties}, {"kind", kind}};
    std::ostringstream txt;
    txt << "box: " << path << "  (" << sc.parties << " parties, " << sc.table_size()
        << " entries, " << kind << ")\n";
    bool pass = true;

    const ValidationReport vr = validate_table(sc, table, tol);
    rep["normalization"] = {{"pass", vr.ok()}};
    txt << "normalization      " << (vr.ok() ? "pass" : "FAIL") << "\n";
    if (!vr.ok()) {
        pass = false;
        json issues = json::array();
        for (const ValidationIssue& issue : vr.issues) {
            issues.push_back(issue.message);
            txt << "    " << issue.message << "\n";
        }
        rep["normalization"]["issues"] = std::move(issues);
        rep["pass"] = false;
        rep["wall_ms"] = wall_ms(start);
        emit(g, rep, txt.str());
        return 1;  // later checks assume a proper distribution
    }

    const Behavior<T> box = Behavior<T>::from_table(sc, table, tol);
    const NoSignalingReport<T> ns = no_signaling_check(box, tol);
    rep["no_signaling"] = {{"pass", ns.pass()}};
    txt << "no-signaling       " << (ns.pass() ? "pass" : "FAIL") << "\n";
    if (!ns.pass()) {
        pass = false;
        json viol = json::array();
        for (const auto& v : ns.violations) {
            viol.push_back({{"party", v.party},
                            {"equation", v.equation},
                            {"lhs", detail::num_str(v.lhs)},
                            {"rhs", detail::num_str(v.rhs)}});
            txt << "    party " << v.party << ": " << v.equation << "  (" << detail::num_str(v.lhs)
                << " vs " << detail::num_str(v.rhs) << ")\n";
        }
        rep["no_signaling"]["violations"] = std::move(viol);
    }

    if (hardy_spec != "none") {
        const HardyPattern pattern = resolve_pattern(hardy_spec, sc.parties);
        const HardyReport<T> hr = hardy_check(box, pattern, tol);
        const bool hardy_ok = hr.zeros_pass;
        if (!hardy_ok) pass = false;
        json zeros = json::array();
        for (const auto& z : hr.zeros)
            zeros.push_back({{"index", z.index},
                             {"label", z.label},
                             {"value", detail::num_str(z.value)},
                             {"ok", z.ok}});
        rep["hardy"] = {{"pattern", hardy_spec},
                        {"zeros_pass", hr.zeros_pass},
                        {"zeros", std::move(zeros)},
                        {"q", detail::num_str(hr.q)},
                        {"target_index", hr.target_index},
                        {"target_label", hr.target_label},
                        {"paradoxical", hr.paradoxical()}};
        txt << "hardy[" << hardy_spec << "]    " << (hardy_ok ? "pass" : "FAIL")
            << "  q = " << detail::num_str(hr.q) << "  (target "
            << index_label(sc, hr.target_index) << ")"
            << (hr.paradoxical() ? "  -> paradoxical" : "") << "\n";
        if (!hardy_ok)
            for (const auto& z : hr.zeros)
                if (!z.ok)
                    txt << "    forbidden " << index_label(sc, z.index) << " = "
                        << detail::num_str(z.value) << "\n";
    }

    if (want_chsh) {
        const ChshValue<T> plain = chsh(box, ChshSigns{0, 0, 0});
        const ChshBest<T> best = chsh_max_over_signs(box);
        json corr = json::array();
        for (const T& e : plain.correlators) corr.push_back(detail::num_str(e));
        rep["chsh"] = {{"correlators", std::move(corr)},
                       {"b", detail::num_str(plain.b)},
                       {"best",
                        {{"signs", {best.signs.alpha, best.signs.beta, best.signs.gamma}},
                         {"b", detail::num_str(best.value.b)}}}};
        txt << "chsh               B = " << detail::num_str(plain.b) << "  best B = "
            << detail::num_str(best.value.b) << " at (" << best.signs.alpha << ","
            << best.signs.beta << "," << best.signs.gamma << ")\n";
    }

    rep["pass"] = pass;
    rep["wall_ms"] = wall_ms(start);
    txt << "verdict: " << (pass ? "PASS" : "FAIL") << "\n";
    emit(g, rep, txt.str());
    return pass ? 0 : 1;
}

int run_verify(const GlobalFlags& g, const std::string& path, const std::string& hardy_spec,
               bool want_chsh) {
    const auto start = std::chrono::steady_clock::now();
    const ParsedBox parsed = read_box_file(path);
    if (parsed.is_rational)
        return verify_typed<Rational>(g, path, parsed.scenario, parsed.rational_table, "rational",
                                      hardy_spec, want_chsh, Rational(0), start);
    return verify_typed<double>(g, path, parsed.scenario, parsed.float_table, "float", hardy_spec,
                                want_chsh, g.tol, start);
}

// ---------------------------------------------------------------------------
// export
// ---------------------------------------------------------------------------

int run_export(const GlobalFlags& g, const std::string& name, const std::string& path) {
    const auto start = std::chrono::steady_clock::now();
    const RationalBehavior box = preset_box(name);  // unknown name -> usage error
    write_box_file(path, box);
    json rep = {{"command", "export"},
                {"preset", name},
                {"out", path},
                {"parties", box.scenario().parties},
                {"entries", box.table().size()},
                {"wall_ms", wall_ms(start)}};
    std::ostringstream txt;
    txt << "wrote preset '" << name << "' (" << box.scenario().parties << " parties, "
        << box.table().size() << " entries) to " << path << "\n";
    emit(g, rep, txt.str());
    return 0;
}

// ---------------------------------------------------------------------------
// scan-deterministic
// ---------------------------------------------------------------------------

int run_scan(const GlobalFlags& g, int parties, const std::string& pattern_spec) {
    const auto start = std::chrono::steady_clock::now();
    const HardyPattern pattern = resolve_pattern(pattern_spec, parties);
    const DeterministicScan scan = local_realism_scan(pattern);

    json rep = {{"command", "scan-deterministic"},
                {"parties", parties},
                {"pattern", pattern_spec},
                {"total", scan.total_count},
                {"satisfying", scan.satisfying_count},
                {"max_q", rs(scan.max_q)},
                {"max_q_float", static_cast<double>(scan.max_q)}};
    std::ostringstream txt;
    txt << "scan-deterministic: parties=" << parties << "  pattern=" << pattern_spec << "\n";
    txt << "boxes: " << scan.total_count << " total, " << scan.satisfying_count
        << " satisfy every forbidden-event constraint\n";
    txt << "max q over those = " << rs(scan.max_q) << "\n";
    if (scan.witness) {
        rep["witness_bits"] = scan.witness->bits;
        txt << "witness outcome bits (party-major, setting 0 then 1):";
        for (int b : scan.witness->bits) txt << " " << b;
        txt << "\n";
    }
    rep["wall_ms"] = wall_ms(start);
    emit(g, rep, txt.str());
    return 0;
}

// ---------------------------------------------------------------------------
// chsh
// ---------------------------------------------------------------------------

template <class T>
int chsh_typed(const GlobalFlags& g, const std::string& path, const Behavior<T>& box,
               std::chrono::steady_clock::time_point start) {
    const bool exact = std::is_same_v<T, Rational>;
    auto cell = [&](const T& v) {
        if constexpr (std::is_same_v<T, Rational>)
            return rs(v);
        else
            return fs(v, 17);  // machine format: full precision
    };

    json rows = json::array();
    std::ostringstream csv, txt;
    csv << "alpha,beta,gamma,E_AB,E_ApB,E_ABp,E_ApBp,B\n";
    txt << "chsh: " << path << "  (" << (exact ? "rational" : "float") << ")\n";
    txt << "  a b g   E(A,B)  E(A',B)  E(A,B')  E(A',B')  B\n";
    for (const ChshSigns& s : all_chsh_signs()) {
        const ChshValue<T> v = chsh(box, s);
        csv << s.alpha << "," << s.beta << "," << s.gamma;
        for (const T& e : v.correlators) csv << "," << cell(e);
        csv << "," << cell(v.b) << "\n";
        rows.push_back({{"signs", {s.alpha, s.beta, s.gamma}},
                        {"correlators",
                         {detail::num_str(v.correlators[0]), detail::num_str(v.correlators[1]),
                          detail::num_str(v.correlators[2]), detail::num_str(v.correlators[3])}},
                        {"b", detail::num_str(v.b)}});
        txt << "  " << s.alpha << " " << s.beta << " " << s.gamma << "  ";
        for (const T& e : v.correlators) txt << " " << std::setw(8) << detail::num_str(e);
        txt << "  " << detail::num_str(v.b) << "\n";
    }
    const ChshBest<T> best = chsh_max_over_signs(box);
    txt << "max B = " << detail::num_str(best.value.b) << " at (" << best.signs.alpha << ","
        << best.signs.beta << "," << best.signs.gamma << ")\n";

    json rep = {{"command", "chsh"},
                {"path", path},
                {"rows", std::move(rows)},
                {"best",
                 {{"signs", {best.signs.alpha, best.signs.beta, best.signs.gamma}},
                  {"b", detail::num_str(best.value.b)}}},
                {"wall_ms", wall_ms(start)}};
    if (g.format() == Format::csv)
        std::cout << csv.str();
    else
        emit(g, rep, txt.str());
    return 0;
}

int run_chsh(const GlobalFlags& g, const std::string& path) {
    const auto start = std::chrono::steady_clock::now();
    const ParsedBox parsed = read_box_file(path);
    if (parsed.scenario.parties != 2)
        throw std::invalid_argument("chsh: the box must be two-party");
    if (parsed.is_rational)
        return chsh_typed<Rational>(
            g, path, RationalBehavior::from_table(parsed.scenario, parsed.rational_table), start);
    return chsh_typed<double>(
        g, path, FloatBehavior::from_table(parsed.scenario, parsed.float_table, g.tol), start);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hardy-paradox workbench: no-signaling LP maxima, quantum maxima, box checks"};
    app.require_subcommand(1);

    GlobalFlags g;
    auto* json_flag = app.add_flag("--json", g.want_json, "machine-readable JSON report");
    auto* csv_flag = app.add_flag("--csv", g.want_csv, "CSV rows where supported (chsh)");
    json_flag->excludes(csv_flag);
    app.add_option("--tol", g.tol, "comparison tolerance for floating-point boxes")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--seed", g.seed, "seed extra random restarts in quantum-max");

    int exit_code = 0;

    // lp-max
    auto* lp_cmd = app.add_subcommand("lp-max", "maximize the Hardy probability over all "
                                                "no-signaling boxes (exact rational LP)");
    int lp_n = 2;
    bool lp_unique = false;
    std::vector<std::string> lp_extra;
    std::string lp_out;
    lp_cmd->add_option("-n,--parties", lp_n, "party count")->check(CLI::Range(2, 4));
    lp_cmd->add_flag("--unique", lp_unique, "probe optimum uniqueness via coordinate ranges");
    lp_cmd->add_option("--extra-zero", lp_extra,
                       "pin an extra entry to zero (canonical index, or 'target')");
    lp_cmd->add_option("-o,--out", lp_out, "write the optimal box to this JSON file");
    lp_cmd->callback([&] { exit_code = run_lp_max(g, lp_n, lp_unique, lp_extra, lp_out); });

    // quantum-max
    auto* q_cmd = app.add_subcommand("quantum-max",
                                     "maximize the Hardy probability over qubit states");
    int q_n = 2, q_grid = 9;
    bool q_sym = false, q_full = false;
    std::string q_out;
    q_cmd->add_option("-n,--parties", q_n, "party count")->check(CLI::Range(2, 4));
    auto* sym_flag = q_cmd->add_flag("--symmetric", q_sym, "equal beta for every party");
    q_cmd->add_flag("--full", q_full, "independent beta per party (default)")->excludes(sym_flag);
    q_cmd->add_option("--grid", q_grid, "coarse grid points per axis (full mode)")
        ->check(CLI::Range(2, 64));
    q_cmd->add_option("-o,--out", q_out, "write the optimal box to this JSON file");
    q_cmd->callback([&] { exit_code = run_quantum_max(g, q_n, q_sym, q_grid, q_out); });

    // verify
    auto* v_cmd = app.add_subcommand("verify", "check a box file: normalization, no-signaling, "
                                               "optional Hardy pattern and CHSH");
    std::string v_path, v_hardy = "none";
    bool v_chsh = false;
    v_cmd->add_option("path", v_path, "box JSON file")->required();
    v_cmd->add_option("--hardy", v_hardy, "standard | alt | none | <pattern.json>")
        ->capture_default_str();
    v_cmd->add_flag("--chsh", v_chsh, "also report CHSH (two-party boxes)");
    v_cmd->callback([&] { exit_code = run_verify(g, v_path, v_hardy, v_chsh); });

    // export
    auto* e_cmd = app.add_subcommand("export", "write a named preset box to a file");
    std::string e_name, e_path;
    e_cmd->add_option("preset", e_name, "preset name")->required();
    e_cmd->add_option("path", e_path, "output JSON file")->required();
    e_cmd->callback([&] { exit_code = run_export(g, e_name, e_path); });

    // scan-deterministic
    auto* s_cmd = app.add_subcommand("scan-deterministic",
                                     "exhaust all deterministic boxes against a Hardy pattern");
    int s_n = 2;
    std::string s_pattern = "standard";
    s_cmd->add_option("-n,--parties", s_n, "party count")->check(CLI::Range(2, 6));
    s_cmd->add_option("--pattern", s_pattern, "standard | alt | <pattern.json>")
        ->capture_default_str();
    s_cmd->callback([&] { exit_code = run_scan(g, s_n, s_pattern); });

    // chsh
    auto* c_cmd = app.add_subcommand("chsh", "CHSH report for a two-party box file");
    std::string c_path;
    c_cmd->add_option("path", c_path, "box JSON file")->required();
    c_cmd->callback([&] { exit_code = run_chsh(g, c_path); });

    // Let trailing global flags (e.g. `hardybox chsh box.json --csv`) reach the app.
    for (auto* sub : {lp_cmd, q_cmd, v_cmd, e_cmd, s_cmd, c_cmd}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return exit_code;
}
