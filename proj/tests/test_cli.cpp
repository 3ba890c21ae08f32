#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

#include "hardybox/behavior.hpp"
#include "hardybox/box_io.hpp"

using namespace hardybox;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

// Run the installed CLI with the given arguments, capturing stdout (stderr is
// folded in so error text is assertable too).
RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(HARDYBOX_CLI) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

json run_json(const std::string& args, int expect_exit = 0) {
    RunResult r = run_cli("--json " + args);
    REQUIRE(r.exit_code == expect_exit);
    return json::parse(r.out);
}

}  // namespace

TEST_CASE("lp-max reports the exact two-party optimum") {
    json rep = run_json("lp-max -n 2");
    CHECK(rep["status"] == "optimal");
    CHECK(rep["max_q"] == "1/2");
    CHECK(rep["box"]["numeric"] == "rational");
    CHECK(rep["box"]["parties"] == 2);
    CHECK(rep["box"]["table"].size() == 16);
    CHECK(rep["box"]["table"][0] == "1/2");  // the target entry

    // The reported box must be the eq32 preset, entry for entry.
    const RationalBehavior expect = preset_box("eq32-max-hardy");
    const ParsedBox got = parse_box_json(rep["box"].dump());
    REQUIRE(got.is_rational);
    for (std::size_t i = 0; i < 16; ++i) CHECK(got.rational_table[i] == expect.at(i));
}

TEST_CASE("lp-max extra zeros pin entries") {
    CHECK(run_json("lp-max -n 2 --extra-zero target")["max_q"] == "0/1");
    // Pinning an entry the optimal box already has at zero changes nothing.
    CHECK(run_json("lp-max -n 2 --extra-zero 1")["max_q"] == "1/2");

    RunResult bad = run_cli("lp-max -n 2 --extra-zero frobnicate");
    CHECK(bad.exit_code == 2);
    RunResult oob = run_cli("lp-max -n 2 --extra-zero 16");
    CHECK(oob.exit_code == 2);
}

TEST_CASE("lp-max uniqueness probe") {
    json rep = run_json("lp-max -n 2 --unique");
    CHECK(rep["unique"] == true);
    REQUIRE(rep["ranges"].size() == 16);
    for (const auto& r : rep["ranges"]) {
        CHECK(r["degenerate"] == true);
        CHECK(r["lo"] == r["hi"]);
    }
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("lp-max -n 9").exit_code == 2);
    CHECK(run_cli("lp-max --frobnicate").exit_code == 2);
    CHECK(run_cli("").exit_code == 2);           // a subcommand is required
    CHECK(run_cli("--help").exit_code == 0);     // help is a success
    CHECK(run_cli("export nonsense o.json").exit_code == 2);
}

TEST_CASE("export round-trips through verify") {
    for (const std::string& name : preset_names()) {
        const std::string path = "cli_export_" + name + ".json";
        CHECK(run_cli("export " + name + " " + path).exit_code == 0);
        // Every preset is a no-signaling box; hardy checks apply per preset.
        json rep = run_json("verify " + path);
        CHECK(rep["pass"] == true);
        CHECK(rep["normalization"]["pass"] == true);
        CHECK(rep["no_signaling"]["pass"] == true);
        std::remove(path.c_str());
    }
}

TEST_CASE("verify runs the hardy and chsh checks on the maximal box") {
    CHECK(run_cli("export eq32-max-hardy cli_eq32.json").exit_code == 0);
    json rep = run_json("verify cli_eq32.json --hardy standard --chsh");
    CHECK(rep["pass"] == true);
    CHECK(rep["hardy"]["zeros_pass"] == true);
    CHECK(rep["hardy"]["q"] == "1/2");
    CHECK(rep["hardy"]["paradoxical"] == true);
    CHECK(rep["hardy"]["target_label"] == "p13");
    CHECK(rep["chsh"]["b"] == "4/1");
    CHECK(rep["chsh"]["best"]["signs"] == json::array({0, 0, 0}));
    std::remove("cli_eq32.json");
}

TEST_CASE("verify passes the three-party preset") {
    CHECK(run_cli("export eq40-max-hardy-3 cli_eq40.json").exit_code == 0);
    json rep = run_json("verify cli_eq40.json --hardy standard");
    CHECK(rep["pass"] == true);
    CHECK(rep["hardy"]["q"] == "1/2");
    CHECK(rep["box"] == nullptr);  // verify reports checks, not the table
    std::remove("cli_eq40.json");
}

TEST_CASE("verify flags a signaling box and names the violated equality") {
    // Party 1's outcome copies party 2's setting: P(o1 o2 | s1 s2) = [o1 = s2][o2 = 0].
    Scenario sc(2);
    std::vector<Rational> t(sc.table_size(), Rational(0));
    for (std::size_t idx : {0u, 6u, 8u, 14u}) t[idx] = Rational(1);
    std::ofstream("cli_signaling.json") << box_to_json(RationalBehavior::from_table(sc, t));

    RunResult r = run_cli("verify cli_signaling.json");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("no-signaling       FAIL") != std::string::npos);
    json rep = run_json("verify cli_signaling.json", 1);
    CHECK(rep["pass"] == false);
    CHECK(rep["no_signaling"]["pass"] == false);
    REQUIRE(!rep["no_signaling"]["violations"].empty());
    CHECK(rep["no_signaling"]["violations"][0]["party"] == 2);
    CHECK(rep["no_signaling"]["violations"][0]["equation"].get<std::string>().find('x') !=
          std::string::npos);
    std::remove("cli_signaling.json");
}

TEST_CASE("verify propagates I/O and parse failures as exit 3") {
    CHECK(run_cli("verify does_not_exist.json").exit_code == 3);
    std::ofstream("cli_garbage.json") << "this is not json\n";
    CHECK(run_cli("verify cli_garbage.json").exit_code == 3);
    std::ofstream("cli_schema.json") << "{\"parties\": 2}\n";
    CHECK(run_cli("verify cli_schema.json").exit_code == 3);
    std::remove("cli_garbage.json");
    std::remove("cli_schema.json");
}

TEST_CASE("quantum-max finds the two-qubit optimum and its box verifies") {
    json rep = run_json("quantum-max -n 2 --symmetric -o cli_q2.json");
    const double p = rep["p"].get<double>();
    CHECK(std::abs(p - 0.090169943749474) < 1e-9);
    CHECK(rep["betas"].size() == 2);
    CHECK(std::abs(rep["betas"][0].get<double>() - 0.38196601) < 1e-6);

    json vrep = run_json("verify cli_q2.json --hardy standard --chsh");
    CHECK(vrep["pass"] == true);
    CHECK(vrep["kind"] == "float");
    CHECK(vrep["hardy"]["paradoxical"] == true);
    std::remove("cli_q2.json");
}

TEST_CASE("quantum-max is deterministic given flags") {
    json a = run_json("quantum-max -n 2 --grid 5");
    json b = run_json("quantum-max -n 2 --grid 5");
    CHECK(a["p"] == b["p"]);
    CHECK(a["betas"] == b["betas"]);
    json c = run_json("--seed 7 quantum-max -n 2 --grid 5");
    json d = run_json("quantum-max -n 2 --grid 5 --seed 7");  // trailing global flag
    CHECK(c["p"] == d["p"]);
}

TEST_CASE("chsh emits the full sign table as CSV") {
    CHECK(run_cli("export footnote-alt-hardy cli_fn.json").exit_code == 0);
    RunResult r = run_cli("--csv chsh cli_fn.json");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("alpha,beta,gamma,E_AB,E_ApB,E_ABp,E_ApPb,B") == std::string::npos);
    CHECK(r.out.find("alpha,beta,gamma,E_AB,E_ApB,E_ABp,E_ApBp,B\n") == 0);
    CHECK(r.out.find("0,0,0,-1/1,-1/1,1/1,-1/1,0/1") != std::string::npos);
    CHECK(r.out.find("0,1,0,-1/1,-1/1,1/1,-1/1,4/1") != std::string::npos);

    json rep = run_json("chsh cli_fn.json");
    CHECK(rep["best"]["b"] == "4/1");
    CHECK(rep["best"]["signs"] == json::array({0, 1, 0}));
    CHECK(rep["rows"].size() == 8);
    std::remove("cli_fn.json");
}

TEST_CASE("chsh rejects non-two-party boxes") {
    CHECK(run_cli("export eq40-max-hardy-3 cli_eq40b.json").exit_code == 0);
    CHECK(run_cli("chsh cli_eq40b.json").exit_code == 2);
    std::remove("cli_eq40b.json");
}

TEST_CASE("scan-deterministic counts satisfying boxes") {
    json two = run_json("scan-deterministic -n 2");
    CHECK(two["total"] == 16);
    CHECK(two["satisfying"] == 5);
    CHECK(two["max_q"] == "0/1");

    json three = run_json("scan-deterministic -n 3");
    CHECK(three["total"] == 64);
    CHECK(three["satisfying"] == 37);
    CHECK(three["max_q"] == "0/1");

    json alt = run_json("scan-deterministic -n 2 --pattern alt");
    CHECK(alt["satisfying"] == 5);
    CHECK(alt["max_q"] == "0/1");
    CHECK(run_cli("scan-deterministic -n 3 --pattern alt").exit_code == 2);
}
