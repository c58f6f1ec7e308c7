#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

namespace {

using nlohmann::json;

struct RunResult {
    int code = -1;
    std::string out;  // stdout + stderr
};

std::string binary_path() {
    const char* bin = std::getenv("CARLOCK_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "CARLOCK_BIN must point at the CLI binary");
    return bin;
}

std::string temp_path(const std::string& tag) {
    static int counter = 0;
    std::ostringstream os;
    os << "cli_test_" << getpid() << "_" << counter++ << "_" << tag;
    return os.str();
}

RunResult run_cli(const std::string& args) {
    const std::string capture = temp_path("out.txt");
    const std::string cmd = "\"" + binary_path() + "\" " + args + " > " + capture + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult res;
    if (WIFEXITED(status)) res.code = WEXITSTATUS(status);
    std::ifstream in(capture);
    std::ostringstream buf;
    buf << in.rdbuf();
    res.out = buf.str();
    std::remove(capture.c_str());
    return res;
}

std::string write_state(const std::string& tag, const std::string& content) {
    const std::string path = temp_path(tag + ".json");
    std::ofstream out(path);
    out << content;
    return path;
}

// (a1^|0> + |0>)/sqrt(2) on two modes; the loader normalizes.
const char* kExampleState =
    R"({"n_modes": 2, "amplitudes": [{"basis": "00", "re": 1}, {"basis": "10", "re": 1}]})";

} // namespace

TEST_CASE("normal-order prints the canonical rewrite") {
    const RunResult r = run_cli("normal-order \"a1 a1^\"");
    CHECK(r.code == 0);
    CHECK(r.out == "1 - a1^ a1\n");
}

TEST_CASE("worked example as JSON") {
    const RunResult r = run_cli("paper-example --output json");
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["command"] == "paper-example");
    CHECK(std::abs(doc["result"]["before"].get<double>() - 1.0) <= 1e-12);
    CHECK(std::abs(doc["result"]["after"].get<double>() + 1.0) <= 1e-12);
    CHECK(std::abs(doc["result"]["deviation"].get<double>() - 2.0) <= 1e-12);
    CHECK(doc["result"]["signalling"]["signalling_detected"] == true);
    CHECK(doc["pass"] == true);
}

TEST_CASE("witness subcommand reports the oracle tv distance") {
    const RunResult r =
        run_cli("witness --oa \"a1 + a1^\" --ob \"a2 + a2^\" --modes 2 --output json");
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["result"]["witness_found"] == true);
    CHECK(std::abs(doc["result"]["tv_distance"].get<double>() - 0.5) <= 1e-10);
    CHECK(doc["result"]["dist_before"].size() == 1);
    CHECK(doc["pass"] == true);
}

TEST_CASE("identical invocations produce byte-identical JSON") {
    const std::string cmd =
        "witness --oa \"a1 + a1^\" --ob \"a2 + a2^\" --modes 2 --seed 9 --output json";
    const RunResult first = run_cli(cmd);
    const RunResult second = run_cli(cmd);
    CHECK(first.code == 0);
    CHECK(first.out == second.out);

    const RunResult third = run_cli("derive-ssr --partition \"1,2|3\" --output json");
    const RunResult fourth = run_cli("derive-ssr --partition \"1,2|3\" --output json");
    CHECK(third.code == 0);
    CHECK(third.out == fourth.out);
}

TEST_CASE("matrix output in both formats") {
    const RunResult text = run_cli("matrix \"a1\" --modes 1");
    CHECK(text.code == 0);
    CHECK(text.out == "[0 1]\n[0 0]\n");

    const RunResult js = run_cli("matrix \"a1\" --modes 1 --output json");
    REQUIRE(js.code == 0);
    const json doc = json::parse(js.out);
    CHECK(doc["result"]["matrix"][0][1]["re"] == 1.0);
    CHECK(doc["result"]["matrix"][1][0]["re"] == 0.0);
}

TEST_CASE("expectation against a state file") {
    const std::string path = write_state("example", kExampleState);
    const RunResult r = run_cli("expectation \"a1 + a1^\" --state " + path + " --output json");
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(std::abs(doc["result"]["value"]["re"].get<double>() - 1.0) <= 1e-12);
    CHECK(std::abs(doc["result"]["value"]["im"].get<double>()) <= 1e-12);
    std::remove(path.c_str());
}

TEST_CASE("reduce recovers the example reduced state") {
    const std::string path = write_state("reduce", kExampleState);
    const RunResult r = run_cli("reduce \"1\" --state " + path + " --output json");
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    const auto& m = doc["result"]["matrix"];
    CHECK(std::abs(m[0][0]["re"].get<double>() - 0.5) <= 1e-10);
    CHECK(std::abs(m[0][1]["re"].get<double>() - 0.5) <= 1e-10);
    CHECK(doc["result"]["psd"] == true);
    std::remove(path.c_str());
}

TEST_CASE("signal pinpoints the deviation") {
    const std::string path = write_state("signal", kExampleState);
    const RunResult r = run_cli("signal --op \"a2 + a2^\" --partition \"1|2\" --state " +
                                path + " --output json");
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(std::abs(doc["result"]["max_deviation"].get<double>() - 2.0) <= 1e-9);
    CHECK(doc["result"]["signalling_detected"] == true);
    std::remove(path.c_str());
}

TEST_CASE("derive-ssr counts the commutation census") {
    const RunResult r = run_cli("derive-ssr --partition \"1,2|3\" --output json");
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["result"]["total_ordered_pairs"] == 128);
    CHECK(doc["result"]["flagged_odd_odd"].size() == 32);
    CHECK(doc["result"]["all_even_pairs_commute"] == true);
    CHECK(doc["result"]["all_odd_odd_flagged"] == true);
    CHECK(doc["pass"] == true);
}

TEST_CASE("parity text output") {
    const RunResult r = run_cli("parity \"a1^ a1\"");
    CHECK(r.code == 0);
    CHECK(r.out == "parity: even\nssr_allowed: true\n");
}

TEST_CASE("commutator text output") {
    const RunResult r = run_cli("commutator \"a1\" \"a2\"");
    CHECK(r.code == 0);
    CHECK(r.out == "-2 a2 a1\n");
}

TEST_CASE("ssr-check fails (exit 1) on a cross-sector superposition") {
    const std::string path = write_state(
        "sector", R"({"n_modes": 1, "amplitudes": [{"basis": "0", "re": 1}, {"basis": "1", "re": 1}]})");
    const RunResult r = run_cli("ssr-check --state " + path + " --output json");
    CHECK(r.code == 1);
    const json doc = json::parse(r.out);
    CHECK(doc["result"]["compliant"] == false);
    CHECK(std::abs(doc["result"]["coherence_norm"].get<double>() - 0.5) <= 1e-10);
    CHECK(doc["pass"] == false);
    std::remove(path.c_str());

    const RunResult vac = run_cli("ssr-check --modes 2");
    CHECK(vac.code == 0);
}

TEST_CASE("usage and parse problems exit 2") {
    CHECK(run_cli("normal-order \"a0\"").code == 2);
    CHECK(run_cli("frobnicate").code == 2);
    CHECK(run_cli("witness --oa \"a1\"").code == 2);       // missing --ob
    CHECK(run_cli("signal --op \"a1\" --partition \"1-2\"").code == 2);
    CHECK(run_cli("expectation \"a1\" --state /nonexistent.json").code == 2);
    CHECK(run_cli("matrix \"a3\" --modes 2").code == 2);  // --modes too small for the input
    const RunResult parse_err = run_cli("normal-order \"a1 +\"");
    CHECK(parse_err.code == 2);
    CHECK(parse_err.out.find("parse error") != std::string::npos);
}

TEST_CASE("domain failures exit 1") {
    // O_A is not Hermitian as a matrix
    CHECK(run_cli("witness --oa \"a1\" --ob \"a2 + a2^\" --modes 2").code == 1);
    // the operation on B is not unitary
    CHECK(run_cli("signal --op \"a2^ a2\" --partition \"1|2\" --modes 2").code == 1);
}

TEST_CASE("help exits 0") {
    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("witness --help").code == 0);
}
