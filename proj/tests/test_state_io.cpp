#include "carlock/error.hpp"
#include "carlock/state_io.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace carlock;

namespace {

StateVector load_text(const std::string& text) {
    std::istringstream in(text);
    return load_state(in);
}

} // namespace

TEST_CASE("loading a two-mode state places amplitudes by basis string") {
    const StateVector psi = load_text(
        R"({"n_modes": 2, "amplitudes": [
             {"basis": "00", "re": 1.0},
             {"basis": "10", "re": 1.0}
           ]})");
    CHECK(psi.n_modes == 2);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(psi.amplitudes[0] - s) <= 1e-12);  // |00>
    CHECK(std::abs(psi.amplitudes[2] - s) <= 1e-12);  // |10>, mode 1 is the high bit
    CHECK(std::abs(psi.amplitudes[1]) == 0.0);
    CHECK(std::abs(psi.amplitudes[3]) == 0.0);
}

TEST_CASE("missing re/im default to zero; loader normalizes") {
    const StateVector psi = load_text(
        R"({"n_modes": 1, "amplitudes": [{"basis": "0", "im": 2.0}, {"basis": "1"}]})");
    CHECK(std::abs(psi.amplitudes[0] - cplx{0.0, 1.0}) <= 1e-12);
    CHECK(std::abs(psi.amplitudes[1]) == 0.0);
}

TEST_CASE("save and load round trip") {
    StateVector psi;
    psi.n_modes = 2;
    psi.amplitudes = Eigen::VectorXcd::Zero(4);
    psi.amplitudes[1] = cplx{0.6, 0.0};
    psi.amplitudes[2] = cplx{0.0, -0.8};
    const StateVector back = load_text(save_state(psi));
    CHECK(back.n_modes == 2);
    CHECK((back.amplitudes - psi.amplitudes).norm() <= 1e-12);
}

TEST_CASE("malformed state files throw StateFileError") {
    CHECK_THROWS_AS(load_text("not json"), StateFileError);
    CHECK_THROWS_AS(load_text(R"({"amplitudes": []})"), StateFileError);
    CHECK_THROWS_AS(load_text(R"({"n_modes": 1.5, "amplitudes": []})"), StateFileError);
    CHECK_THROWS_AS(load_text(R"({"n_modes": 0, "amplitudes": []})"), StateFileError);
    CHECK_THROWS_AS(load_text(R"({"n_modes": 13, "amplitudes": []})"), StateFileError);
    CHECK_THROWS_AS(load_text(R"({"n_modes": 1})"), StateFileError);
    // wrong basis length
    CHECK_THROWS_AS(load_text(R"({"n_modes": 2, "amplitudes": [{"basis": "0", "re": 1}]})"),
                    StateFileError);
    // bad character
    CHECK_THROWS_AS(load_text(R"({"n_modes": 1, "amplitudes": [{"basis": "x", "re": 1}]})"),
                    StateFileError);
    // duplicate entry
    CHECK_THROWS_AS(load_text(R"({"n_modes": 1, "amplitudes": [
        {"basis": "0", "re": 1}, {"basis": "0", "re": -1}]})"),
                    StateFileError);
    // non-numeric amplitude
    CHECK_THROWS_AS(load_text(R"({"n_modes": 1, "amplitudes": [{"basis": "0", "re": "1"}]})"),
                    StateFileError);
    // unnormalizable
    CHECK_THROWS_AS(load_text(R"({"n_modes": 1, "amplitudes": []})"), StateFileError);
    CHECK_THROWS_AS(load_text(R"({"n_modes": 1, "amplitudes": [{"basis": "0", "re": 1e-13}]})"),
                    StateFileError);
    CHECK_THROWS_AS(load_state_file("/nonexistent/state.json"), StateFileError);
}

TEST_CASE("saving drops negligible amplitudes") {
    StateVector psi;
    psi.n_modes = 1;
    psi.amplitudes = Eigen::VectorXcd::Zero(2);
    psi.amplitudes[0] = 1.0;
    psi.amplitudes[1] = 1e-16;
    const std::string text = save_state(psi);
    CHECK(text.find("\"1\"") == std::string::npos);
    const StateVector back = load_text(text);
    CHECK(std::abs(back.amplitudes[0] - 1.0) <= 1e-12);
}
