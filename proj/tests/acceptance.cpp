// Acceptance gate: runs the full property suite in-process and the CLI
// end-to-end, printing one line per criterion.  Exits nonzero if any fails.
#include "carlock/verify.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <sys/wait.h>

namespace {

int report(int id, bool pass, const std::string& text) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, text.c_str());
    std::fflush(stdout);
    return pass ? 0 : 1;
}

} // namespace

int main() {
    int failures = 0;

    const carlock::VerificationReport rep = carlock::run_verification(6, 42);
    for (const carlock::CriterionResult& c : rep.criteria)
        failures += report(c.id, c.pass,
                           c.name + " — " + c.detail + " (" +
                               std::to_string(c.seconds) + " s)");

    // End-to-end: the CLI's own verification run must exit 0, well under the
    // five-minute budget.
    const char* bin = std::getenv("CARLOCK_BIN");
    if (bin == nullptr) {
        failures += report(8, false, "CARLOCK_BIN is not set; cannot run the CLI");
    } else {
        const std::string cmd =
            "\"" + std::string(bin) + "\" verify --modes 6 --seed 42 > /dev/null 2>&1";
        const auto start = std::chrono::steady_clock::now();
        const int status = std::system(cmd.c_str());
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool exited_zero = WIFEXITED(status) && WEXITSTATUS(status) == 0;
        const bool in_budget = seconds < 300.0;
        failures += report(8, exited_zero && in_budget,
                           "carlock verify --modes 6 --seed 42 exited " +
                               std::string(exited_zero ? "0" : "nonzero") + " in " +
                               std::to_string(seconds) + " s (budget 300 s)");
    }

    return failures == 0 ? 0 : 1;
}
