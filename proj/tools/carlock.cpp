#include "carlock/error.hpp"
#include "carlock/expr.hpp"
#include "carlock/fock.hpp"
#include "carlock/json_report.hpp"
#include "carlock/locality.hpp"
#include "carlock/parity.hpp"
#include "carlock/parse.hpp"
#include "carlock/state_io.hpp"
#include "carlock/verify.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace carlock;
using nlohmann::json;

// Bad flag values detected after CLI11 parsing (malformed --partition, mode
// lists, ...).  Mapped to exit code 2 like any other usage problem.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

struct Config {
    int modes = 0;  // 0 = derive from the inputs
    double tol = kDefaultTol;
    double cluster_tol = kDefaultClusterTol;
    std::uint64_t seed = 42;
    std::string output = "text";
    std::string state_path;
};

bool want_json(const Config& cfg) { return cfg.output == "json"; }

json config_json(const Config& cfg, int resolved_modes) {
    json j = {{"tol", cfg.tol},
              {"cluster_tol", cfg.cluster_tol},
              {"seed", cfg.seed},
              {"output", cfg.output}};
    if (resolved_modes > 0) j["n_modes"] = resolved_modes;
    if (!cfg.state_path.empty()) j["state"] = cfg.state_path;
    return j;
}

void emit(const std::string& command, const Config& cfg, int resolved_modes,
          const json& result, bool pass) {
    json doc = {{"command", command},
                {"config", config_json(cfg, resolved_modes)},
                {"result", result},
                {"pass", pass}};
    std::cout << doc.dump(2) << '\n';
}

std::string format_complex(cplx c) {
    if (c.imag() == 0.0) return format_real(c.real());
    std::string out = format_real(c.real());
    out += c.imag() < 0.0 ? "-" : "+";
    out += format_real(std::abs(c.imag()));
    out += "i";
    return out;
}

void print_matrix(const Eigen::MatrixXcd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        std::cout << '[';
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) std::cout << ' ';
            std::cout << format_complex(m(r, c));
        }
        std::cout << "]\n";
    }
}

void print_distribution(const char* label, const OutcomeDistribution& d) {
    std::cout << label << ":";
    for (const Outcome& o : d)
        std::cout << " (" << format_real(o.eigenvalue) << ", " << format_real(o.probability)
                  << ")";
    std::cout << '\n';
}

std::vector<int> parse_mode_list(const std::string& text) {
    std::vector<int> modes;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const int value = std::stoi(item, &used);
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
                ++used;
            if (used != item.size()) throw std::invalid_argument(item);
            modes.push_back(value);
        } catch (const std::exception&) {
            throw UsageError("bad mode list '" + text + "': expected comma-separated integers");
        }
    }
    if (modes.empty()) throw UsageError("empty mode list '" + text + "'");
    return modes;
}

// "1,2|3,4" -> the two observers' mode sets.
std::pair<std::vector<int>, std::vector<int>> parse_partition(const std::string& text) {
    const auto bar = text.find('|');
    if (bar == std::string::npos || text.find('|', bar + 1) != std::string::npos)
        throw UsageError("bad partition '" + text + "': expected \"1,2|3,4\"");
    return {parse_mode_list(text.substr(0, bar)), parse_mode_list(text.substr(bar + 1))};
}

int max_mode(const std::vector<int>& modes) {
    int mx = 0;
    for (int m : modes) mx = std::max(mx, m);
    return mx;
}

int max_support(const OperatorExpr& e) {
    auto s = support(e);
    return s.empty() ? 0 : *s.rbegin();
}

// Picks the working mode count: explicit flag > state file > smallest space
// that fits the inputs.
int resolve_modes(const Config& cfg, int min_needed) {
    int n = cfg.modes;
    if (n == 0 && !cfg.state_path.empty()) return 0;  // the state decides later
    if (n == 0) n = std::max(min_needed, 1);
    if (n < min_needed)
        throw UsageError("--modes " + std::to_string(n) + " too small; inputs need " +
                         std::to_string(min_needed));
    check_mode_count(n);
    return n;
}

StateVector resolve_state(const Config& cfg, int min_needed) {
    if (!cfg.state_path.empty()) {
        StateVector psi = load_state_file(cfg.state_path);
        if (cfg.modes != 0 && cfg.modes != psi.n_modes)
            throw UsageError("--modes disagrees with the state file's n_modes");
        if (psi.n_modes < min_needed)
            throw UsageError("state file has " + std::to_string(psi.n_modes) +
                             " modes; inputs need " + std::to_string(min_needed));
        return psi;
    }
    return vacuum(resolve_modes(cfg, min_needed));
}

int run_parse(const Config& cfg, const std::string& text) {
    const OperatorExpr e = parse_expr(text);
    if (want_json(cfg)) {
        json result = expr_json(e);
        result["canonical"] = is_canonical(e);
        emit("parse", cfg, 0, result, true);
    } else {
        std::cout << to_string(e) << '\n';
    }
    return 0;
}

int run_normal_order(const Config& cfg, const std::string& text) {
    const OperatorExpr e = normal_order(parse_expr(text));
    if (want_json(cfg)) {
        json result = expr_json(e);
        result["parity"] = to_string(parity_of(e));
        emit("normal-order", cfg, 0, result, true);
    } else {
        std::cout << to_string(e) << '\n';
    }
    return 0;
}

int run_parity(const Config& cfg, const std::string& text) {
    const OperatorExpr e = normal_order(parse_expr(text));
    const ParityClass p = parity_of(e);
    const bool allowed = operator_ssr_allowed(e);
    if (want_json(cfg)) {
        emit("parity", cfg, 0,
             {{"parity", to_string(p)}, {"ssr_allowed", allowed}, {"printed", to_string(e)}},
             true);
    } else {
        std::cout << "parity: " << to_string(p) << '\n'
                  << "ssr_allowed: " << (allowed ? "true" : "false") << '\n';
    }
    return 0;
}

int run_bracket(const Config& cfg, const std::string& command, const std::string& lhs,
                const std::string& rhs) {
    const OperatorExpr a = parse_expr(lhs), b = parse_expr(rhs);
    const bool anti = command == "anticommutator";
    const OperatorExpr c = anti ? symb_anticommutator(a, b) : symb_commutator(a, b);
    if (want_json(cfg)) {
        json result = expr_json(c);
        result["coeff_norm"] = coeff_max_norm(c);
        emit(command, cfg, 0, result, true);
    } else {
        std::cout << to_string(c) << '\n';
    }
    return 0;
}

int run_matrix(const Config& cfg, const std::string& text) {
    const OperatorExpr e = parse_expr(text);
    const int n = resolve_modes(cfg, std::max(max_support(e), 1));
    const DenseOperator m = jw_matrix(e, n);
    if (want_json(cfg)) {
        emit("matrix", cfg, n, {{"n_modes", n}, {"matrix", matrix_json(m)}}, true);
    } else {
        print_matrix(m);
    }
    return 0;
}

int run_expectation(const Config& cfg, const std::string& text) {
    const OperatorExpr e = parse_expr(text);
    const StateVector psi = resolve_state(cfg, std::max(max_support(e), 1));
    const cplx value = expectation(psi, e);
    if (want_json(cfg)) {
        emit("expectation", cfg, psi.n_modes,
             {{"value", complex_json(value)}, {"n_modes", psi.n_modes}}, true);
    } else {
        std::cout << format_complex(value) << '\n';
    }
    return 0;
}

int run_reduce(const Config& cfg, const std::string& mode_list, bool parity_restricted) {
    const std::vector<int> modes = parse_mode_list(mode_list);
    const StateVector psi = resolve_state(cfg, max_mode(modes));
    const ReducedState r = reduced_state(psi, modes, parity_restricted);
    if (want_json(cfg)) {
        json result = reduced_json(r);
        result["parity_restricted"] = parity_restricted;
        emit("reduce", cfg, psi.n_modes, result, true);
    } else {
        print_matrix(r.matrix);
        std::cout << "min_eigenvalue: " << format_real(r.min_eigenvalue) << '\n'
                  << "psd: " << (r.psd ? "true" : "false") << '\n'
                  << "residual: " << format_real(r.residual) << '\n';
    }
    return 0;
}

int run_ssr_check(const Config& cfg) {
    const StateVector psi = resolve_state(cfg, 1);
    const SsrStateReport rep = state_ssr_check(psi, cfg.tol);
    if (want_json(cfg)) {
        emit("ssr-check", cfg, psi.n_modes,
             {{"compliant", rep.compliant}, {"coherence_norm", rep.coherence_norm}},
             rep.compliant);
    } else {
        std::cout << "compliant: " << (rep.compliant ? "true" : "false") << '\n'
                  << "coherence_norm: " << format_real(rep.coherence_norm) << '\n';
    }
    return rep.compliant ? 0 : 1;
}

int run_signal(const Config& cfg, const std::string& op_text,
               const std::string& partition_text) {
    const OperatorExpr op_b = parse_expr(op_text);
    auto [a, b] = parse_partition(partition_text);
    const int min_needed = std::max({max_mode(a), max_mode(b), max_support(op_b)});
    const StateVector psi = resolve_state(cfg, min_needed);
    const ModePartition partition = ModePartition::make(a, b, psi.n_modes);
    const SignallingReport rep = signalling_deviation(psi, op_b, partition, cfg.tol);
    if (want_json(cfg)) {
        emit("signal", cfg, psi.n_modes, signalling_json(rep), true);
    } else {
        for (const DeviationEntry& d : rep.observable_deviations)
            std::cout << "<" << d.observable << "> shift: " << format_real(d.deviation)
                      << '\n';
        std::cout << "max_deviation: " << format_real(rep.max_deviation) << '\n'
                  << "reduced_state_trace_distance: "
                  << format_real(rep.reduced_state_trace_distance) << '\n'
                  << "signalling_detected: " << (rep.signalling_detected ? "true" : "false")
                  << '\n';
    }
    return 0;
}

int run_witness(const Config& cfg, const std::string& oa_text, const std::string& ob_text) {
    const OperatorExpr oa = parse_expr(oa_text), ob = parse_expr(ob_text);
    const int n =
        resolve_modes(cfg, std::max({max_support(oa), max_support(ob), 1}));
    const WitnessReport rep = build_witness(oa, ob, n, cfg.cluster_tol);
    const bool pass = rep.witness_found == (rep.tv_distance > 1e-12);
    if (want_json(cfg)) {
        emit("witness", cfg, n, witness_json(rep), pass);
    } else {
        std::cout << "witness_found: " << (rep.witness_found ? "true" : "false") << '\n'
                  << "commutator_norm: " << format_real(rep.commutator_norm) << '\n'
                  << "eigenspace_value: " << format_real(rep.eigenspace_value) << '\n'
                  << "leaked_eigenvalue: " << format_real(rep.leaked_eigenvalue) << '\n';
        print_distribution("dist_before", rep.dist_before);
        print_distribution("dist_after", rep.dist_after);
        std::cout << "tv_distance: " << format_real(rep.tv_distance) << '\n';
    }
    return pass ? 0 : 1;
}

int run_derive_ssr(const Config& cfg, const std::string& partition_text) {
    auto [a, b] = parse_partition(partition_text);
    const int n = resolve_modes(cfg, std::max(max_mode(a), max_mode(b)));
    const ModePartition partition = ModePartition::make(a, b, n);
    const SsrDerivationReport rep = ssr_derivation_report(partition);
    const bool pass = rep.all_even_pairs_commute && rep.all_odd_odd_flagged;
    if (want_json(cfg)) {
        emit("derive-ssr", cfg, n, ssr_derivation_json(rep), pass);
    } else {
        std::cout << "total_ordered_pairs: " << rep.total_ordered_pairs << '\n'
                  << "commuting_pairs_verified: " << rep.commuting_pairs_verified << '\n'
                  << "flagged_odd_odd: " << rep.flagged_odd_odd.size() << '\n'
                  << "all_even_pairs_commute: "
                  << (rep.all_even_pairs_commute ? "true" : "false") << '\n'
                  << "all_odd_odd_flagged: " << (rep.all_odd_odd_flagged ? "true" : "false")
                  << '\n'
                  << "conclusion: " << rep.conclusion << '\n';
    }
    return pass ? 0 : 1;
}

int run_worked_example(const Config& cfg) {
    const WorkedExampleReport rep = worked_example();
    if (want_json(cfg)) {
        emit("paper-example", cfg, 2, worked_example_json(rep), rep.pass);
    } else {
        std::cout << "before: " << format_real(rep.before) << '\n'
                  << "after: " << format_real(rep.after) << '\n'
                  << "deviation: " << format_real(rep.deviation) << '\n'
                  << "signalling_detected: "
                  << (rep.signalling.signalling_detected ? "true" : "false") << '\n'
                  << "pass: " << (rep.pass ? "true" : "false") << '\n';
    }
    return rep.pass ? 0 : 1;
}

int run_verify(const Config& cfg) {
    const int n = cfg.modes == 0 ? 6 : cfg.modes;
    const VerificationReport rep = run_verification(n, cfg.seed);
    if (want_json(cfg)) {
        emit("verify", cfg, n, verification_json(rep), rep.all_pass);
    } else {
        for (const CriterionResult& c : rep.criteria) {
            std::cout << (c.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name
                      << " — " << c.detail << " (" << format_real(c.seconds) << " s)\n";
        }
        std::cout << (rep.all_pass ? "all criteria passed" : "criteria FAILED") << " in "
                  << format_real(rep.total_seconds) << " s\n";
    }
    return rep.all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fermionic mode algebra: symbolic CAR rewriting, Fock-space numerics, "
                 "parity superselection and signalling analysis"};
    app.require_subcommand(1);

    Config cfg;
    std::string expr_text, rhs_text, op_text, oa_text, ob_text, partition_text, mode_list;
    bool parity_restricted = false;

    auto add_common = [&](CLI::App* sub, bool with_state) {
        sub->add_option("--tol", cfg.tol, "numeric tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--cluster-tol", cfg.cluster_tol, "eigenvalue clustering tolerance")
            ->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--output", cfg.output, "report format")
            ->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--modes", cfg.modes, "number of modes")->check(CLI::Range(1, kMaxModes));
        if (with_state)
            sub->add_option("--state", cfg.state_path, "JSON state file (default: vacuum)");
    };

    int exit_code = 0;

    auto* parse_cmd = app.add_subcommand("parse", "parse an expression and echo it back");
    parse_cmd->add_option("expr", expr_text, "operator expression")->required();
    add_common(parse_cmd, false);
    parse_cmd->callback([&] { exit_code = run_parse(cfg, expr_text); });

    auto* no_cmd = app.add_subcommand("normal-order", "rewrite to canonical normal order");
    no_cmd->add_option("expr", expr_text, "operator expression")->required();
    add_common(no_cmd, false);
    no_cmd->callback([&] { exit_code = run_normal_order(cfg, expr_text); });

    auto* parity_cmd = app.add_subcommand("parity", "parity class of an expression");
    parity_cmd->add_option("expr", expr_text, "operator expression")->required();
    add_common(parity_cmd, false);
    parity_cmd->callback([&] { exit_code = run_parity(cfg, expr_text); });

    for (const char* name : {"commutator", "anticommutator"}) {
        auto* sub = app.add_subcommand(
            name, std::string("symbolic ") + name + " of two expressions");
        sub->add_option("lhs", expr_text, "left expression")->required();
        sub->add_option("rhs", rhs_text, "right expression")->required();
        add_common(sub, false);
        sub->callback([&, name] { exit_code = run_bracket(cfg, name, expr_text, rhs_text); });
    }

    auto* matrix_cmd = app.add_subcommand("matrix", "Jordan-Wigner matrix of an expression");
    matrix_cmd->add_option("expr", expr_text, "operator expression")->required();
    add_common(matrix_cmd, false);
    matrix_cmd->callback([&] { exit_code = run_matrix(cfg, expr_text); });

    auto* exp_cmd = app.add_subcommand("expectation", "expectation value on a state");
    exp_cmd->add_option("expr", expr_text, "operator expression")->required();
    add_common(exp_cmd, true);
    exp_cmd->callback([&] { exit_code = run_expectation(cfg, expr_text); });

    auto* reduce_cmd = app.add_subcommand("reduce", "reduced state on a mode subset");
    reduce_cmd->add_option("modes-subset", mode_list, "modes, e.g. \"1,2\"")->required();
    reduce_cmd->add_flag("--parity-restricted", parity_restricted,
                         "match only even-parity observables");
    add_common(reduce_cmd, true);
    reduce_cmd->callback([&] { exit_code = run_reduce(cfg, mode_list, parity_restricted); });

    auto* ssr_cmd = app.add_subcommand("ssr-check", "parity superselection compliance of a state");
    add_common(ssr_cmd, true);
    ssr_cmd->callback([&] { exit_code = run_ssr_check(cfg); });

    auto* signal_cmd =
        app.add_subcommand("signal", "apply a unitary on B and compare A's statistics");
    signal_cmd->add_option("--op", op_text, "unitary expression on B")->required();
    signal_cmd->add_option("--partition", partition_text, "mode split, e.g. \"1,2|3,4\"")
        ->required();
    add_common(signal_cmd, true);
    signal_cmd->callback([&] { exit_code = run_signal(cfg, op_text, partition_text); });

    auto* witness_cmd =
        app.add_subcommand("witness", "signalling witness for a non-commuting pair");
    witness_cmd->add_option("--oa", oa_text, "Hermitian observable A")->required();
    witness_cmd->add_option("--ob", ob_text, "Hermitian observable B")->required();
    add_common(witness_cmd, false);
    witness_cmd->callback([&] { exit_code = run_witness(cfg, oa_text, ob_text); });

    auto* derive_cmd = app.add_subcommand(
        "derive-ssr", "derive the even-parity restriction from commutation");
    derive_cmd->add_option("--partition", partition_text, "mode split, e.g. \"1,2|3\"")
        ->required();
    add_common(derive_cmd, false);
    derive_cmd->callback([&] { exit_code = run_derive_ssr(cfg, partition_text); });

    auto* example_cmd = app.add_subcommand("paper-example", "the worked two-mode signalling example");
    add_common(example_cmd, false);
    example_cmd->callback([&] { exit_code = run_worked_example(cfg); });

    auto* verify_cmd = app.add_subcommand("verify", "run the full acceptance property suite");
    add_common(verify_cmd, false);
    verify_cmd->callback([&] { exit_code = run_verify(cfg); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help/version exit 0; usage problems exit 2
    } catch (const carlock::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const StateFileError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return exit_code;
}
