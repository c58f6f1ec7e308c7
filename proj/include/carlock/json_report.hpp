#pragma once

#include "carlock/expr.hpp"
#include "carlock/fock.hpp"
#include "carlock/locality.hpp"
#include "carlock/parity.hpp"
#include "carlock/parse.hpp"
#include "carlock/state_io.hpp"
#include "carlock/verify.hpp"

#include <json.hpp>

// JSON views of every report type.  Keys are emitted in sorted order and all
// randomness is seeded, so identical inputs produce byte-identical output;
// wall-clock timings are therefore kept out of these views.
namespace carlock {

inline nlohmann::json complex_json(cplx c) {
    return {{"re", c.real()}, {"im", c.imag()}};
}

inline nlohmann::json expr_json(const OperatorExpr& e) {
    nlohmann::json terms = nlohmann::json::array();
    for (const Monomial& m : e.terms) {
        nlohmann::json factors = nlohmann::json::array();
        for (const LadderOp& op : m.factors)
            factors.push_back(to_string(std::vector<LadderOp>{op}));
        terms.push_back({{"coeff", complex_json(m.coeff)}, {"factors", factors}});
    }
    return {{"printed", to_string(e)}, {"terms", terms}};
}

inline nlohmann::json matrix_json(const Eigen::MatrixXcd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline nlohmann::json state_json(const StateVector& psi) {
    return nlohmann::json::parse(save_state(psi));
}

inline nlohmann::json distribution_json(const OutcomeDistribution& d) {
    nlohmann::json out = nlohmann::json::array();
    for (const Outcome& o : d)
        out.push_back({{"eigenvalue", o.eigenvalue}, {"probability", o.probability}});
    return out;
}

inline nlohmann::json reduced_json(const ReducedState& r) {
    return {{"modes", r.modes},
            {"matrix", matrix_json(r.matrix)},
            {"psd", r.psd},
            {"min_eigenvalue", r.min_eigenvalue},
            {"residual", r.residual}};
}

inline nlohmann::json commutation_json(const CommutationReport& r) {
    nlohmann::json claims = nlohmann::json::array();
    for (const CommutationClaim& c : r.claims)
        claims.push_back({{"description", c.description},
                          {"anticommutator", c.anticommutator},
                          {"coeff_norm", c.coeff_norm},
                          {"matrix_norm", c.matrix_norm},
                          {"pass", c.pass}});
    return {{"parity_a", to_string(r.parity_a)},
            {"parity_b", to_string(r.parity_b)},
            {"commutator", expr_json(r.commutator)},
            {"anticommutator", expr_json(r.anticommutator)},
            {"commutator_coeff_norm", r.commutator_coeff_norm},
            {"anticommutator_coeff_norm", r.anticommutator_coeff_norm},
            {"commutator_matrix_norm", r.commutator_matrix_norm},
            {"anticommutator_matrix_norm", r.anticommutator_matrix_norm},
            {"claims", claims},
            {"grading_verified", r.grading_verified}};
}

inline nlohmann::json signalling_json(const SignallingReport& r) {
    nlohmann::json devs = nlohmann::json::array();
    for (const DeviationEntry& d : r.observable_deviations)
        devs.push_back({{"observable", d.observable}, {"deviation", d.deviation}});
    return {{"observable_deviations", devs},
            {"max_deviation", r.max_deviation},
            {"reduced_state_trace_distance", r.reduced_state_trace_distance},
            {"signalling_detected", r.signalling_detected}};
}

inline nlohmann::json ssr_derivation_json(const SsrDerivationReport& r) {
    nlohmann::json flagged = nlohmann::json::array();
    for (const OddPairWitness& w : r.flagged_odd_odd)
        flagged.push_back({{"lhs", w.lhs},
                           {"rhs", w.rhs},
                           {"commutator", w.commutator},
                           {"coeff_norm", w.coeff_norm}});
    return {{"partition",
             {{"a", r.partition.a}, {"b", r.partition.b}, {"n_modes", r.partition.n_modes}}},
            {"total_ordered_pairs", r.total_ordered_pairs},
            {"commuting_pairs_verified", r.commuting_pairs_verified},
            {"flagged_odd_odd", flagged},
            {"all_even_pairs_commute", r.all_even_pairs_commute},
            {"all_odd_odd_flagged", r.all_odd_odd_flagged},
            {"allowed_a", r.allowed_a},
            {"allowed_b", r.allowed_b},
            {"conclusion", r.conclusion}};
}

inline nlohmann::json witness_json(const WitnessReport& r) {
    return {{"witness_found", r.witness_found},
            {"commutator_norm", r.commutator_norm},
            {"witness_state", state_json(r.witness_state)},
            {"eigenspace_value", r.eigenspace_value},
            {"leaked_eigenvector", state_json(r.leaked_eigenvector)},
            {"leaked_eigenvalue", r.leaked_eigenvalue},
            {"dist_before", distribution_json(r.dist_before)},
            {"dist_after", distribution_json(r.dist_after)},
            {"tv_distance", r.tv_distance}};
}

inline nlohmann::json worked_example_json(const WorkedExampleReport& r) {
    return {{"before", r.before},
            {"after", r.after},
            {"deviation", r.deviation},
            {"signalling", signalling_json(r.signalling)},
            {"pass", r.pass}};
}

inline nlohmann::json verification_json(const VerificationReport& r) {
    nlohmann::json criteria = nlohmann::json::array();
    for (const CriterionResult& c : r.criteria)
        criteria.push_back(
            {{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    return {{"max_modes", r.max_modes},
            {"seed", r.seed},
            {"criteria", criteria},
            {"all_pass", r.all_pass}};
}

} // namespace carlock
