#include "carlock/error.hpp"
#include "carlock/fock.hpp"
#include "carlock/locality.hpp"
#include "carlock/parse.hpp"
#include "carlock/random_expr.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>

using namespace carlock;

TEST_CASE("subalgebra basis enumerates canonical local monomials") {
    const SubalgebraBasis full = subalgebra_basis({1, 2}, false);
    CHECK(full.monomials.size() == 16);
    CHECK(full.monomials.front().empty());  // identity first
    for (const auto& m : full.monomials) {
        CHECK(is_canonical(OperatorExpr{{Monomial{1.0, m}}}));
        for (const LadderOp& op : m) CHECK((op.mode == 1 || op.mode == 2));
    }
    CHECK(std::is_sorted(full.monomials.begin(), full.monomials.end(),
                         [](const auto& a, const auto& b) { return a.size() < b.size(); }));

    const SubalgebraBasis even = subalgebra_basis({1, 2}, true);
    CHECK(even.monomials.size() == 8);
    for (const auto& m : even.monomials) CHECK(m.size() % 2 == 0);

    CHECK(subalgebra_basis({4}, false).monomials.size() == 4);

    const SubalgebraBasis one = subalgebra_basis({1}, false);
    const std::vector<std::vector<LadderOp>> expected_one = {
        {}, {annihilator(1)}, {creator(1)}, {creator(1), annihilator(1)}};
    CHECK(one.monomials == expected_one);
    const SubalgebraBasis one_even = subalgebra_basis({1}, true);
    const std::vector<std::vector<LadderOp>> expected_even = {
        {}, {creator(1), annihilator(1)}};
    CHECK(one_even.monomials == expected_even);

    CHECK_THROWS_AS(subalgebra_basis({}, false), Error);
    CHECK_THROWS_AS(subalgebra_basis({1, 1}, false), Error);
    CHECK_THROWS_AS(subalgebra_basis({0}, false), Error);
}

TEST_CASE("reduced states of the example state, before and after") {
    const StateVector psi = apply_expr(vacuum(2), parse_expr("1 + a1^"));
    const ReducedState before = reduced_state(psi, {1}, false);
    Eigen::MatrixXcd expected(2, 2);
    expected << 0.5, 0.5, 0.5, 0.5;
    CHECK(max_abs(before.matrix - expected) <= 1e-12);
    CHECK(before.residual <= 1e-10);
    CHECK(before.psd);

    const StateVector flipped = apply_expr(psi, parse_expr("a2 + a2^"));
    const ReducedState after = reduced_state(flipped, {1}, false);
    expected << 0.5, -0.5, -0.5, 0.5;
    CHECK(max_abs(after.matrix - expected) <= 1e-12);

    CHECK(trace_distance(before.matrix, after.matrix) == doctest::Approx(1.0).epsilon(1e-9));

    // under the parity restriction both reduce to the maximally mixed state
    const ReducedState even_before = reduced_state(psi, {1}, true);
    const ReducedState even_after = reduced_state(flipped, {1}, true);
    CHECK(max_abs(even_before.matrix - 0.5 * Eigen::MatrixXcd::Identity(2, 2)) <= 1e-12);
    CHECK(max_abs(even_before.matrix - even_after.matrix) <= 1e-12);

    // the vacuum marginal is the projector onto the unoccupied local level
    const ReducedState vac = reduced_state(vacuum(2), {1}, false);
    expected << 1.0, 0.0, 0.0, 0.0;
    CHECK(max_abs(vac.matrix - expected) <= 1e-12);
    CHECK(vac.psd);
}

TEST_CASE("reduced state reproduces global expectations of local monomials") {
    ExprGen gen(23);
    const StateVector psi = gen.random_state(3);
    const std::vector<int> modes = {2, 3};
    const ReducedState r = reduced_state(psi, modes, false);
    const SubalgebraBasis basis = subalgebra_basis(modes, false);
    std::map<int, int> local = {{2, 1}, {3, 2}};
    for (const auto& factors : basis.monomials) {
        std::vector<LadderOp> relabeled = factors;
        for (LadderOp& op : relabeled) op.mode = local.at(op.mode);
        const DenseOperator m_loc = jw_matrix(OperatorExpr{{Monomial{1.0, relabeled}}}, 2);
        const cplx local_value = (r.matrix * m_loc).trace();
        const cplx global_value = expectation(psi, OperatorExpr{{Monomial{1.0, factors}}});
        CHECK(std::abs(local_value - global_value) <= 1e-9);
    }
    CHECK(std::abs(r.matrix.trace() - cplx{1.0, 0.0}) <= 1e-10);
}

TEST_CASE("reduced state validates its inputs") {
    const StateVector psi = vacuum(2);
    CHECK_THROWS_AS(reduced_state(psi, {}, false), Error);
    CHECK_THROWS_AS(reduced_state(psi, {3}, false), Error);
    CHECK_THROWS_AS(reduced_state(psi, {1, 1}, false), Error);
}

TEST_CASE("disjoint grading: odd pair anticommutes, even pair commutes") {
    const CommutationReport odd_pair =
        disjoint_commutation_check(parse_expr("a1 + a1^"), parse_expr("a2 + a2^"));
    CHECK(odd_pair.parity_a == ParityClass::Odd);
    CHECK(odd_pair.parity_b == ParityClass::Odd);
    CHECK(odd_pair.anticommutator.is_zero());
    CHECK(odd_pair.anticommutator_matrix_norm <= 1e-12);
    CHECK_FALSE(odd_pair.commutator.is_zero());
    CHECK(odd_pair.commutator_coeff_norm == doctest::Approx(2.0));
    CHECK(odd_pair.commutator_matrix_norm == doctest::Approx(2.0));
    REQUIRE(odd_pair.claims.size() == 1);  // only the odd-odd claim applies
    CHECK(odd_pair.claims[0].anticommutator);
    CHECK(odd_pair.claims[0].pass);
    CHECK(odd_pair.grading_verified);

    const CommutationReport even_pair =
        disjoint_commutation_check(parse_expr("a1^ a1"), parse_expr("a2 + a2^"));
    CHECK(even_pair.parity_a == ParityClass::Even);
    CHECK(even_pair.commutator.is_zero());
    CHECK(even_pair.commutator_matrix_norm <= 1e-12);
    CHECK(even_pair.grading_verified);

    const CommutationReport mixed = disjoint_commutation_check(
        parse_expr("a1 + a1^ a1"), parse_expr("a2 + a2^ a2"));
    CHECK(mixed.parity_a == ParityClass::Mixed);
    CHECK(mixed.claims.size() == 3);
    CHECK(mixed.grading_verified);

    CHECK_THROWS_AS(disjoint_commutation_check(parse_expr("a1"), parse_expr("a1^")), Error);
}

TEST_CASE("signalling detector: odd unitary signals, even unitary does not") {
    const StateVector psi = apply_expr(vacuum(2), parse_expr("1 + a1^"));
    const ModePartition partition = ModePartition::make({1}, {2}, 2);

    const SignallingReport odd = signalling_deviation(psi, parse_expr("a2 + a2^"), partition);
    CHECK(odd.signalling_detected);
    CHECK(odd.max_deviation == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(odd.reduced_state_trace_distance == doctest::Approx(1.0).epsilon(1e-9));
    const auto hit = std::find_if(
        odd.observable_deviations.begin(), odd.observable_deviations.end(),
        [](const DeviationEntry& d) { return d.observable == "a1 + a1^"; });
    REQUIRE(hit != odd.observable_deviations.end());
    CHECK(hit->deviation == doctest::Approx(2.0).epsilon(1e-9));

    // parity flip on mode 2 is even and unitary: no deviation anywhere
    const SignallingReport even =
        signalling_deviation(psi, parse_expr("1 - 2 a2^ a2"), partition);
    CHECK_FALSE(even.signalling_detected);
    CHECK(even.max_deviation <= 1e-12);
    CHECK(even.reduced_state_trace_distance <= 1e-10);

    // from the vacuum even the odd flip leaves A's statistics alone:
    // the deviation is state-dependent, only the even restriction kills it everywhere
    const SignallingReport quiet =
        signalling_deviation(vacuum(2), parse_expr("a2 + a2^"), partition);
    CHECK_FALSE(quiet.signalling_detected);
    CHECK(quiet.max_deviation <= 1e-10);

    CHECK_THROWS_AS(signalling_deviation(psi, parse_expr("a1 + a1^"), partition), Error);
    CHECK_THROWS_AS(signalling_deviation(psi, parse_expr("a2^ a2"), partition), Error);
}

TEST_CASE("mode partitions validate") {
    CHECK_THROWS_AS(ModePartition::make({1}, {1}, 2), Error);
    CHECK_THROWS_AS(ModePartition::make({}, {2}, 2), Error);
    CHECK_THROWS_AS(ModePartition::make({1}, {3}, 2), Error);
    const ModePartition p = ModePartition::make({2, 1}, {3}, 3);
    CHECK(p.a == std::vector<int>{1, 2});  // sorted
}

TEST_CASE("commutation census flags exactly the odd-odd cross pairs") {
    const SsrDerivationReport rep =
        ssr_derivation_report(ModePartition::make({1, 2}, {3}, 3));
    CHECK(rep.total_ordered_pairs == 2 * 16 * 4);
    CHECK(rep.flagged_odd_odd.size() == 32);  // 8 odd on A times 2 odd on B, both orders
    CHECK(rep.commuting_pairs_verified == rep.total_ordered_pairs - 32);
    CHECK(rep.all_even_pairs_commute);
    CHECK(rep.all_odd_odd_flagged);
    CHECK(rep.allowed_a.size() == 8);
    CHECK(rep.allowed_b.size() == 2);
    CHECK(!rep.conclusion.empty());
    for (const OddPairWitness& w : rep.flagged_odd_odd) CHECK(w.coeff_norm > 0.0);

    // one mode per side: the (a1, a2) pair is flagged with its commutator spelled out
    const SsrDerivationReport small = ssr_derivation_report(ModePartition::make({1}, {2}, 2));
    CHECK(small.total_ordered_pairs == 2 * 4 * 4);
    CHECK(small.flagged_odd_odd.size() == 8);
    CHECK(small.allowed_a == std::vector<std::string>{"1", "a1^ a1"});
    const auto hit = std::find_if(
        small.flagged_odd_odd.begin(), small.flagged_odd_odd.end(),
        [](const OddPairWitness& w) { return w.lhs == "a1" && w.rhs == "a2"; });
    REQUIRE(hit != small.flagged_odd_odd.end());
    CHECK(hit->commutator == "-2 a2 a1");  // the canonical spelling of 2 a1 a2
}

TEST_CASE("witness for the anticommuting quadrature pair") {
    const WitnessReport rep =
        build_witness(parse_expr("a1 + a1^"), parse_expr("a2 + a2^"), 2);
    CHECK(rep.witness_found);
    CHECK(rep.commutator_norm == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(rep.eigenspace_value == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(rep.tv_distance == doctest::Approx(0.5).epsilon(1e-9));

    REQUIRE(rep.dist_before.size() == 1);
    CHECK(rep.dist_before[0].probability == doctest::Approx(1.0).epsilon(1e-9));
    REQUIRE(rep.dist_after.size() == 2);
    CHECK(rep.dist_after[0].probability == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(rep.dist_after[1].probability == doctest::Approx(0.5).epsilon(1e-9));

    // the witness state lives in the chosen eigenspace
    const DenseOperator ma = jw_matrix(parse_expr("a1 + a1^"), 2);
    CHECK((ma * rep.witness_state.amplitudes -
           rep.eigenspace_value * rep.witness_state.amplitudes)
              .norm() <= 1e-9);

    // the leaked vector is an O_B eigenvector with weight outside S
    const DenseOperator mb = jw_matrix(parse_expr("a2 + a2^"), 2);
    CHECK((mb * rep.leaked_eigenvector.amplitudes -
           rep.leaked_eigenvalue * rep.leaked_eigenvector.amplitudes)
              .norm() <= 1e-9);
}

TEST_CASE("witness degrades gracefully for commuting observables") {
    const WitnessReport rep =
        build_witness(parse_expr("a1^ a1"), parse_expr("a2^ a2"), 2);
    CHECK_FALSE(rep.witness_found);
    CHECK(rep.commutator_norm <= 1e-12);
    CHECK(rep.tv_distance <= 1e-12);
    REQUIRE(!rep.dist_before.empty());
    CHECK(rep.dist_before.size() == rep.dist_after.size());
    for (std::size_t k = 0; k < rep.dist_before.size(); ++k)
        CHECK(std::abs(rep.dist_before[k].probability - rep.dist_after[k].probability) <=
              1e-12);

    // disjoint even-odd pair: commutes even though one side is odd
    const WitnessReport eo =
        build_witness(parse_expr("a1^ a1"), parse_expr("a2 + a2^"), 2);
    CHECK_FALSE(eo.witness_found);
    CHECK(eo.commutator_norm <= 1e-12);
    CHECK(eo.tv_distance <= 1e-12);

    CHECK_THROWS_AS(build_witness(parse_expr("a1"), parse_expr("a2 + a2^"), 2), Error);
}

TEST_CASE("the worked example report") {
    const WorkedExampleReport rep = worked_example();
    CHECK(rep.pass);
    CHECK(rep.before == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.after == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(rep.deviation == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.signalling.signalling_detected);
    CHECK(rep.signalling.max_deviation == doctest::Approx(2.0).epsilon(1e-9));
}
