#include "carlock/verify.hpp"

#include "carlock/error.hpp"
#include "carlock/expr.hpp"
#include "carlock/fock.hpp"
#include "carlock/locality.hpp"
#include "carlock/parity.hpp"
#include "carlock/parse.hpp"
#include "carlock/random_expr.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

namespace carlock {

namespace {

ExprGen make_gen(std::uint64_t seed, int criterion) {
    return ExprGen(seed * 1000003ULL + static_cast<std::uint64_t>(criterion));
}

std::string norm_detail(const char* label, double worst) {
    std::ostringstream os;
    os << label << " worst " << format_real(worst);
    return os.str();
}

// Splits modes 1..n at a random point into two nonempty, disjoint sets.
std::pair<std::vector<int>, std::vector<int>> random_split(ExprGen& gen, int n) {
    const int cut = 1 + static_cast<int>(gen.next_below(static_cast<std::uint64_t>(n - 1)));
    std::vector<int> left, right;
    for (int m = 1; m <= n; ++m) (m <= cut ? left : right).push_back(m);
    return {left, right};
}

CriterionResult expectation_flip_example() {
    CriterionResult r{1, "worked signalling example", false, "", 0.0};
    const WorkedExampleReport rep = worked_example();
    r.pass = rep.pass && rep.signalling.signalling_detected;
    std::ostringstream os;
    os << "before " << format_real(rep.before) << ", after " << format_real(rep.after)
       << ", max observable deviation " << format_real(rep.signalling.max_deviation);
    r.detail = os.str();
    return r;
}

CriterionResult anticommutation_relations(int max_modes) {
    CriterionResult r{2, "canonical anticommutation relations", false, "", 0.0};
    const int top = std::min(max_modes, 6);
    double worst = 0.0;
    bool symbolic_ok = true;
    for (int n = 1; n <= top; ++n) {
        std::vector<DenseOperator> ann(static_cast<std::size_t>(n));
        for (int i = 1; i <= n; ++i)
            ann[static_cast<std::size_t>(i - 1)] = jw_matrix(OperatorExpr::ladder(i, false), n);
        const Eigen::Index dim = Eigen::Index{1} << n;
        const DenseOperator identity = DenseOperator::Identity(dim, dim);
        for (int i = 1; i <= n; ++i) {
            for (int j = 1; j <= n; ++j) {
                const DenseOperator& ai = ann[static_cast<std::size_t>(i - 1)];
                const DenseOperator& aj = ann[static_cast<std::size_t>(j - 1)];
                const DenseOperator adj_i = ai.adjoint(), adj_j = aj.adjoint();
                worst = std::max(worst, max_abs(ai * aj + aj * ai));
                worst = std::max(worst, max_abs(adj_i * adj_j + adj_j * adj_i));
                const DenseOperator mixed = ai * adj_j + adj_j * ai;
                worst = std::max(worst, max_abs(i == j ? DenseOperator(mixed - identity) : mixed));

                const OperatorExpr a_i = OperatorExpr::ladder(i, false);
                const OperatorExpr a_j = OperatorExpr::ladder(j, false);
                const OperatorExpr c_j = OperatorExpr::ladder(j, true);
                symbolic_ok = symbolic_ok && symb_anticommutator(a_i, a_j).is_zero();
                symbolic_ok = symbolic_ok &&
                              symb_anticommutator(adjoint(a_i), c_j).is_zero();
                const OperatorExpr mixed_sym = symb_anticommutator(a_i, c_j);
                symbolic_ok = symbolic_ok &&
                              (i == j ? mixed_sym == OperatorExpr::identity() : mixed_sym.is_zero());
            }
        }
    }
    r.pass = worst <= 1e-12 && symbolic_ok;
    r.detail = norm_detail("matrix relation residual", worst) +
               (symbolic_ok ? ", symbolic exact" : ", symbolic FAILED");
    return r;
}

CriterionResult disjoint_grading(int max_modes, std::uint64_t seed) {
    CriterionResult r{3, "disjoint-support grading", false, "", 0.0};
    ExprGen gen = make_gen(seed, 3);
    const int top = std::min(max_modes, 6);
    int ok = 0;
    const int trials = 200;
    double worst_claim = 0.0, worst_agree = 0.0;
    for (int t = 0; t < trials; ++t) {
        const int n = 2 + static_cast<int>(gen.next_below(static_cast<std::uint64_t>(top - 1)));
        auto [left, right] = random_split(gen, n);
        const OperatorExpr ea = gen.random_homogeneous(left, gen.next_below(2) == 1);
        const OperatorExpr eb = gen.random_homogeneous(right, gen.next_below(2) == 1);
        const CommutationReport rep = disjoint_commutation_check(ea, eb, 1e-10);
        for (const CommutationClaim& c : rep.claims)
            worst_claim = std::max({worst_claim, c.coeff_norm, c.matrix_norm});

        // Symbolic results must reproduce the matrix (anti)commutators.
        const DenseOperator ma = jw_matrix(ea, n), mb = jw_matrix(eb, n);
        worst_agree = std::max(worst_agree,
            max_abs(jw_matrix(rep.commutator, n) - DenseOperator(ma * mb - mb * ma)));
        worst_agree = std::max(worst_agree,
            max_abs(jw_matrix(rep.anticommutator, n) - DenseOperator(ma * mb + mb * ma)));
        if (rep.grading_verified) ++ok;
    }
    r.pass = ok == trials && worst_agree <= 1e-10;
    std::ostringstream os;
    os << ok << "/" << trials << " pairs graded, claim worst " << format_real(worst_claim)
       << ", symbolic/matrix gap " << format_real(worst_agree);
    r.detail = os.str();
    return r;
}

CriterionResult even_operations_do_not_signal(int max_modes, std::uint64_t seed) {
    CriterionResult r{4, "even operations cannot signal", false, "", 0.0};
    ExprGen gen = make_gen(seed, 4);
    const int top = std::min(max_modes, 5);
    const int trials = 100;
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const int n = 2 + static_cast<int>(gen.next_below(static_cast<std::uint64_t>(top - 1)));
        auto [left, right] = random_split(gen, n);
        const StateVector psi = gen.random_state(n);
        const OperatorExpr h = gen.random_hermitian_even_on(right);
        const double angle = 2.0 * std::numbers::pi * gen.next_double();
        const DenseOperator u = exponentiate_hermitian(h, angle, n);
        const StateVector after = apply_operator(psi, u);
        const ReducedState before_a = reduced_state(psi, left, false);
        const ReducedState after_a = reduced_state(after, left, false);
        worst = std::max(worst, trace_distance(before_a.matrix, after_a.matrix));
    }

    // Dropping the parity restriction must be caught by the detector.
    const WorkedExampleReport example = worked_example();
    const double dev = example.signalling.max_deviation;
    r.pass = worst <= 1e-10 && std::abs(dev - 2.0) <= 1e-10 &&
             example.signalling.signalling_detected;
    std::ostringstream os;
    os << trials << " even unitaries, reduced-state distance worst " << format_real(worst)
       << "; odd operation deviation " << format_real(dev);
    r.detail = os.str();
    return r;
}

CriterionResult witness_soundness(int max_modes, std::uint64_t seed) {
    CriterionResult r{5, "witness soundness", false, "", 0.0};
    ExprGen gen = make_gen(seed, 5);
    const int top = std::min(max_modes, 3);

    auto prob_on_s = [](const WitnessReport& rep) {
        for (const Outcome& o : rep.dist_before)
            if (o.eigenvalue == rep.eigenspace_value) return o.probability;
        return 0.0;
    };

    const OperatorExpr xa = parse_expr("a1 + a1^"), xb = parse_expr("a2 + a2^");
    const WitnessReport fixed = build_witness(xa, xb, 2);
    bool ok = fixed.witness_found && std::abs(fixed.tv_distance - 0.5) <= 1e-10 &&
              std::abs(prob_on_s(fixed) - 1.0) <= 1e-10;

    auto hermitize = [](const OperatorExpr& e) { return add(e, adjoint(e)); };
    const int trials = 50;
    int agreed = 0;
    for (int t = 0; t < trials; ++t) {
        const int n = 2 + static_cast<int>(gen.next_below(static_cast<std::uint64_t>(top - 1)));
        OperatorExpr oa, ob;
        if (t % 2 == 0) {
            oa = hermitize(gen.random_expr(n));
            ob = hermitize(gen.random_expr(n));
        } else {
            // Even operators on disjoint supports commute exactly.
            auto [left, right] = random_split(gen, n);
            oa = gen.random_hermitian_even_on(left);
            ob = gen.random_hermitian_even_on(right);
        }
        const WitnessReport rep = build_witness(oa, ob, n);
        const bool positive_tv = rep.tv_distance > 1e-12;
        const bool noncommuting = rep.commutator_norm > 1e-8;
        const bool before_ok = std::abs(prob_on_s(rep) - 1.0) <= 1e-10;
        if (positive_tv == noncommuting && rep.witness_found == noncommuting && before_ok)
            ++agreed;
    }
    r.pass = ok && agreed == trials;
    std::ostringstream os;
    os << "fixed pair tv " << format_real(fixed.tv_distance) << "; " << agreed << "/"
       << trials << " random pairs match (tv > 0 iff noncommuting)";
    r.detail = os.str();
    return r;
}

CriterionResult normal_order_preserves_matrix(int max_modes, std::uint64_t seed) {
    CriterionResult r{6, "normal ordering preserves the represented operator", false, "", 0.0};
    ExprGen gen = make_gen(seed, 6);
    const int top = std::min(max_modes, 6);
    const int trials = 200;
    double worst = 0.0;
    bool idempotent = true;
    for (int t = 0; t < trials; ++t) {
        const int n = 1 + static_cast<int>(gen.next_below(static_cast<std::uint64_t>(top)));
        const OperatorExpr e = gen.random_expr(n);
        const OperatorExpr f = normal_order(e);
        worst = std::max(worst, max_abs(jw_matrix(f, n) - jw_matrix(e, n)));
        idempotent = idempotent && is_canonical(f) && normal_order(f) == f;
    }
    r.pass = worst <= 1e-10 && idempotent;
    r.detail = norm_detail("matrix gap", worst) +
               (idempotent ? ", idempotent" : ", idempotence FAILED");
    return r;
}

CriterionResult parity_machinery(int max_modes, std::uint64_t seed) {
    CriterionResult r{7, "parity operator and sector dephasing", false, "", 0.0};
    ExprGen gen = make_gen(seed, 7);
    const int top = std::min(max_modes, 6);
    const int trials = 100;
    double worst_grading = 0.0, worst_dephase = 0.0;
    for (int t = 0; t < trials; ++t) {
        const int n = 1 + static_cast<int>(gen.next_below(static_cast<std::uint64_t>(top)));
        std::vector<int> modes(static_cast<std::size_t>(n));
        for (int m = 1; m <= n; ++m) modes[static_cast<std::size_t>(m - 1)] = m;
        const bool odd = gen.next_below(2) == 1;
        const OperatorExpr e = gen.random_homogeneous(modes, odd);
        const DenseOperator p = parity_operator(n);
        const DenseOperator m = jw_matrix(e, n);
        worst_grading = std::max(worst_grading,
                                 max_abs(odd ? DenseOperator(p * m + m * p)
                                             : DenseOperator(p * m - m * p)));

        const StateVector psi = gen.random_state(n);
        const DensityMatrix rho = to_density(psi);
        const DensityMatrix once = ssr_dephase(rho);
        const DensityMatrix twice = ssr_dephase(once);
        worst_dephase = std::max(worst_dephase, max_abs(twice.matrix - once.matrix));
        worst_dephase = std::max(worst_dephase,
                                 std::abs(once.matrix.trace() - rho.matrix.trace()));
    }
    r.pass = worst_grading <= 1e-10 && worst_dephase <= 1e-12;
    r.detail = norm_detail("grading residual", worst_grading) + ", " +
               norm_detail("dephasing residual", worst_dephase);
    return r;
}

} // namespace

VerificationReport run_verification(int max_modes, std::uint64_t seed) {
    if (max_modes < 2) throw Error("verification needs at least 2 modes");
    check_mode_count(max_modes);

    VerificationReport report;
    report.max_modes = max_modes;
    report.seed = seed;

    const double limits[] = {1.0, 10.0, 30.0, 0.0, 0.0, 60.0, 0.0};  // 0 = no limit
    const auto started = std::chrono::steady_clock::now();
    auto last = started;
    int id = 0;
    auto push = [&](CriterionResult c) {
        const auto now = std::chrono::steady_clock::now();
        c.seconds = std::chrono::duration<double>(now - last).count();
        last = now;
        const double limit = limits[id++];
        if (limit > 0.0 && c.seconds >= limit) {
            c.pass = false;
            c.detail += " [exceeded " + format_real(limit) + " s budget]";
        }
        report.criteria.push_back(std::move(c));
    };

    push(expectation_flip_example());
    push(anticommutation_relations(max_modes));
    push(disjoint_grading(max_modes, seed));
    push(even_operations_do_not_signal(max_modes, seed));
    push(witness_soundness(max_modes, seed));
    push(normal_order_preserves_matrix(max_modes, seed));
    push(parity_machinery(max_modes, seed));

    report.total_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    report.all_pass = std::all_of(report.criteria.begin(), report.criteria.end(),
                                  [](const CriterionResult& c) { return c.pass; });
    return report;
}

} // namespace carlock
