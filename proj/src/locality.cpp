#include "carlock/locality.hpp"

#include "carlock/error.hpp"
#include "carlock/parse.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace carlock {

namespace {

constexpr double kCommutatorThreshold = 1e-8;  // matrix norm; below this counts as commuting
constexpr double kLeakThreshold = 1e-8;        // smallest singular value treated as leakage
constexpr double kSolveResidualTol = 1e-8;

OperatorExpr monomial_expr(const std::vector<LadderOp>& factors, cplx coeff = {1.0, 0.0}) {
    return {{Monomial{coeff, factors}}};
}

std::vector<LadderOp> adjoint_factors(const std::vector<LadderOp>& factors) {
    std::vector<LadderOp> out(factors.rbegin(), factors.rend());
    for (LadderOp& op : out) op.dagger = !op.dagger;
    return out;
}

bool factors_less(const std::vector<LadderOp>& a, const std::vector<LadderOp>& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

int required_modes(const OperatorExpr& e) {
    auto s = support(e);
    return s.empty() ? 1 : *s.rbegin();
}

// Hermitian observable set spanning the same space as the monomial basis:
// self-adjoint monomials as they are, adjoint pairs m, m^ combined into
// m + m^ and i(m - m^).
std::vector<std::pair<std::string, OperatorExpr>>
hermitian_observables(const SubalgebraBasis& basis) {
    std::vector<std::pair<std::string, OperatorExpr>> out;
    for (const auto& factors : basis.monomials) {
        auto adj = adjoint_factors(factors);
        if (adj == factors) {
            out.emplace_back(to_string(factors), monomial_expr(factors));
            continue;
        }
        if (!factors_less(factors, adj)) continue;  // handled from the partner
        OperatorExpr plus = raw_add(monomial_expr(factors), monomial_expr(adj));
        OperatorExpr minus = raw_add(monomial_expr(factors, {0.0, 1.0}),
                                     monomial_expr(adj, {0.0, -1.0}));
        out.emplace_back(to_string(plus), plus);
        out.emplace_back(to_string(minus), minus);
    }
    return out;
}

Eigen::VectorXcd fix_phase(Eigen::VectorXcd v) {
    Eigen::Index best = 0;
    double best_mag = -1.0;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        const double mag = std::abs(v[k]);
        if (mag > best_mag + 1e-12) { best_mag = mag; best = k; }
    }
    if (best_mag > 0.0) v *= std::conj(v[best]) / std::abs(v[best]);
    return v;
}

// Per-cluster probabilities, aligned with the decomposition (nothing dropped).
std::vector<double> cluster_probabilities(const Eigendecomposition& eig,
                                          const Eigen::MatrixXcd& rho) {
    std::vector<double> p;
    p.reserve(eig.clusters.size());
    for (const EigenCluster& c : eig.clusters)
        p.push_back((c.projector * rho).trace().real());
    return p;
}

OutcomeDistribution to_distribution(const Eigendecomposition& eig,
                                    const std::vector<double>& p) {
    OutcomeDistribution d;
    for (std::size_t k = 0; k < p.size(); ++k)
        if (p[k] > kProbDropTol) d.push_back({eig.clusters[k].eigenvalue, p[k]});
    return d;
}

void validate_modes(const std::vector<int>& modes, int n_modes) {
    if (modes.empty()) throw Error("mode set must be nonempty");
    std::set<int> seen;
    for (int m : modes) {
        if (m < 1 || m > n_modes)
            throw Error("mode " + std::to_string(m) + " outside [1, " +
                        std::to_string(n_modes) + "]");
        if (!seen.insert(m).second)
            throw Error("duplicate mode " + std::to_string(m));
    }
}

using ExpectationFn = std::function<cplx(const OperatorExpr&)>;

ReducedState reduced_state_impl(const ExpectationFn& global_expectation, int n_modes,
                                const std::vector<int>& modes, bool parity_restricted) {
    validate_modes(modes, n_modes);
    std::vector<int> sorted = modes;
    std::sort(sorted.begin(), sorted.end());

    const int m = static_cast<int>(sorted.size());
    const Eigen::Index d = Eigen::Index{1} << m;
    SubalgebraBasis basis = subalgebra_basis(sorted, parity_restricted);

    std::map<int, int> to_local;
    for (int k = 0; k < m; ++k) to_local[sorted[static_cast<std::size_t>(k)]] = k + 1;

    const auto rows = static_cast<Eigen::Index>(basis.monomials.size());
    Eigen::MatrixXcd constraints(rows, d * d);
    Eigen::VectorXcd targets(rows);
    for (Eigen::Index k = 0; k < rows; ++k) {
        const auto& factors = basis.monomials[static_cast<std::size_t>(k)];
        std::vector<LadderOp> local = factors;
        for (LadderOp& op : local) op.mode = to_local.at(op.mode);
        DenseOperator m_loc = jw_matrix(monomial_expr(local), m);
        // tr(rho M) = sum_ij rho(i,j) M(j,i)
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j)
                constraints(k, i * d + j) = m_loc(j, i);
        targets[k] = global_expectation(monomial_expr(factors));
    }

    // Minimum-norm least-squares; with the full basis the system is square
    // and uniquely determined, with the even basis the cross-sector block is
    // unconstrained and the minimum-norm completion leaves it zero.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(constraints);
    Eigen::VectorXcd x = cod.solve(targets);
    const double residual = (constraints * x - targets).cwiseAbs().maxCoeff();
    if (residual > kSolveResidualTol)
        throw Error("reduced_state: expectation-matching system inconsistent "
                    "(residual " + format_real(residual) + ")");

    ReducedState out;
    out.modes = sorted;
    out.residual = residual;
    out.matrix = Eigen::MatrixXcd(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) out.matrix(i, j) = x[i * d + j];
    out.matrix = (out.matrix + out.matrix.adjoint().eval()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(out.matrix);
    out.min_eigenvalue = es.eigenvalues().minCoeff();
    out.psd = out.min_eigenvalue >= -1e-8;
    return out;
}

} // namespace

ModePartition ModePartition::make(std::vector<int> a, std::vector<int> b, int n_modes) {
    check_mode_count(n_modes);
    validate_modes(a, n_modes);
    validate_modes(b, n_modes);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<int> both;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
    if (!both.empty())
        throw Error("mode sets overlap on mode " + std::to_string(both.front()));
    return {std::move(a), std::move(b), n_modes};
}

SubalgebraBasis subalgebra_basis(const std::vector<int>& modes, bool parity_restricted) {
    if (modes.empty()) throw Error("mode set must be nonempty");
    std::vector<int> sorted = modes;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted.size() != modes.size()) throw Error("duplicate mode in mode set");
    if (sorted.front() < 1) throw Error("mode indices start at 1");

    const int m = static_cast<int>(sorted.size());
    SubalgebraBasis out;
    out.modes = sorted;
    out.parity_restricted = parity_restricted;
    // Per mode: factor chosen from {1, a^, a, a^ a}; canonical layout is all
    // creators ascending, then all annihilators descending.
    const std::uint64_t combos = std::uint64_t{1} << (2 * m);
    for (std::uint64_t code = 0; code < combos; ++code) {
        std::vector<LadderOp> creators_part, annihilators_part;
        int length = 0;
        for (int k = 0; k < m; ++k) {
            const bool has_creator = (code >> (2 * k)) & 1;
            const bool has_annihilator = (code >> (2 * k + 1)) & 1;
            if (has_creator) { creators_part.push_back(creator(sorted[static_cast<std::size_t>(k)])); ++length; }
            if (has_annihilator) { annihilators_part.push_back(annihilator(sorted[static_cast<std::size_t>(k)])); ++length; }
        }
        if (parity_restricted && length % 2 != 0) continue;
        std::vector<LadderOp> factors = std::move(creators_part);
        factors.insert(factors.end(), annihilators_part.rbegin(), annihilators_part.rend());
        out.monomials.push_back(std::move(factors));
    }
    std::sort(out.monomials.begin(), out.monomials.end(), factors_less);
    return out;
}

ReducedState reduced_state(const StateVector& global, const std::vector<int>& modes,
                           bool parity_restricted) {
    return reduced_state_impl(
        [&](const OperatorExpr& e) { return expectation(global, e); },
        global.n_modes, modes, parity_restricted);
}

ReducedState reduced_state(const DensityMatrix& global, const std::vector<int>& modes,
                           bool parity_restricted) {
    return reduced_state_impl(
        [&](const OperatorExpr& e) { return expectation(global, e); },
        global.n_modes, modes, parity_restricted);
}

CommutationReport disjoint_commutation_check(const OperatorExpr& ea,
                                             const OperatorExpr& eb, double tol) {
    auto sup_a = support(ea), sup_b = support(eb);
    std::vector<int> both;
    std::set_intersection(sup_a.begin(), sup_a.end(), sup_b.begin(), sup_b.end(),
                          std::back_inserter(both));
    if (!both.empty())
        throw Error("supports overlap on mode " + std::to_string(both.front()));

    const OperatorExpr ca = normal_order(ea), cb = normal_order(eb);
    const auto [even_a, odd_a] = even_odd_split(ca);
    const auto [even_b, odd_b] = even_odd_split(cb);
    const int n = std::max(required_modes(ca), required_modes(cb));

    CommutationReport rep;
    rep.parity_a = parity_of(ca);
    rep.parity_b = parity_of(cb);
    rep.commutator = symb_commutator(ca, cb);
    rep.anticommutator = symb_anticommutator(ca, cb);
    rep.commutator_coeff_norm = coeff_max_norm(rep.commutator);
    rep.anticommutator_coeff_norm = coeff_max_norm(rep.anticommutator);

    const DenseOperator ma = jw_matrix(ca, n), mb = jw_matrix(cb, n);
    rep.commutator_matrix_norm = max_abs(ma * mb - mb * ma);
    rep.anticommutator_matrix_norm = max_abs(ma * mb + mb * ma);

    auto add_claim = [&](const std::string& description, const OperatorExpr& x,
                         const OperatorExpr& y, bool anti) {
        if (x.is_zero() || y.is_zero()) return;
        OperatorExpr sym = anti ? symb_anticommutator(x, y) : symb_commutator(x, y);
        const DenseOperator mx = jw_matrix(x, n), my = jw_matrix(y, n);
        const DenseOperator res = anti ? DenseOperator(mx * my + my * mx)
                                       : DenseOperator(mx * my - my * mx);
        CommutationClaim claim;
        claim.description = description;
        claim.anticommutator = anti;
        claim.coeff_norm = coeff_max_norm(sym);
        claim.matrix_norm = max_abs(res);
        claim.pass = claim.coeff_norm <= tol && claim.matrix_norm <= tol;
        rep.claims.push_back(std::move(claim));
    };
    add_claim("[even(A), B] = 0", even_a, cb, false);
    add_claim("[A, even(B)] = 0", ca, even_b, false);
    add_claim("{odd(A), odd(B)} = 0", odd_a, odd_b, true);

    rep.grading_verified = std::all_of(rep.claims.begin(), rep.claims.end(),
                                       [](const CommutationClaim& c) { return c.pass; });
    return rep;
}

SignallingReport signalling_deviation(const StateVector& initial,
                                      const OperatorExpr& op_b,
                                      const ModePartition& partition, double tol) {
    if (initial.n_modes != partition.n_modes)
        throw Error("state and partition disagree on n_modes");
    auto sup = support(op_b);
    for (int mode : sup)
        if (!std::binary_search(partition.b.begin(), partition.b.end(), mode))
            throw Error("operation touches mode " + std::to_string(mode) +
                        " outside observer B's set");
    const DenseOperator mb = jw_matrix(op_b, partition.n_modes);
    if (!is_unitary(mb)) throw Error("operation on B is not unitary");

    const StateVector after = apply_expr(initial, op_b);

    SignallingReport rep;
    SubalgebraBasis basis = subalgebra_basis(partition.a, false);
    for (const auto& [label, obs] : hermitian_observables(basis)) {
        const double dev = std::abs(expectation(after, obs) - expectation(initial, obs));
        rep.observable_deviations.push_back({label, dev});
        rep.max_deviation = std::max(rep.max_deviation, dev);
    }
    const ReducedState before_a = reduced_state(initial, partition.a, false);
    const ReducedState after_a = reduced_state(after, partition.a, false);
    rep.reduced_state_trace_distance = trace_distance(before_a.matrix, after_a.matrix);
    rep.signalling_detected = rep.max_deviation > tol;
    return rep;
}

SsrDerivationReport ssr_derivation_report(const ModePartition& partition) {
    SsrDerivationReport rep;
    rep.partition = partition;
    const SubalgebraBasis basis_a = subalgebra_basis(partition.a, false);
    const SubalgebraBasis basis_b = subalgebra_basis(partition.b, false);

    rep.all_even_pairs_commute = true;
    rep.all_odd_odd_flagged = true;
    auto run_side = [&](const SubalgebraBasis& first, const SubalgebraBasis& second) {
        for (const auto& x : first.monomials) {
            for (const auto& y : second.monomials) {
                ++rep.total_ordered_pairs;
                const bool both_odd = x.size() % 2 == 1 && y.size() % 2 == 1;
                OperatorExpr comm = symb_commutator(monomial_expr(x), monomial_expr(y));
                if (both_odd) {
                    if (comm.is_zero()) rep.all_odd_odd_flagged = false;
                    rep.flagged_odd_odd.push_back(
                        {to_string(x), to_string(y), to_string(comm), coeff_max_norm(comm)});
                } else {
                    if (!comm.is_zero()) rep.all_even_pairs_commute = false;
                    else ++rep.commuting_pairs_verified;
                }
            }
        }
    };
    run_side(basis_a, basis_b);
    run_side(basis_b, basis_a);

    for (const auto& x : basis_a.monomials)
        if (x.size() % 2 == 0) rep.allowed_a.push_back(to_string(x));
    for (const auto& y : basis_b.monomials)
        if (y.size() % 2 == 0) rep.allowed_b.push_back(to_string(y));

    rep.conclusion =
        "every cross pair with an even member commutes; every odd-odd cross pair "
        "fails to commute; operations available to both observers must close on "
        "the even (parity-preserving) subalgebra";
    return rep;
}

WitnessReport build_witness(const OperatorExpr& o_a, const OperatorExpr& o_b,
                            int n_modes, double cluster_tol) {
    check_mode_count(n_modes);
    const DenseOperator ma = jw_matrix(o_a, n_modes);
    const DenseOperator mb = jw_matrix(o_b, n_modes);
    if (!is_hermitian(ma)) throw Error("O_A is not Hermitian as a matrix");
    if (!is_hermitian(mb)) throw Error("O_B is not Hermitian as a matrix");
    const Eigen::Index dim = ma.rows();
    const DenseOperator identity = DenseOperator::Identity(dim, dim);

    WitnessReport rep;
    rep.commutator_norm = max_abs(ma * mb - mb * ma);

    const Eigendecomposition eig_a = eigendecompose(ma, cluster_tol);
    const Eigendecomposition eig_b = eigendecompose(mb, cluster_tol);

    // Pick the eigenspace S of O_A (ascending) that O_B maps partly out of S,
    // and inside it the state that leaks the most.
    Eigen::VectorXcd psi;
    std::size_t s_index = 0;
    bool leaking = false;
    if (rep.commutator_norm > kCommutatorThreshold) {
        for (std::size_t k = 0; k < eig_a.clusters.size(); ++k) {
            const DenseOperator& proj = eig_a.clusters[k].projector;
            const DenseOperator leak = (identity - proj) * mb * proj;
            Eigen::JacobiSVD<DenseOperator> svd(leak, Eigen::ComputeThinV);
            if (svd.singularValues().size() == 0 ||
                svd.singularValues()[0] <= kLeakThreshold)
                continue;
            psi = fix_phase(svd.matrixV().col(0));
            s_index = k;
            leaking = true;
            break;
        }
    }
    if (!leaking) {
        // Commuting pair: any eigenstate of O_A keeps its statistics.  Pick a
        // deterministic eigenvector of the first eigenspace.
        const DenseOperator& proj = eig_a.clusters.front().projector;
        Eigen::Index best = 0;
        for (Eigen::Index j = 1; j < dim; ++j)
            if (proj(j, j).real() > proj(best, best).real() + 1e-12) best = j;
        psi = fix_phase(proj.col(best) / proj.col(best).norm());
        s_index = 0;
    }

    rep.witness_found = leaking;
    rep.eigenspace_value = eig_a.clusters[s_index].eigenvalue;
    rep.witness_state = {n_modes, psi};

    const Eigen::MatrixXcd rho = psi * psi.adjoint();
    const std::vector<double> p_before = cluster_probabilities(eig_a, rho);

    // Unrecorded O_B measurement, then O_A statistics.
    Eigen::MatrixXcd rho_after = Eigen::MatrixXcd::Zero(dim, dim);
    for (const EigenCluster& c : eig_b.clusters)
        rho_after += c.projector * rho * c.projector;
    const std::vector<double> p_after = cluster_probabilities(eig_a, rho_after);

    double tv = 0.0;
    for (std::size_t k = 0; k < p_before.size(); ++k)
        tv += std::abs(p_before[k] - p_after[k]);
    rep.tv_distance = tv / 2.0;
    rep.dist_before = to_distribution(eig_a, p_before);
    rep.dist_after = to_distribution(eig_a, p_after);

    // The leaked eigenvector: the O_B eigenspace component of psi that sticks
    // out of S the furthest.
    const DenseOperator& proj_s = eig_a.clusters[s_index].projector;
    std::size_t best_b = 0;
    double best_leak = -1.0;
    for (std::size_t j = 0; j < eig_b.clusters.size(); ++j) {
        const Eigen::VectorXcd component = eig_b.clusters[j].projector * psi;
        if (component.norm() <= 1e-12) continue;
        const double out_of_s = ((identity - proj_s) * component).norm();
        if (out_of_s > best_leak + 1e-12) { best_leak = out_of_s; best_b = j; }
    }
    Eigen::VectorXcd leaked = eig_b.clusters[best_b].projector * psi;
    rep.leaked_eigenvector = {n_modes, fix_phase(leaked / leaked.norm())};
    rep.leaked_eigenvalue = eig_b.clusters[best_b].eigenvalue;
    return rep;
}

WorkedExampleReport worked_example() {
    const int n = 2;
    const OperatorExpr prepare = raw_add(OperatorExpr::identity(), OperatorExpr::ladder(1, true));
    const StateVector psi = apply_expr(vacuum(n), prepare);

    const OperatorExpr obs = raw_add(OperatorExpr::ladder(1, false), OperatorExpr::ladder(1, true));
    const OperatorExpr op_b = raw_add(OperatorExpr::ladder(2, false), OperatorExpr::ladder(2, true));
    const ModePartition partition = ModePartition::make({1}, {2}, n);

    WorkedExampleReport rep;
    rep.before = expectation(psi, obs).real();
    const StateVector after = apply_expr(psi, op_b);
    rep.after = expectation(after, obs).real();
    rep.deviation = std::abs(rep.before - rep.after);
    rep.signalling = signalling_deviation(psi, op_b, partition);
    rep.pass = std::abs(rep.before - 1.0) <= 1e-12 && std::abs(rep.after + 1.0) <= 1e-12;
    return rep;
}

} // namespace carlock
