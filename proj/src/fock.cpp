#include "carlock/fock.hpp"

#include "carlock/error.hpp"

#include <Eigen/Eigenvalues>

#include <bit>
#include <cmath>
#include <string>

namespace carlock {

namespace {

void check_support(const OperatorExpr& e, int n_modes) {
    auto modes = support(e);
    if (!modes.empty() && *modes.rbegin() > n_modes)
        throw Error("expression touches mode " + std::to_string(*modes.rbegin()) +
                    " but the space has only " + std::to_string(n_modes) + " modes");
}

// Applies one ladder operator to basis index b.  Returns false when the
// result vanishes; otherwise updates b and flips the sign for each occupied
// mode preceding op.mode.
bool apply_ladder(const LadderOp& op, int n_modes, Eigen::Index& b, double& sign) {
    const int shift = n_modes - op.mode;
    const Eigen::Index bit = Eigen::Index{1} << shift;
    const bool occupied = (b & bit) != 0;
    if (op.dagger == occupied) return false;
    const auto preceding = static_cast<std::uint64_t>(b) >> (shift + 1);
    if (std::popcount(preceding) % 2 != 0) sign = -sign;
    b ^= bit;
    return true;
}

} // namespace

void check_mode_count(int n_modes) {
    if (n_modes < 1 || n_modes > kMaxModes)
        throw Error("n_modes must be in [1, " + std::to_string(kMaxModes) + "], got " +
                    std::to_string(n_modes));
}

FockBasisState FockBasisState::from_index(Eigen::Index index, int n_modes) {
    FockBasisState s;
    s.occupations.resize(static_cast<std::size_t>(n_modes));
    for (int i = 0; i < n_modes; ++i)
        s.occupations[static_cast<std::size_t>(i)] =
            static_cast<int>((index >> (n_modes - 1 - i)) & 1);
    return s;
}

Eigen::Index FockBasisState::index() const {
    Eigen::Index idx = 0;
    for (int occ : occupations) idx = (idx << 1) | occ;
    return idx;
}

std::string FockBasisState::bits() const {
    std::string s;
    s.reserve(occupations.size());
    for (int occ : occupations) s += occ ? '1' : '0';
    return s;
}

FockBasisState FockBasisState::from_bits(const std::string& bits) {
    FockBasisState s;
    s.occupations.reserve(bits.size());
    for (char c : bits) {
        if (c != '0' && c != '1')
            throw Error("basis string must contain only '0' and '1', got '" + bits + "'");
        s.occupations.push_back(c == '1');
    }
    return s;
}

StateVector vacuum(int n_modes) {
    check_mode_count(n_modes);
    StateVector psi;
    psi.n_modes = n_modes;
    psi.amplitudes = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_modes);
    psi.amplitudes[0] = 1.0;
    return psi;
}

DensityMatrix to_density(const StateVector& psi) {
    return {psi.n_modes, psi.amplitudes * psi.amplitudes.adjoint()};
}

Eigen::VectorXcd apply_to_vector(const OperatorExpr& e, const Eigen::VectorXcd& v,
                                 int n_modes) {
    const Eigen::Index dim = Eigen::Index{1} << n_modes;
    if (v.size() != dim) throw Error("state dimension does not match n_modes");
    check_support(e, n_modes);
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
    for (const Monomial& m : e.terms) {
        for (Eigen::Index src = 0; src < dim; ++src) {
            if (v[src] == cplx{0.0, 0.0}) continue;
            Eigen::Index b = src;
            double sign = 1.0;
            bool alive = true;
            for (auto it = m.factors.rbegin(); it != m.factors.rend(); ++it) {
                if (!apply_ladder(*it, n_modes, b, sign)) { alive = false; break; }
            }
            if (alive) out[b] += m.coeff * sign * v[src];
        }
    }
    return out;
}

DenseOperator jw_matrix(const OperatorExpr& e, int n_modes) {
    check_mode_count(n_modes);
    check_support(e, n_modes);
    const Eigen::Index dim = Eigen::Index{1} << n_modes;
    DenseOperator out = DenseOperator::Zero(dim, dim);
    for (const Monomial& m : e.terms) {
        for (Eigen::Index col = 0; col < dim; ++col) {
            Eigen::Index b = col;
            double sign = 1.0;
            bool alive = true;
            for (auto it = m.factors.rbegin(); it != m.factors.rend(); ++it) {
                if (!apply_ladder(*it, n_modes, b, sign)) { alive = false; break; }
            }
            if (alive) out(b, col) += m.coeff * sign;
        }
    }
    return out;
}

cplx expectation(const StateVector& psi, const OperatorExpr& e) {
    return psi.amplitudes.dot(apply_to_vector(e, psi.amplitudes, psi.n_modes));
}

cplx expectation(const DensityMatrix& rho, const OperatorExpr& e) {
    DenseOperator m = jw_matrix(e, rho.n_modes);
    if (m.rows() != rho.dim()) throw Error("operator/state dimension mismatch");
    return (rho.matrix * m).trace();
}

StateVector apply_expr(const StateVector& psi, const OperatorExpr& e,
                       bool check_unitary) {
    if (check_unitary) {
        DenseOperator m = jw_matrix(e, psi.n_modes);
        if (!is_unitary(m))
            throw Error("operator is not unitary within tolerance " +
                        std::to_string(kDefaultTol));
    }
    Eigen::VectorXcd image = apply_to_vector(e, psi.amplitudes, psi.n_modes);
    const double norm = image.norm();
    if (norm < 1e-12) throw Error("operator annihilated the state (zero image)");
    return {psi.n_modes, image / norm};
}

StateVector apply_operator(const StateVector& psi, const DenseOperator& m) {
    if (m.rows() != psi.dim() || m.cols() != psi.dim())
        throw Error("operator/state dimension mismatch");
    Eigen::VectorXcd image = m * psi.amplitudes;
    const double norm = image.norm();
    if (norm < 1e-12) throw Error("operator annihilated the state (zero image)");
    return {psi.n_modes, image / norm};
}

DenseOperator exponentiate_hermitian(const OperatorExpr& e, double theta, int n_modes) {
    DenseOperator m = jw_matrix(e, n_modes);
    if (!is_hermitian(m)) throw Error("exponentiate_hermitian: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<DenseOperator> es(m);
    Eigen::VectorXcd phases(es.eigenvalues().size());
    for (Eigen::Index k = 0; k < phases.size(); ++k)
        phases[k] = std::exp(cplx{0.0, theta * es.eigenvalues()[k]});
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Eigendecomposition eigendecompose(const DenseOperator& m, double cluster_tol) {
    if (!is_hermitian(m)) throw Error("eigendecompose: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<DenseOperator> es(m);
    const auto& vals = es.eigenvalues();
    const auto& vecs = es.eigenvectors();
    Eigendecomposition out;
    Eigen::Index start = 0;
    while (start < vals.size()) {
        Eigen::Index end = start + 1;
        while (end < vals.size() && vals[end] - vals[end - 1] <= cluster_tol) ++end;
        auto block = vecs.middleCols(start, end - start);
        out.clusters.push_back({vals.segment(start, end - start).mean(),
                                block * block.adjoint()});
        start = end;
    }
    return out;
}

namespace {

MeasurementResult measure_density(const DensityMatrix& rho, const DenseOperator& m,
                                  double cluster_tol) {
    if (m.rows() != rho.dim()) throw Error("observable/state dimension mismatch");
    Eigendecomposition eig = eigendecompose(m, cluster_tol);
    MeasurementResult res;
    res.post_state.n_modes = rho.n_modes;
    res.post_state.matrix = Eigen::MatrixXcd::Zero(rho.dim(), rho.dim());
    for (const EigenCluster& c : eig.clusters) {
        const double p = (c.projector * rho.matrix).trace().real();
        res.post_state.matrix += c.projector * rho.matrix * c.projector;
        if (p > kProbDropTol) res.distribution.push_back({c.eigenvalue, p});
    }
    return res;
}

} // namespace

MeasurementResult measure(const StateVector& psi, const DenseOperator& m,
                          double cluster_tol) {
    return measure_density(to_density(psi), m, cluster_tol);
}

MeasurementResult measure(const DensityMatrix& rho, const DenseOperator& m,
                          double cluster_tol) {
    return measure_density(rho, m, cluster_tol);
}

double max_abs(const Eigen::MatrixXcd& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const DenseOperator& m, double tol) {
    return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

bool is_unitary(const DenseOperator& m, double tol) {
    if (m.rows() != m.cols()) return false;
    DenseOperator gram = m.adjoint() * m;
    return max_abs(gram - DenseOperator::Identity(m.rows(), m.cols())) <= tol;
}

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error("trace_distance: dimension mismatch");
    Eigen::MatrixXcd diff = a - b;
    diff = (diff + diff.adjoint()) / 2.0;  // clean up Hermiticity drift
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double tv_distance(const OutcomeDistribution& p, const OutcomeDistribution& q,
                   double match_tol) {
    // Merge by eigenvalue; both lists are ascending.
    double total = 0.0;
    std::size_t i = 0, j = 0;
    while (i < p.size() || j < q.size()) {
        if (i < p.size() && j < q.size() &&
            std::abs(p[i].eigenvalue - q[j].eigenvalue) <= match_tol) {
            total += std::abs(p[i].probability - q[j].probability);
            ++i, ++j;
        } else if (j >= q.size() ||
                   (i < p.size() && p[i].eigenvalue < q[j].eigenvalue)) {
            total += p[i].probability;
            ++i;
        } else {
            total += q[j].probability;
            ++j;
        }
    }
    return 0.5 * total;
}

} // namespace carlock
