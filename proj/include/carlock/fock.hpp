#pragma once

#include "carlock/expr.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace carlock {

inline constexpr int kMaxModes = 12;
inline constexpr double kDefaultTol = 1e-10;
inline constexpr double kDefaultClusterTol = 1e-8;

// Outcomes with probability at or below this are omitted from distributions.
inline constexpr double kProbDropTol = 1e-12;

using DenseOperator = Eigen::MatrixXcd;

// Occupation pattern of the n-mode number basis.  Mode 1 is the most
// significant bit of the basis index.
struct FockBasisState {
    std::vector<int> occupations;

    static FockBasisState from_index(Eigen::Index index, int n_modes);
    Eigen::Index index() const;
    std::string bits() const;                       // "0110", mode 1 first
    static FockBasisState from_bits(const std::string& bits);
};

struct StateVector {
    int n_modes = 0;
    Eigen::VectorXcd amplitudes;

    Eigen::Index dim() const { return amplitudes.size(); }
};

struct DensityMatrix {
    int n_modes = 0;
    Eigen::MatrixXcd matrix;

    Eigen::Index dim() const { return matrix.rows(); }
};

struct EigenCluster {
    double eigenvalue;
    DenseOperator projector;
};

struct Eigendecomposition {
    std::vector<EigenCluster> clusters;  // strictly ascending eigenvalues
};

struct Outcome {
    double eigenvalue;
    double probability;
};

using OutcomeDistribution = std::vector<Outcome>;

struct MeasurementResult {
    OutcomeDistribution distribution;
    DensityMatrix post_state;  // unrecorded-outcome (Lüders) update
};

void check_mode_count(int n_modes);

StateVector vacuum(int n_modes);
DensityMatrix to_density(const StateVector& psi);

// Applies e to a raw amplitude vector under the Jordan-Wigner sign rule
// (mode i picks up (-1)^(occupied modes before i)).
Eigen::VectorXcd apply_to_vector(const OperatorExpr& e, const Eigen::VectorXcd& v,
                                 int n_modes);

// Jordan-Wigner matrix image of e on the 2^n_modes space.
DenseOperator jw_matrix(const OperatorExpr& e, int n_modes);

cplx expectation(const StateVector& psi, const OperatorExpr& e);
cplx expectation(const DensityMatrix& rho, const OperatorExpr& e);

// Normalized image state; throws on a zero image, and on a non-unitary
// matrix when check_unitary is set.
StateVector apply_expr(const StateVector& psi, const OperatorExpr& e,
                       bool check_unitary = false);

// Plumbing: psi -> M psi, renormalized (M is expected to be unitary).
StateVector apply_operator(const StateVector& psi, const DenseOperator& m);

// exp(i * theta * jw_matrix(e)); e must be Hermitian as a matrix.
DenseOperator exponentiate_hermitian(const OperatorExpr& e, double theta, int n_modes);

// Clustered spectral decomposition of a Hermitian matrix.  Eigenvalues closer
// than cluster_tol share a projector; the recorded eigenvalue is the cluster
// mean.
Eigendecomposition eigendecompose(const DenseOperator& m,
                                  double cluster_tol = kDefaultClusterTol);

// Projective measurement of the observable m (eigenspace-level update,
// outcome unrecorded).
MeasurementResult measure(const StateVector& psi, const DenseOperator& m,
                          double cluster_tol = kDefaultClusterTol);
MeasurementResult measure(const DensityMatrix& rho, const DenseOperator& m,
                          double cluster_tol = kDefaultClusterTol);

double max_abs(const Eigen::MatrixXcd& m);
bool is_hermitian(const DenseOperator& m, double tol = kDefaultTol);
bool is_unitary(const DenseOperator& m, double tol = kDefaultTol);

// (1/2)||a - b||_1 for Hermitian a, b.
double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// Total variation distance; outcomes matched by eigenvalue within match_tol.
double tv_distance(const OutcomeDistribution& p, const OutcomeDistribution& q,
                   double match_tol = kDefaultClusterTol);

} // namespace carlock
