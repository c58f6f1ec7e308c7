#pragma once

#include "carlock/expr.hpp"
#include "carlock/fock.hpp"

#include <string>
#include <vector>

namespace carlock {

// Two observers holding disjoint nonempty mode sets inside {1..n_modes}.
struct ModePartition {
    std::vector<int> a;  // sorted ascending
    std::vector<int> b;  // sorted ascending
    int n_modes = 0;

    // Validates disjointness, ranges and non-emptiness.
    static ModePartition make(std::vector<int> a, std::vector<int> b, int n_modes);
};

// All canonical monomial factor sequences supported on a mode set (even-length
// only when parity_restricted).  Contains the identity; 4^m sequences
// unrestricted, 4^m/2 restricted.
struct SubalgebraBasis {
    std::vector<int> modes;
    bool parity_restricted = false;
    std::vector<std::vector<LadderOp>> monomials;  // sorted: length, then lex
};

// Local state defined by matching expectation values of every subalgebra
// basis monomial against the global state.  psd is reported, not enforced:
// without the parity restriction the formalism is allowed to misbehave.
struct ReducedState {
    std::vector<int> modes;
    Eigen::MatrixXcd matrix;
    bool psd = false;
    double min_eigenvalue = 0.0;
    double residual = 0.0;  // max-abs constraint violation of the solve
};

// One grading-theorem claim checked both symbolically and numerically.
struct CommutationClaim {
    std::string description;
    bool anticommutator = false;  // false: [x,y] must vanish; true: {x,y}
    double coeff_norm = 0.0;      // symbolic residual
    double matrix_norm = 0.0;     // max-abs entry of the matrix residual
    bool pass = false;
};

struct CommutationReport {
    ParityClass parity_a = ParityClass::Zero;
    ParityClass parity_b = ParityClass::Zero;
    OperatorExpr commutator;
    OperatorExpr anticommutator;
    double commutator_coeff_norm = 0.0;
    double anticommutator_coeff_norm = 0.0;
    double commutator_matrix_norm = 0.0;
    double anticommutator_matrix_norm = 0.0;
    std::vector<CommutationClaim> claims;
    bool grading_verified = false;  // every applicable claim passed
};

struct DeviationEntry {
    std::string observable;  // printed Hermitian observable on A
    double deviation;        // |change of its expectation value|
};

struct SignallingReport {
    std::vector<DeviationEntry> observable_deviations;
    double max_deviation = 0.0;
    double reduced_state_trace_distance = 0.0;
    bool signalling_detected = false;
};

struct OddPairWitness {
    std::string lhs;         // odd monomial on one side
    std::string rhs;         // odd monomial on the other side
    std::string commutator;  // nonzero symbolic commutator
    double coeff_norm = 0.0;
};

struct SsrDerivationReport {
    ModePartition partition;
    int total_ordered_pairs = 0;       // cross pairs, both directions
    int commuting_pairs_verified = 0;  // pairs with an even member
    std::vector<OddPairWitness> flagged_odd_odd;
    bool all_even_pairs_commute = false;
    bool all_odd_odd_flagged = false;
    std::vector<std::string> allowed_a;  // even monomials on A
    std::vector<std::string> allowed_b;
    std::string conclusion;
};

struct WitnessReport {
    bool witness_found = false;
    double commutator_norm = 0.0;    // max-abs entry of [M_A, M_B]
    StateVector witness_state;       // |psi_A> in the eigenspace S
    double eigenspace_value = 0.0;   // eigenvalue labelling S
    StateVector leaked_eigenvector;  // O_B eigenvector overlapping psi_A, leaking out of S
    double leaked_eigenvalue = 0.0;
    OutcomeDistribution dist_before;
    OutcomeDistribution dist_after;
    double tv_distance = 0.0;
};

struct WorkedExampleReport {
    double before = 0.0;  // <a1 + a1^> on the initial state
    double after = 0.0;   // same, after b + b^ acted on mode 2
    double deviation = 0.0;
    SignallingReport signalling;
    bool pass = false;
};

// Grading of disjoint-support pairs: even parts commute with everything on
// the other side, odd parts mutually anticommute.  Checked symbolically and
// against the Jordan-Wigner matrices.
CommutationReport disjoint_commutation_check(const OperatorExpr& ea,
                                             const OperatorExpr& eb,
                                             double tol = kDefaultTol);

SubalgebraBasis subalgebra_basis(const std::vector<int>& modes, bool parity_restricted);

ReducedState reduced_state(const StateVector& global, const std::vector<int>& modes,
                           bool parity_restricted);
ReducedState reduced_state(const DensityMatrix& global, const std::vector<int>& modes,
                           bool parity_restricted);

// Applies the unitary op_b (supported on B) and compares A's statistics:
// expectation of every Hermitian observable built from A's subalgebra basis,
// plus the trace distance between A's reduced states.
SignallingReport signalling_deviation(const StateVector& initial,
                                      const OperatorExpr& op_b,
                                      const ModePartition& partition,
                                      double tol = kDefaultTol);

// Enumerates the monomial generators on both sides and shows that exactly the
// odd-odd cross pairs fail to commute, so observers limited to commuting
// operations keep only the even generators.
SsrDerivationReport ssr_derivation_report(const ModePartition& partition);

// Constructive microcausality <-> no-signalling witness for a pair of
// Hermitian observables.  When they fail to commute, produces an eigenstate
// of O_A whose O_A statistics change after an unrecorded O_B measurement.
WitnessReport build_witness(const OperatorExpr& o_a, const OperatorExpr& o_b,
                            int n_modes, double cluster_tol = kDefaultClusterTol);

// The two-mode signalling scenario: state (a1^|0> + |0>)/sqrt(2), unitary
// a2 + a2^ on mode 2, observable a1 + a1^.  Expectations swing from +1 to -1.
WorkedExampleReport worked_example();

} // namespace carlock
