#pragma once

#include "carlock/fock.hpp"

namespace carlock {

struct SsrStateReport {
    bool compliant;
    double coherence_norm;  // max-abs entry of the even/odd cross block
};

// (-1)^N: diagonal, entry (-1)^popcount(basis index).
DenseOperator parity_operator(int n_modes);

// Compliance check against the parity superselection rule; a state is
// compliant iff the even/odd cross block of its density matrix vanishes
// within tol.
SsrStateReport state_ssr_check(const DensityMatrix& rho, double tol = kDefaultTol);
SsrStateReport state_ssr_check(const StateVector& psi, double tol = kDefaultTol);

// Sector dephasing: Pi_e rho Pi_e + Pi_o rho Pi_o.  Trace preserving,
// idempotent, output commutes with the parity operator.
DensityMatrix ssr_dephase(const DensityMatrix& rho);

// True iff the canonical form of e is even (or zero).
bool operator_ssr_allowed(const OperatorExpr& e);

} // namespace carlock
