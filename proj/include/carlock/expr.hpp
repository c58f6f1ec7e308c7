#pragma once

#include <compare>
#include <complex>
#include <set>
#include <utility>
#include <vector>

namespace carlock {

using cplx = std::complex<double>;

// Coefficients with modulus below this are pruned after merging.
inline constexpr double kCoeffPruneTol = 1e-12;

// A single creation (dagger) or annihilation operator on a fermionic mode.
// Mode indices start at 1 and are unbounded at the symbolic level.
struct LadderOp {
    int mode = 1;
    bool dagger = false;

    friend auto operator<=>(const LadderOp&, const LadderOp&) = default;
};

inline LadderOp creator(int mode) { return {mode, true}; }
inline LadderOp annihilator(int mode) { return {mode, false}; }

// coeff * product of ladder operators; an empty factor list is the identity.
struct Monomial {
    cplx coeff{1.0, 0.0};
    std::vector<LadderOp> factors;

    friend bool operator==(const Monomial& l, const Monomial& r) {
        return l.coeff == r.coeff && l.factors == r.factors;
    }
};

// Formal sum of monomials.  Freshly parsed or multiplied expressions may hold
// duplicate factor sequences; normal_order() produces the canonical form
// (creators ascending, annihilators descending, like terms merged, terms
// sorted by length then lexicographically).
struct OperatorExpr {
    std::vector<Monomial> terms;

    static OperatorExpr zero() { return {}; }
    static OperatorExpr identity(cplx c = {1.0, 0.0}) { return {{Monomial{c, {}}}}; }
    static OperatorExpr ladder(int mode, bool dagger) {
        return {{Monomial{{1.0, 0.0}, {LadderOp{mode, dagger}}}}};
    }

    bool is_zero() const { return terms.empty(); }

    // Structural equality: identical term lists, exact coefficients.
    friend bool operator==(const OperatorExpr& l, const OperatorExpr& r) {
        return l.terms == r.terms;
    }
};

enum class ParityClass { Zero, Even, Odd, Mixed };

const char* to_string(ParityClass p);

// Canonical normal ordering via the anti-commutation rewrite rules
//   a_i a_j      -> -a_j a_i        (i != j)
//   a_i^ a_j^    -> -a_j^ a_i^      (i != j)
//   a_i a_j^     -> delta_ij - a_j^ a_i
//   a_i a_i, a_i^ a_i^ -> 0
// Total; result is canonical and deterministic.
OperatorExpr normal_order(const OperatorExpr& e);

bool is_canonical(const OperatorExpr& e);

// Raw (non-canonicalizing) combinators; used by the parser, which must not
// normal order.  Zero-coefficient terms are still pruned.
OperatorExpr raw_add(const OperatorExpr& a, const OperatorExpr& b);
OperatorExpr raw_scale(cplx c, const OperatorExpr& e);
OperatorExpr raw_multiply(const OperatorExpr& a, const OperatorExpr& b);

// Canonicalizing algebra.
OperatorExpr add(const OperatorExpr& a, const OperatorExpr& b);
OperatorExpr scale(cplx c, const OperatorExpr& e);
OperatorExpr multiply(const OperatorExpr& a, const OperatorExpr& b);

// Hermitian adjoint: conjugate coefficients, reverse factors, flip daggers.
OperatorExpr adjoint(const OperatorExpr& e);

// Grading by factor count mod 2.  Expects a canonical expression.
ParityClass parity_of(const OperatorExpr& e);

// e = even + odd with homogeneous halves (either may be zero).
std::pair<OperatorExpr, OperatorExpr> even_odd_split(const OperatorExpr& e);

std::set<int> support(const OperatorExpr& e);

// normal_order(ab - ba) and normal_order(ab + ba).
OperatorExpr symb_commutator(const OperatorExpr& a, const OperatorExpr& b);
OperatorExpr symb_anticommutator(const OperatorExpr& a, const OperatorExpr& b);

// max |coeff| over terms; 0 for the zero expression.
double coeff_max_norm(const OperatorExpr& e);

} // namespace carlock
