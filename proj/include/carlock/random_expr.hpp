#pragma once

#include "carlock/expr.hpp"
#include "carlock/fock.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace carlock {

// Deterministic generator for expressions and states.  All randomness flows
// through helpers that only use the raw 64-bit output of mt19937_64, so a
// fixed seed reproduces byte-identical results on every platform.
class ExprGen {
public:
    explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

    std::uint64_t next_u64() { return rng_(); }
    // Uniform in [0, k).
    std::uint64_t next_below(std::uint64_t k);
    // Uniform in [0, 1) with 53-bit resolution.
    double next_double();
    // Uniform on the complex unit disk, bounded away from zero.
    cplx next_coeff();

    // Up to max_terms monomials of length <= max_len over modes 1..n_modes.
    OperatorExpr random_expr(int n_modes, int max_terms = 4, int max_len = 4);
    // Nonzero expression whose every monomial has the requested parity over
    // the given mode pool.
    OperatorExpr random_homogeneous(const std::vector<int>& modes, bool odd);
    // e + adjoint(e) for a random even e on the given modes.
    OperatorExpr random_hermitian_even_on(const std::vector<int>& modes);
    // Haar-ish random normalized state (independent complex gaussians).
    StateVector random_state(int n_modes);

private:
    std::vector<LadderOp> random_factors(const std::vector<int>& modes, int length);
    std::mt19937_64 rng_;
};

} // namespace carlock
