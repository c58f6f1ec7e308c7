#include "carlock/random_expr.hpp"

#include "carlock/error.hpp"

#include <cmath>
#include <numbers>

namespace carlock {

std::uint64_t ExprGen::next_below(std::uint64_t k) {
    if (k == 0) throw Error("next_below(0)");
    // Rejection sampling keeps the distribution exactly uniform and the
    // output independent of the platform's distribution implementations.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % k;
    std::uint64_t v;
    do { v = rng_(); } while (v >= limit);
    return v % k;
}

double ExprGen::next_double() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

cplx ExprGen::next_coeff() {
    // Polar sampling, radius in [0.25, 1] so coefficients never vanish.
    const double r = 0.25 + 0.75 * std::sqrt(next_double());
    const double theta = 2.0 * std::numbers::pi * next_double();
    return {r * std::cos(theta), r * std::sin(theta)};
}

std::vector<LadderOp> ExprGen::random_factors(const std::vector<int>& modes, int length) {
    std::vector<LadderOp> factors;
    factors.reserve(static_cast<std::size_t>(length));
    for (int k = 0; k < length; ++k) {
        const int mode = modes[next_below(modes.size())];
        const bool dagger = next_below(2) == 1;
        factors.push_back({mode, dagger});
    }
    return factors;
}

OperatorExpr ExprGen::random_expr(int n_modes, int max_terms, int max_len) {
    check_mode_count(n_modes);
    std::vector<int> modes(static_cast<std::size_t>(n_modes));
    for (int k = 0; k < n_modes; ++k) modes[static_cast<std::size_t>(k)] = k + 1;

    OperatorExpr e = OperatorExpr::zero();
    const int terms = 1 + static_cast<int>(next_below(static_cast<std::uint64_t>(max_terms)));
    for (int t = 0; t < terms; ++t) {
        const int length = static_cast<int>(next_below(static_cast<std::uint64_t>(max_len) + 1));
        e = raw_add(e, {{Monomial{next_coeff(), random_factors(modes, length)}}});
    }
    return e;
}

OperatorExpr ExprGen::random_homogeneous(const std::vector<int>& modes, bool odd) {
    if (modes.empty()) throw Error("mode pool must be nonempty");
    for (int attempt = 0; attempt < 64; ++attempt) {
        OperatorExpr e = OperatorExpr::zero();
        const int terms = 1 + static_cast<int>(next_below(3));
        for (int t = 0; t < terms; ++t) {
            const int length = odd ? (next_below(2) == 0 ? 1 : 3)
                                   : (next_below(2) == 0 ? 2 : 4);
            e = raw_add(e, {{Monomial{next_coeff(), random_factors(modes, length)}}});
        }
        e = normal_order(e);
        if (!e.is_zero()) return e;
    }
    throw Error("failed to generate a nonzero homogeneous expression");
}

OperatorExpr ExprGen::random_hermitian_even_on(const std::vector<int>& modes) {
    const OperatorExpr e = random_homogeneous(modes, /*odd=*/false);
    return add(e, adjoint(e));
}

StateVector ExprGen::random_state(int n_modes) {
    check_mode_count(n_modes);
    const Eigen::Index dim = Eigen::Index{1} << n_modes;
    Eigen::VectorXcd v(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        // Box-Muller from two uniform draws.
        const double u1 = std::max(next_double(), 1e-300);
        const double u2 = next_double();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        v[k] = {mag * std::cos(2.0 * std::numbers::pi * u2),
                mag * std::sin(2.0 * std::numbers::pi * u2)};
    }
    v.normalize();
    return {n_modes, v};
}

} // namespace carlock
