#include "carlock/parity.hpp"

#include <bit>

namespace carlock {

namespace {

bool odd_weight(Eigen::Index b) {
    return std::popcount(static_cast<std::uint64_t>(b)) % 2 != 0;
}

} // namespace

DenseOperator parity_operator(int n_modes) {
    check_mode_count(n_modes);
    const Eigen::Index dim = Eigen::Index{1} << n_modes;
    DenseOperator p = DenseOperator::Zero(dim, dim);
    for (Eigen::Index b = 0; b < dim; ++b) p(b, b) = odd_weight(b) ? -1.0 : 1.0;
    return p;
}

SsrStateReport state_ssr_check(const DensityMatrix& rho, double tol) {
    double coherence = 0.0;
    for (Eigen::Index r = 0; r < rho.dim(); ++r) {
        if (odd_weight(r)) continue;
        for (Eigen::Index c = 0; c < rho.dim(); ++c) {
            if (!odd_weight(c)) continue;
            coherence = std::max(coherence, std::abs(rho.matrix(r, c)));
        }
    }
    return {coherence <= tol, coherence};
}

SsrStateReport state_ssr_check(const StateVector& psi, double tol) {
    return state_ssr_check(to_density(psi), tol);
}

DensityMatrix ssr_dephase(const DensityMatrix& rho) {
    DensityMatrix out = rho;
    for (Eigen::Index r = 0; r < rho.dim(); ++r)
        for (Eigen::Index c = 0; c < rho.dim(); ++c)
            if (odd_weight(r) != odd_weight(c)) out.matrix(r, c) = 0.0;
    return out;
}

bool operator_ssr_allowed(const OperatorExpr& e) {
    ParityClass p = parity_of(normal_order(e));
    return p == ParityClass::Even || p == ParityClass::Zero;
}

} // namespace carlock
