#include "carlock/expr.hpp"

#include <algorithm>
#include <map>

namespace carlock {

namespace {

// Term ordering for canonical expressions: shorter monomials first, then
// lexicographic on (mode, dagger) pairs.
struct FactorSeqLess {
    bool operator()(const std::vector<LadderOp>& a, const std::vector<LadderOp>& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

using TermMap = std::map<std::vector<LadderOp>, cplx, FactorSeqLess>;

// Index of the first adjacent pair violating canonical order, or npos.
std::size_t first_violation(const std::vector<LadderOp>& f) {
    for (std::size_t k = 0; k + 1 < f.size(); ++k) {
        const LadderOp& x = f[k];
        const LadderOp& y = f[k + 1];
        if (!x.dagger && y.dagger) return k;                       // a a^
        if (x.dagger && y.dagger && x.mode >= y.mode) return k;    // creators ascending
        if (!x.dagger && !y.dagger && x.mode <= y.mode) return k;  // annihilators descending
    }
    return static_cast<std::size_t>(-1);
}

void merge_term(TermMap& out, std::vector<LadderOp>&& factors, cplx coeff) {
    auto [it, inserted] = out.try_emplace(std::move(factors), coeff);
    if (!inserted) it->second += coeff;
}

// Rewrites one monomial to canonical form, accumulating the resulting terms.
// Worklist of pending monomials; each rewrite step either shortens a monomial
// or reduces its disorder, so this terminates.
void normal_order_monomial(TermMap& out, Monomial m) {
    std::vector<Monomial> pending;
    pending.push_back(std::move(m));
    while (!pending.empty()) {
        Monomial cur = std::move(pending.back());
        pending.pop_back();
        const std::size_t k = first_violation(cur.factors);
        if (k == static_cast<std::size_t>(-1)) {
            merge_term(out, std::move(cur.factors), cur.coeff);
            continue;
        }
        const LadderOp x = cur.factors[k];
        const LadderOp y = cur.factors[k + 1];
        if (x.mode == y.mode && x.dagger == y.dagger) continue;  // a a or a^ a^ -> 0
        if (!x.dagger && y.dagger && x.mode == y.mode) {
            // a_i a_i^ = 1 - a_i^ a_i : delta branch drops the pair
            Monomial dropped;
            dropped.coeff = cur.coeff;
            dropped.factors.reserve(cur.factors.size() - 2);
            dropped.factors.insert(dropped.factors.end(), cur.factors.begin(),
                                   cur.factors.begin() + static_cast<std::ptrdiff_t>(k));
            dropped.factors.insert(dropped.factors.end(),
                                   cur.factors.begin() + static_cast<std::ptrdiff_t>(k) + 2,
                                   cur.factors.end());
            pending.push_back(std::move(dropped));
        }
        // transposition with fermionic sign
        cur.coeff = -cur.coeff;
        std::swap(cur.factors[k], cur.factors[k + 1]);
        pending.push_back(std::move(cur));
    }
}

OperatorExpr from_term_map(const TermMap& map) {
    OperatorExpr out;
    out.terms.reserve(map.size());
    for (const auto& [factors, coeff] : map) {
        if (std::abs(coeff) < kCoeffPruneTol) continue;
        out.terms.push_back(Monomial{coeff, factors});
    }
    return out;
}

} // namespace

const char* to_string(ParityClass p) {
    switch (p) {
        case ParityClass::Zero: return "zero";
        case ParityClass::Even: return "even";
        case ParityClass::Odd: return "odd";
        case ParityClass::Mixed: return "mixed";
    }
    return "?";
}

OperatorExpr normal_order(const OperatorExpr& e) {
    TermMap map;
    for (const Monomial& m : e.terms) normal_order_monomial(map, m);
    return from_term_map(map);
}

bool is_canonical(const OperatorExpr& e) {
    FactorSeqLess less;
    for (std::size_t i = 0; i < e.terms.size(); ++i) {
        if (first_violation(e.terms[i].factors) != static_cast<std::size_t>(-1)) return false;
        if (std::abs(e.terms[i].coeff) < kCoeffPruneTol) return false;
        if (i > 0 && !less(e.terms[i - 1].factors, e.terms[i].factors)) return false;
    }
    return true;
}

OperatorExpr raw_add(const OperatorExpr& a, const OperatorExpr& b) {
    OperatorExpr out = a;
    out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
    return out;
}

OperatorExpr raw_scale(cplx c, const OperatorExpr& e) {
    OperatorExpr out;
    out.terms.reserve(e.terms.size());
    for (const Monomial& m : e.terms) {
        cplx nc = c * m.coeff;
        if (std::abs(nc) < kCoeffPruneTol) continue;
        out.terms.push_back(Monomial{nc, m.factors});
    }
    return out;
}

OperatorExpr raw_multiply(const OperatorExpr& a, const OperatorExpr& b) {
    OperatorExpr out;
    out.terms.reserve(a.terms.size() * b.terms.size());
    for (const Monomial& ma : a.terms) {
        for (const Monomial& mb : b.terms) {
            cplx c = ma.coeff * mb.coeff;
            if (std::abs(c) < kCoeffPruneTol) continue;
            Monomial m;
            m.coeff = c;
            m.factors.reserve(ma.factors.size() + mb.factors.size());
            m.factors.insert(m.factors.end(), ma.factors.begin(), ma.factors.end());
            m.factors.insert(m.factors.end(), mb.factors.begin(), mb.factors.end());
            out.terms.push_back(std::move(m));
        }
    }
    return out;
}

OperatorExpr add(const OperatorExpr& a, const OperatorExpr& b) {
    return normal_order(raw_add(a, b));
}

OperatorExpr scale(cplx c, const OperatorExpr& e) {
    return normal_order(raw_scale(c, e));
}

OperatorExpr multiply(const OperatorExpr& a, const OperatorExpr& b) {
    return normal_order(raw_multiply(a, b));
}

OperatorExpr adjoint(const OperatorExpr& e) {
    OperatorExpr out;
    out.terms.reserve(e.terms.size());
    for (const Monomial& m : e.terms) {
        Monomial adj;
        adj.coeff = std::conj(m.coeff);
        adj.factors.assign(m.factors.rbegin(), m.factors.rend());
        for (LadderOp& op : adj.factors) op.dagger = !op.dagger;
        out.terms.push_back(std::move(adj));
    }
    return normal_order(out);
}

ParityClass parity_of(const OperatorExpr& e) {
    if (e.terms.empty()) return ParityClass::Zero;
    bool any_even = false, any_odd = false;
    for (const Monomial& m : e.terms) {
        (m.factors.size() % 2 == 0 ? any_even : any_odd) = true;
    }
    if (any_even && any_odd) return ParityClass::Mixed;
    return any_odd ? ParityClass::Odd : ParityClass::Even;
}

std::pair<OperatorExpr, OperatorExpr> even_odd_split(const OperatorExpr& e) {
    OperatorExpr canon = normal_order(e);
    OperatorExpr even, odd;
    for (Monomial& m : canon.terms) {
        (m.factors.size() % 2 == 0 ? even : odd).terms.push_back(std::move(m));
    }
    return {even, odd};
}

std::set<int> support(const OperatorExpr& e) {
    std::set<int> modes;
    for (const Monomial& m : e.terms)
        for (const LadderOp& op : m.factors) modes.insert(op.mode);
    return modes;
}

OperatorExpr symb_commutator(const OperatorExpr& a, const OperatorExpr& b) {
    return normal_order(raw_add(raw_multiply(a, b), raw_scale(-1.0, raw_multiply(b, a))));
}

OperatorExpr symb_anticommutator(const OperatorExpr& a, const OperatorExpr& b) {
    return normal_order(raw_add(raw_multiply(a, b), raw_multiply(b, a)));
}

double coeff_max_norm(const OperatorExpr& e) {
    double mx = 0.0;
    for (const Monomial& m : e.terms) mx = std::max(mx, std::abs(m.coeff));
    return mx;
}

} // namespace carlock
