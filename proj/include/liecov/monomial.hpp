#pragma once

// Exponent multi-indices with the global graded-lexicographic order.

#include <cstdint>
#include <vector>

#include "liecov/scalar.hpp"

namespace liecov {

using Exp = std::vector<std::uint32_t>;

inline std::uint32_t total_degree(const Exp& e) {
    std::uint32_t d = 0;
    for (auto x : e) d += x;
    return d;
}

// Graded lex: compare total degree first, ties broken lexicographically with
// earlier variables weighing more. begin() of a map keyed by this is the
// smallest monomial; the leading term sits at rbegin().
struct GradedLexLess {
    bool operator()(const Exp& a, const Exp& b) const {
        std::uint32_t da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

// All exponent vectors of total degree d in n variables, descending graded-lex,
// so index 0 is the largest monomial (x0^d).
inline void enumerate_degree(int n, std::uint32_t d, std::vector<Exp>& out) {
    Exp cur(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int pos, std::uint32_t rem) -> void {
        if (pos == n - 1) {
            cur[pos] = rem;
            out.push_back(cur);
            return;
        }
        for (std::uint32_t e = rem; e + 1 > 0; --e) {
            cur[pos] = e;
            self(self, pos + 1, rem - e);
            if (e == 0) break;
        }
        cur[pos] = 0;
    };
    if (n == 0) {
        if (d == 0) out.push_back(Exp{});
        return;
    }
    rec(rec, 0, d);
}

inline std::vector<Exp> monomials_of_degree(int n, std::uint32_t d) {
    std::vector<Exp> out;
    enumerate_degree(n, d, out);
    return out;
}

// Degrees descending, so overall descending graded-lex.
inline std::vector<Exp> monomials_up_to_degree(int n, std::uint32_t d) {
    std::vector<Exp> out;
    for (std::uint32_t k = d; k + 1 > 0; --k) {
        enumerate_degree(n, k, out);
        if (k == 0) break;
    }
    return out;
}

inline mpz_class factorial(std::uint32_t k) {
    mpz_class f = 1;
    for (std::uint32_t i = 2; i <= k; ++i) f *= i;
    return f;
}

// alpha! = prod alpha_i!
inline Rational multi_factorial(const Exp& alpha) {
    mpz_class f = 1;
    for (auto a : alpha) f *= factorial(a);
    return Rational(f);
}

inline bool exp_leq(const Exp& beta, const Exp& alpha) {
    for (std::size_t i = 0; i < alpha.size(); ++i)
        if (beta[i] > alpha[i]) return false;
    return true;
}

inline Exp exp_sub(const Exp& alpha, const Exp& beta) {
    Exp r = alpha;
    for (std::size_t i = 0; i < alpha.size(); ++i) r[i] -= beta[i];
    return r;
}

inline Exp exp_add(const Exp& alpha, const Exp& beta) {
    Exp r = alpha;
    for (std::size_t i = 0; i < alpha.size(); ++i) r[i] += beta[i];
    return r;
}

inline mpz_class binomial(std::uint32_t n, std::uint32_t k) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return b;
}

// prod_i C(alpha_i, beta_i), the Leibniz coefficient for d^alpha(fg).
inline Rational multi_binomial(const Exp& alpha, const Exp& beta) {
    mpz_class b = 1;
    for (std::size_t i = 0; i < alpha.size(); ++i) b *= binomial(alpha[i], beta[i]);
    return Rational(b);
}

// Multi-indices beta <= alpha (componentwise).
inline std::vector<Exp> sub_indices(const Exp& alpha) {
    std::vector<Exp> out;
    Exp cur(alpha.size(), 0);
    auto rec = [&](auto&& self, std::size_t pos) -> void {
        if (pos == alpha.size()) {
            out.push_back(cur);
            return;
        }
        for (std::uint32_t e = 0; e <= alpha[pos]; ++e) {
            cur[pos] = e;
            self(self, pos + 1);
        }
        cur[pos] = 0;
    };
    rec(rec, 0);
    return out;
}

}  // namespace liecov
