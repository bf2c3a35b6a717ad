#pragma once

// Point-supported distributions with exact pairing against polynomial test
// maps, and the factorization machinery through invariant distributions.
//
// A V-valued distribution here is a finite sum of derivatives of Dirac
// evaluations: <T, f> = sum coeff * (d^alpha f)(p) e_comp for scalar test
// polynomials f. Pairing with a g-valued test map uses the kappa-duality:
// <T, h> = sum_comp kappa(e_comp, .) applied to the component pairings.
//
// The group acts by <g.T, f> = pi(g) <T, g^{-1}.f>; differentiating gives the
// covariance defect pi(xi) <T, f> + <T, tau(xi).f>, which vanishes for all
// test maps of degree <= order+1 iff T is covariant (jet sufficiency: the
// pairing of an order-N point distribution only sees N-jets, and tau raises
// test degree by at most one).
//
// Everything is supported at 0 for the solver paths, which makes all the
// linear systems block-diagonal per derivative order: pairing a distribution
// term of order m against a monomial only sees monomials of degree m.

#include <optional>
#include <string>
#include <vector>

#include "liecov/covariants.hpp"
#include "liecov/errors.hpp"
#include "liecov/monomial.hpp"
#include "liecov/polyalg.hpp"
#include "liecov/rep.hpp"

namespace liecov {

struct DistTerm {
    Element point;
    Exp alpha;
    int component = 0;
    Rational coeff;
};

struct PointDistribution {
    int domain_dim = 0;
    int value_dim = 1;  // 1 = scalar distribution
    std::vector<DistTerm> terms;

    int order() const {
        int m = -1;
        for (const auto& t : terms) m = std::max(m, static_cast<int>(total_degree(t.alpha)));
        return m;
    }

    bool supported_at_origin() const {
        for (const auto& t : terms)
            for (const auto& c : t.point)
                if (!is_zero(c)) return false;
        return true;
    }

    static PointDistribution delta(const Element& p, int value_dim = 1, int component = 0) {
        PointDistribution d;
        d.domain_dim = static_cast<int>(p.size());
        d.value_dim = value_dim;
        d.terms.push_back({p, Exp(p.size(), 0), component, Rational(1)});
        return d;
    }
};

inline PointDistribution& operator+=(PointDistribution& a, const PointDistribution& b) {
    if (a.domain_dim != b.domain_dim || a.value_dim != b.value_dim)
        throw DimensionMismatch("distribution sum shapes");
    a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
    return a;
}

inline PointDistribution operator*(const Rational& c, PointDistribution d) {
    for (auto& t : d.terms) t.coeff *= c;
    return d;
}

// Canonical term table: sorted by (point, alpha, component), merged, zero-free.
inline void normalize(PointDistribution& d) {
    auto key_less = [](const DistTerm& a, const DistTerm& b) {
        if (a.point != b.point) return a.point < b.point;
        GradedLexLess gl;
        if (a.alpha != b.alpha) return gl(a.alpha, b.alpha);
        return a.component < b.component;
    };
    std::sort(d.terms.begin(), d.terms.end(), key_less);
    std::vector<DistTerm> merged;
    for (auto& t : d.terms) {
        if (!merged.empty() && merged.back().point == t.point && merged.back().alpha == t.alpha &&
            merged.back().component == t.component) {
            merged.back().coeff += t.coeff;
        } else {
            merged.push_back(t);
        }
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const DistTerm& t) { return is_zero(t.coeff); }),
                 merged.end());
    d.terms = std::move(merged);
}

inline bool dist_equal(PointDistribution a, PointDistribution b) {
    if (a.domain_dim != b.domain_dim || a.value_dim != b.value_dim) return false;
    normalize(a);
    normalize(b);
    if (a.terms.size() != b.terms.size()) return false;
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        const auto& s = a.terms[i];
        const auto& t = b.terms[i];
        if (s.point != t.point || s.alpha != t.alpha || s.component != t.component ||
            s.coeff != t.coeff)
            return false;
    }
    return true;
}

// (d^alpha f)(p), exact.
inline Rational derivative_value(const Poly<Rational>& f, const Exp& alpha, const Element& p) {
    Poly<Rational> g = f;
    for (std::size_t i = 0; i < alpha.size(); ++i)
        for (std::uint32_t k = 0; k < alpha[i]; ++k) g = g.derivative(static_cast<int>(i));
    return g.evaluate(p);
}

// <T, f> in V for a scalar test polynomial.
inline std::vector<Rational> pair_dist(const PointDistribution& T, const Poly<Rational>& f) {
    if (f.nvars() != T.domain_dim) throw DimensionMismatch("pair_dist variable count");
    std::vector<Rational> v(T.value_dim, Rational(0));
    for (const auto& t : T.terms) v[t.component] += t.coeff * derivative_value(f, t.alpha, t.point);
    return v;
}

// Scalar kappa-pairing with a g-valued test map (V = g).
inline Rational pair_dist(const PointDistribution& T, const PolyMap<Rational>& h,
                          const LieAlgebra& g) {
    if (T.value_dim != g.dim() || h.target_dim() != g.dim())
        throw DimensionMismatch("kappa pairing needs g-valued distribution and test map");
    Rational s(0);
    for (const auto& t : T.terms) {
        // kappa(e_comp, h(.)) differentiated at the base point
        Poly<Rational> paired(T.domain_dim);
        for (int b = 0; b < g.dim(); ++b) {
            const Rational& k = g.gram()(t.component, b);
            if (is_zero(k) || h.component(b).is_zero_poly()) continue;
            paired += k * h.component(b);
        }
        s += t.coeff * derivative_value(paired, t.alpha, t.point);
    }
    return s;
}

// theta * chi for scalar theta: <theta chi, f> = sum_k <theta, f chi_k> e_k,
// expanded through the Leibniz rule into an explicit term table.
inline PointDistribution theta_chi(const PointDistribution& theta, const PolyMap<Rational>& chi) {
    if (theta.value_dim != 1) throw DimensionMismatch("theta_chi needs a scalar distribution");
    if (chi.domain_dim() != theta.domain_dim)
        throw DimensionMismatch("theta_chi: test space dimension mismatch");
    PointDistribution out;
    out.domain_dim = theta.domain_dim;
    out.value_dim = chi.target_dim();
    for (const auto& t : theta.terms)
        for (int k = 0; k < chi.target_dim(); ++k) {
            if (chi.component(k).is_zero_poly()) continue;
            for (const auto& beta : sub_indices(t.alpha)) {
                Rational w = t.coeff * multi_binomial(t.alpha, beta) *
                             derivative_value(chi.component(k), exp_sub(t.alpha, beta), t.point);
                if (is_zero(w)) continue;
                out.terms.push_back({t.point, beta, k, w});
            }
        }
    normalize(out);
    return out;
}

struct CovarianceDefect {
    // one entry per (basis element, test monomial) with a nonzero defect vector
    struct Entry {
        int xi_index;
        Exp monomial;
        std::vector<Rational> defect;
    };
    std::vector<Entry> entries;

    bool is_zero() const { return entries.empty(); }
};

// Defect over all monomial test maps up to test_degree. An order-N
// distribution is covariant iff this vanishes at test_degree >= N + 1.
// Pass the representation acting on values; for scalar distributions use the
// trivial representation.
inline CovarianceDefect covariance_defect(const PointDistribution& T, const Representation& rho,
                                          int test_degree) {
    const LieAlgebra& g = rho.algebra();
    if (T.domain_dim != g.dim()) throw DimensionMismatch("covariance_defect domain");
    if (T.value_dim != rho.target_dim())
        throw DimensionMismatch("covariance_defect value dimension vs representation");
    CovarianceDefect out;
    for (int j = 0; j < g.dim(); ++j) {
        auto tau = tau_field(g, g.basis_element(j));
        for (const auto& mon : monomials_up_to_degree(g.dim(), static_cast<std::uint32_t>(test_degree))) {
            Poly<Rational> f = Poly<Rational>::monomial(g.dim(), mon, Rational(1));
            auto lhs = pair_dist(T, f);
            lhs = rho.matrix(j).apply(lhs);
            auto rhs = pair_dist(T, directional_derivative(f, tau));
            bool nonzero = false;
            std::vector<Rational> defect(T.value_dim);
            for (int c = 0; c < T.value_dim; ++c) {
                defect[c] = lhs[c] + rhs[c];
                if (!is_zero(defect[c])) nonzero = true;
            }
            if (nonzero) out.entries.push_back({j, mon, std::move(defect)});
        }
    }
    return out;
}

inline bool is_covariant_dist(const PointDistribution& T, const Representation& rho) {
    return covariance_defect(T, rho, T.order() + 1).is_zero();
}

// Exact basis of the covariant point distributions supported at 0 of order
// <= order. The defect system decouples by derivative order, so each order
// block is one sparse kernel computation.
inline std::vector<PointDistribution> covariant_point_space(const Representation& rho, int order) {
    const LieAlgebra& g = rho.algebra();
    int n = g.dim();
    int dv = rho.target_dim();
    Element origin(n, Rational(0));
    std::vector<PointDistribution> basis;
    for (int m = 0; m <= order; ++m) {
        auto mons = monomials_of_degree(n, static_cast<std::uint32_t>(m));
        std::map<Exp, int, GradedLexLess> mindex;
        for (std::size_t i = 0; i < mons.size(); ++i) mindex[mons[i]] = static_cast<int>(i);
        std::vector<Rational> factorials(mons.size());
        for (std::size_t i = 0; i < mons.size(); ++i) factorials[i] = multi_factorial(mons[i]);
        // rows indexed by (xi_j, test monomial beta, component t)
        std::vector<SparseRow<Rational>> rows(static_cast<std::size_t>(n) * mons.size() * dv);
        auto row_id = [&](int j, int bi, int t) {
            return (static_cast<std::size_t>(j) * mons.size() + bi) * dv + t;
        };
        for (int j = 0; j < n; ++j) {
            for (int bi = 0; bi < static_cast<int>(mons.size()); ++bi) {
                const Exp& beta = mons[bi];
                // pi part: pi(e_j)<T, x^beta> with <T, x^beta>_k = beta! u[beta,k]
                const auto& pij = rho.matrix(j);
                for (int t = 0; t < dv; ++t)
                    for (int k = 0; k < dv; ++k) {
                        if (is_zero(pij(t, k))) continue;
                        rows[row_id(j, bi, t)].emplace_back(
                            static_cast<std::int32_t>(bi) * dv + k, pij(t, k) * factorials[bi]);
                    }
                // tau part: <T, tau_j . x^beta>_t
                for (int p = 0; p < n; ++p) {
                    if (beta[p] == 0) continue;
                    for (int i = 0; i < n; ++i)
                        for (const auto& [tgt, c] : g.basis_bracket(i, j)) {
                            if (tgt != p) continue;
                            Exp gamma = beta;
                            gamma[p] -= 1;
                            gamma[i] += 1;
                            int gi = mindex.at(gamma);
                            Rational w = Rational(static_cast<long>(beta[p])) * c * factorials[gi];
                            for (int t = 0; t < dv; ++t)
                                rows[row_id(j, bi, t)].emplace_back(
                                    static_cast<std::int32_t>(gi) * dv + t, w);
                        }
                }
            }
        }
        SparseRref<Rational> rref(static_cast<std::int32_t>(mons.size() * dv));
        for (auto& r : rows) {
            std::sort(r.begin(), r.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            SparseRow<Rational> merged;
            for (auto& [c, v] : r) {
                if (!merged.empty() && merged.back().first == c) merged.back().second += v;
                else
                    merged.emplace_back(c, v);
            }
            merged.erase(std::remove_if(merged.begin(), merged.end(),
                                        [](const auto& e) { return is_zero(e.second); }),
                         merged.end());
            rref.add_row(std::move(merged));
        }
        for (auto& vec : rref.kernel()) {
            PointDistribution T;
            T.domain_dim = n;
            T.value_dim = dv;
            for (const auto& [col, val] : vec)
                T.terms.push_back({origin, mons[col / dv], col % dv, val});
            normalize(T);
            basis.push_back(std::move(T));
        }
    }
    return basis;
}

// The computational heart of the distribution factorization: for covariant T
// on g with values in g, the pairing against any field of the form
// x -> [x, phi(x)] vanishes identically.
inline Rational kernel_orthogonality_check(const PointDistribution& T,
                                           const PolyMap<Rational>& phi, const Representation& rho) {
    const LieAlgebra& g = rho.algebra();
    if (!is_covariant_dist(T, rho))
        throw NotCovariant("kernel_orthogonality_check requires a covariant distribution");
    PolyMap<Rational> f = bracket_field(g, PolyMap<Rational>::identity(g.dim()), phi);
    return pair_dist(T, f, g);
}

struct FactorResult {
    std::vector<PointDistribution> thetas;  // scalar distributions, one per generator
    bool invariant_solution_exists = false;
};

namespace detail {

// Solve sum_i theta_i q_i = T block by block; theta_i order-mu coefficients
// only meet test monomials of degree mu - deg(q_i), so block b solves for
// theta_i data of order b + deg(q_i) from the order-b data of T. Tail blocks
// beyond T's order are satisfied by zero, so the order cap N + deg(q_i) is
// exact, not a search heuristic.
inline std::optional<std::vector<PointDistribution>> factor_blocks(
    const PointDistribution& T, const std::vector<PolyMap<Rational>>& qmaps,
    const LieAlgebra& g, bool require_invariant) {
    int n = g.dim();
    int dv = T.value_dim;
    int N = T.order();
    Element origin(n, Rational(0));
    std::vector<PointDistribution> thetas(qmaps.size());
    for (auto& th : thetas) {
        th.domain_dim = n;
        th.value_dim = 1;
    }
    if (N < 0) return thetas;  // zero distribution: all theta_i = 0
    std::vector<int> qdeg(qmaps.size());
    for (std::size_t i = 0; i < qmaps.size(); ++i) qdeg[i] = qmaps[i].degree();
    // canonical coefficient table of T at the origin: u[beta, k]
    PointDistribution Tn = T;
    normalize(Tn);
    for (int b = 0; b <= N; ++b) {
        auto bmons = monomials_of_degree(n, static_cast<std::uint32_t>(b));
        std::map<Exp, int, GradedLexLess> bindex;
        for (std::size_t i = 0; i < bmons.size(); ++i) bindex[bmons[i]] = static_cast<int>(i);
        // unknown layout: per generator i, monomials gamma of degree b + qdeg[i]
        std::vector<std::vector<Exp>> gmons(qmaps.size());
        std::vector<std::map<Exp, int, GradedLexLess>> gindex(qmaps.size());
        std::vector<std::int32_t> offset(qmaps.size() + 1, 0);
        for (std::size_t i = 0; i < qmaps.size(); ++i) {
            gmons[i] = monomials_of_degree(n, static_cast<std::uint32_t>(b + qdeg[i]));
            for (std::size_t t = 0; t < gmons[i].size(); ++t)
                gindex[i][gmons[i][t]] = static_cast<int>(t);
            offset[i + 1] = offset[i] + static_cast<std::int32_t>(gmons[i].size());
        }
        std::int32_t ncols = offset[qmaps.size()];
        std::vector<SparseRow<Rational>> rows(bmons.size() * dv);
        // matching rows: <sum theta_i q_i, x^beta>_k = <T, x^beta>_k
        for (std::size_t i = 0; i < qmaps.size(); ++i)
            for (int bi = 0; bi < static_cast<int>(bmons.size()); ++bi)
                for (int k = 0; k < dv; ++k)
                    for (const auto& [e, c] : qmaps[i].component(k).terms()) {
                        Exp gamma = exp_add(bmons[bi], e);
                        int gi = gindex[i].at(gamma);
                        rows[bi * static_cast<std::size_t>(dv) + k].emplace_back(
                            offset[i] + gi, c * multi_factorial(gamma));
                    }
        SparseRref<Rational> rref(ncols + 1, ncols);
        auto push_row = [&](SparseRow<Rational> r, const Rational& rhs) {
            std::sort(r.begin(), r.end(),
                      [](const auto& a, const auto& b2) { return a.first < b2.first; });
            SparseRow<Rational> merged;
            for (auto& [c, v] : r) {
                if (!merged.empty() && merged.back().first == c) merged.back().second += v;
                else
                    merged.emplace_back(c, v);
            }
            merged.erase(std::remove_if(merged.begin(), merged.end(),
                                        [](const auto& e) { return is_zero(e.second); }),
                         merged.end());
            if (!is_zero(rhs)) merged.emplace_back(ncols, rhs);
            rref.add_row(std::move(merged));
        };
        {
            // RHS from T's canonical table
            std::vector<Rational> rhs(bmons.size() * dv, Rational(0));
            for (const auto& t : Tn.terms)
                if (static_cast<int>(total_degree(t.alpha)) == b)
                    rhs[bindex.at(t.alpha) * static_cast<std::size_t>(dv) + t.component] =
                        t.coeff * multi_factorial(t.alpha);
            for (std::size_t rI = 0; rI < rows.size(); ++rI) push_row(std::move(rows[rI]), rhs[rI]);
        }
        if (require_invariant) {
            // <theta_i, tau(e_j) . x^gamma'> = 0 for every order-(b+qdeg) test
            for (std::size_t i = 0; i < qmaps.size(); ++i) {
                int mu = b + qdeg[i];
                auto fmons = monomials_of_degree(n, static_cast<std::uint32_t>(mu));
                for (int j = 0; j < n; ++j) {
                    auto tau = tau_field(g, g.basis_element(j));
                    for (const auto& fm : fmons) {
                        Poly<Rational> tf = directional_derivative(
                            Poly<Rational>::monomial(n, fm, Rational(1)), tau);
                        SparseRow<Rational> row;
                        for (const auto& [e, c] : tf.terms()) {
                            int gi = gindex[i].at(e);
                            row.emplace_back(offset[i] + gi, c * multi_factorial(e));
                        }
                        push_row(std::move(row), Rational(0));
                    }
                }
            }
        }
        auto sol = rref.solution(0);
        if (!sol) return std::nullopt;
        for (std::size_t i = 0; i < qmaps.size(); ++i)
            for (std::size_t t = 0; t < gmons[i].size(); ++t) {
                const Rational& v = (*sol)[offset[i] + t];
                if (!is_zero(v)) thetas[i].terms.push_back({origin, gmons[i][t], 0, v});
            }
    }
    for (auto& th : thetas) normalize(th);
    return thetas;
}

}  // namespace detail

// Weak-form factorization T = theta_1 q_1 + ... + theta_l q_l for covariant T
// supported at 0, over the gradient covariants. Whether an invariant solution
// happens to exist at these orders is reported as data alongside.
inline FactorResult factor_point_distribution(const PointDistribution& T,
                                              const InvariantGenerators& gens,
                                              const Representation& rho) {
    const LieAlgebra& g = *gens.algebra;
    if (!T.supported_at_origin())
        throw MalformedInput("factorization handles distributions supported at the origin");
    if (!is_covariant_dist(T, rho))
        throw NotCovariant("factor_point_distribution requires a covariant distribution");
    auto sol = detail::factor_blocks(T, gens.qmaps, g, false);
    if (!sol)
        throw NoFactorization("no factorization through the gradient covariants at the exact orders");
    FactorResult out;
    out.thetas = std::move(*sol);
    out.invariant_solution_exists = detail::factor_blocks(T, gens.qmaps, g, true).has_value();
    // exact verification of the reconstruction
    PointDistribution recon;
    recon.domain_dim = T.domain_dim;
    recon.value_dim = T.value_dim;
    for (std::size_t i = 0; i < out.thetas.size(); ++i) recon += theta_chi(out.thetas[i], gens.qmaps[i]);
    if (!dist_equal(recon, T)) throw std::logic_error("factorization verification failed");
    return out;
}

// sl(2) variant: a single module generator P, with theta required invariant.
inline PointDistribution factor_point_distribution_sl2(const PointDistribution& T,
                                                       const PolyMap<Rational>& P,
                                                       const Representation& rho) {
    const LieAlgebra& g = rho.algebra();
    if (!T.supported_at_origin())
        throw MalformedInput("factorization handles distributions supported at the origin");
    if (!is_covariant_dist(T, rho))
        throw NotCovariant("factor_point_distribution_sl2 requires a covariant distribution");
    auto sol = detail::factor_blocks(T, {P}, g, true);
    if (!sol) throw NoFactorization("no invariant factorization theta P at the exact orders");
    PointDistribution theta = std::move((*sol)[0]);
    if (!dist_equal(theta_chi(theta, P), T))
        throw std::logic_error("sl(2) factorization verification failed");
    return theta;
}

}  // namespace liecov
