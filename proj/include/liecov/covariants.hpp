#pragma once

// Homogeneous covariant spaces, invariant polynomials, and module bases.
//
// A polynomial map P: g -> V is covariant when P(Ad(g) x) = pi(g) P(x) for
// the (connected) adjoint group; infinitesimally this reads
//     (tau(xi) . P)(x) + pi(xi) P(x) = 0   for every xi,
// with tau(xi)(x) = [x, xi]. The defect below is the left-hand side, and
// covariant spaces are exact kernels of the induced graded linear systems,
// solved degree by degree.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "liecov/errors.hpp"
#include "liecov/liecore.hpp"
#include "liecov/linalg.hpp"
#include "liecov/monomial.hpp"
#include "liecov/polyalg.hpp"
#include "liecov/rep.hpp"

namespace liecov {

// One defect map per basis element xi_j; P is covariant iff all vanish.
template <class K>
std::vector<PolyMap<K>> equivariance_defect(const PolyMap<K>& P, const Representation& rho) {
    const LieAlgebra& g = rho.algebra();
    if (P.target_dim() != rho.target_dim())
        throw DimensionMismatch("equivariance_defect: map target vs representation space");
    if (P.domain_dim() != g.dim())
        throw DimensionMismatch("equivariance_defect: map domain vs algebra");
    std::vector<PolyMap<K>> defects;
    defects.reserve(g.dim());
    for (int j = 0; j < g.dim(); ++j) {
        PolyMap<K> tau = tau_field(g, g.basis_element(j)).map_coefficients([](const Rational& c) {
            return K(c);
        });
        PolyMap<K> defect = apply_field(tau, P);
        const auto& pij = rho.matrix(j);
        for (int t = 0; t < rho.target_dim(); ++t)
            for (int k = 0; k < rho.target_dim(); ++k) {
                if (is_zero(pij(t, k))) continue;
                defect.component(t) += K(pij(t, k)) * P.component(k);
            }
        defects.push_back(std::move(defect));
    }
    return defects;
}

template <class K>
bool is_covariant(const PolyMap<K>& P, const Representation& rho) {
    for (const auto& d : equivariance_defect(P, rho))
        if (!d.is_zero_map()) return false;
    return true;
}

inline bool is_invariant(const Poly<Rational>& p, const LieAlgebra& g) {
    for (int j = 0; j < g.dim(); ++j)
        if (!directional_derivative(p, tau_field(g, g.basis_element(j))).is_zero_poly())
            return false;
    return true;
}

namespace detail {

// Sparse rows of the degree-d defect system. Unknowns are coefficients
// c_{m,k} of P = sum c_{m,k} x^m e_k, columns ordered by descending
// graded-lex monomial, then component; rows are the coefficients of all
// defect maps. Assembled directly from monomial calculus.
inline std::vector<SparseRow<Rational>> defect_system(const Representation& rho, int d,
                                                      const std::vector<Exp>& mons,
                                                      std::map<Exp, int, GradedLexLess>& mon_index) {
    const LieAlgebra& g = rho.algebra();
    int n = g.dim();
    int dv = rho.target_dim();
    mon_index.clear();
    for (std::size_t i = 0; i < mons.size(); ++i) mon_index[mons[i]] = static_cast<int>(i);
    std::size_t nrows = static_cast<std::size_t>(n) * mons.size() * dv;
    std::vector<SparseRow<Rational>> rows(nrows);
    auto row_id = [&](int j, int mu, int t) {
        return (static_cast<std::size_t>(j) * mons.size() + mu) * dv + t;
    };
    // by_target[j][p] lists (i, c) with [e_i, e_j] having coefficient c on e_p
    std::vector<std::vector<std::vector<std::pair<int, Rational>>>> by_target(
        n, std::vector<std::vector<std::pair<int, Rational>>>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (const auto& [p, c] : g.basis_bracket(i, j)) by_target[j][p].emplace_back(i, c);
    for (int mi = 0; mi < static_cast<int>(mons.size()); ++mi) {
        const Exp& m = mons[mi];
        for (int k = 0; k < dv; ++k) {
            std::int32_t col = static_cast<std::int32_t>(mi) * dv + k;
            for (int j = 0; j < n; ++j) {
                // tau(e_j) . x^m = sum_{p,i} m_p c_{ij}^p x^{m - d_p + d_i}
                for (int p = 0; p < n; ++p) {
                    if (m[p] == 0) continue;
                    for (const auto& [i, c] : by_target[j][p]) {
                        Exp mu = m;
                        mu[p] -= 1;
                        mu[i] += 1;
                        int mui = mon_index.at(mu);
                        rows[row_id(j, mui, k)].emplace_back(col,
                                                             Rational(static_cast<long>(m[p])) * c);
                    }
                }
                // pi(e_j) part
                const auto& pij = rho.matrix(j);
                for (int t = 0; t < dv; ++t) {
                    if (is_zero(pij(t, k))) continue;
                    rows[row_id(j, mi, t)].emplace_back(col, pij(t, k));
                }
            }
        }
    }
    (void)d;
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
        r = std::move(merged);
    }
    return rows;
}

inline PolyMap<Rational> map_from_coefficients(const SparseRow<Rational>& vec,
                                               const std::vector<Exp>& mons, int domain_dim,
                                               int target_dim) {
    PolyMap<Rational> P(domain_dim, target_dim);
    for (const auto& [col, val] : vec) {
        int mi = col / target_dim;
        int k = col % target_dim;
        P.component(k).add_term(mons[mi], val);
    }
    return P;
}

inline SparseRow<Rational> coefficients_of_map(const PolyMap<Rational>& P,
                                               const std::map<Exp, int, GradedLexLess>& mon_index,
                                               int target_dim) {
    SparseRow<Rational> row;
    for (int k = 0; k < target_dim; ++k)
        for (const auto& [e, c] : P.component(k).terms()) {
            auto it = mon_index.find(e);
            if (it == mon_index.end()) throw std::logic_error("coefficient outside degree block");
            row.emplace_back(static_cast<std::int32_t>(it->second) * target_dim + k, c);
        }
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return row;
}

}  // namespace detail

// Exact basis of the homogeneous degree-d covariants for rho, deterministic
// (canonical kernel of the defect system, leading coefficient normalized to 1).
inline std::vector<PolyMap<Rational>> covariant_space(const Representation& rho, int d) {
    if (d < 0) throw MalformedInput("covariant_space needs d >= 0");
    const LieAlgebra& g = rho.algebra();
    auto mons = monomials_of_degree(g.dim(), static_cast<std::uint32_t>(d));
    std::map<Exp, int, GradedLexLess> mon_index;
    auto rows = detail::defect_system(rho, d, mons, mon_index);
    SparseRref<Rational> rref(static_cast<std::int32_t>(mons.size() * rho.target_dim()));
    for (auto& r : rows) rref.add_row(std::move(r));
    std::vector<PolyMap<Rational>> basis;
    for (auto& vec : rref.kernel()) {
        auto P = detail::map_from_coefficients(vec, mons, g.dim(), rho.target_dim());
        Rational lead = P.leading_coefficient();
        basis.push_back(inverse(lead) * P);
    }
    return basis;
}

inline std::vector<Poly<Rational>> invariant_space(const AlgebraPtr& g, int d) {
    auto maps = covariant_space(trivial_rep(g), d);
    std::vector<Poly<Rational>> polys;
    polys.reserve(maps.size());
    for (auto& m : maps) polys.push_back(m.component(0));
    return polys;
}

struct InvariantGenerators {
    AlgebraPtr algebra;
    std::vector<Poly<Rational>> gens;       // p_1..p_l, homogeneous, ascending degree
    std::vector<PolyMap<Rational>> qmaps;   // q_i = kappa-gradient of p_i
    std::vector<int> degrees;

    int count() const { return static_cast<int>(gens.size()); }
};

namespace detail {

// All products of the given generators with prescribed weighted total degree
// (at least one factor).
inline std::vector<Poly<Rational>> generator_products(const std::vector<Poly<Rational>>& gens,
                                                      const std::vector<int>& degrees, int d) {
    std::vector<Poly<Rational>> out;
    if (gens.empty() || d <= 0) return out;
    std::vector<int> expo(gens.size(), 0);
    auto rec = [&](auto&& self, std::size_t pos, int rem) -> void {
        if (rem == 0) {
            bool nontrivial = false;
            for (int e : expo)
                if (e) nontrivial = true;
            if (!nontrivial) return;
            Poly<Rational> prod = Poly<Rational>::constant(gens[0].nvars(), Rational(1));
            for (std::size_t i = 0; i < gens.size(); ++i)
                for (int k = 0; k < expo[i]; ++k) prod = prod * gens[i];
            out.push_back(std::move(prod));
            return;
        }
        if (pos == gens.size()) return;
        for (int e = 0; e * degrees[pos] <= rem; ++e) {
            expo[pos] = e;
            self(self, pos + 1, rem - e * degrees[pos]);
        }
        expo[pos] = 0;
    };
    rec(rec, 0, d);
    return out;
}

}  // namespace detail

// Homogeneous invariants in all products of gens of weighted degree d.
inline std::vector<Poly<Rational>> invariant_products(const InvariantGenerators& gens, int d) {
    return detail::generator_products(gens.gens, gens.degrees, d);
}

// Greedy generator search: ascending degree, keep invariants independent of
// the subalgebra generated so far, stop at rank-many generators.
inline InvariantGenerators invariant_generators(const AlgebraPtr& g, int degree_bound) {
    InvariantGenerators result;
    result.algebra = g;
    int target = g->rank();
    for (int d = 1; d <= degree_bound && result.count() < target; ++d) {
        auto inv_d = invariant_space(g, d);
        if (inv_d.empty()) continue;
        auto mons = monomials_of_degree(g->dim(), static_cast<std::uint32_t>(d));
        std::map<Exp, int, GradedLexLess> mon_index;
        for (std::size_t i = 0; i < mons.size(); ++i) mon_index[mons[i]] = static_cast<int>(i);
        auto coeff_row = [&](const Poly<Rational>& p) {
            SparseRow<Rational> row;
            for (const auto& [e, c] : p.terms())
                row.emplace_back(mon_index.at(e), c);
            std::sort(row.begin(), row.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            return row;
        };
        SparseRref<Rational> span(static_cast<std::int32_t>(mons.size()));
        for (auto& prod : detail::generator_products(result.gens, result.degrees, d))
            span.add_row(coeff_row(prod));
        for (const auto& cand : inv_d) {
            if (result.count() == target) break;
            std::size_t before = span.rank();
            span.add_row(coeff_row(cand));
            if (span.rank() > before) {
                result.gens.push_back(cand);
                result.degrees.push_back(d);
            }
        }
    }
    if (result.count() < target)
        throw DegreeBoundExceeded("found " + std::to_string(result.count()) +
                                  " invariant generators up to degree " +
                                  std::to_string(degree_bound) + ", rank is " +
                                  std::to_string(target));
    for (const auto& p : result.gens) result.qmaps.push_back(kappa_gradient(*g, p));
    return result;
}

struct CovariantBasis {
    Representation rep;
    std::vector<PolyMap<Rational>> generators;
    std::vector<int> degrees;
    int degree_bound_used = 0;

    int count() const { return static_cast<int>(generators.size()); }
};

// Kostant module basis: ascending degree; within degree d, covariants
// independent modulo invariant multiples of the generators already selected.
// Exactly r = zero_weight_multiplicity generators exist; finding more is an
// implementation bug and finding fewer by the bound is reported.
inline CovariantBasis kostant_basis(const Representation& rho, int degree_bound) {
    const AlgebraPtr g = rho.algebra_ptr();
    int r = zero_weight_multiplicity(rho);
    CovariantBasis basis{rho, {}, {}, degree_bound};
    std::map<int, std::vector<Poly<Rational>>> inv_cache;
    auto invariants_of = [&](int e) -> const std::vector<Poly<Rational>>& {
        auto it = inv_cache.find(e);
        if (it == inv_cache.end()) it = inv_cache.emplace(e, invariant_space(g, e)).first;
        return it->second;
    };
    for (int d = 0; d <= degree_bound && basis.count() < r; ++d) {
        auto cov_d = covariant_space(rho, d);
        if (cov_d.empty()) continue;
        auto mons = monomials_of_degree(g->dim(), static_cast<std::uint32_t>(d));
        std::map<Exp, int, GradedLexLess> mon_index;
        for (std::size_t i = 0; i < mons.size(); ++i) mon_index[mons[i]] = static_cast<int>(i);
        SparseRref<Rational> span(static_cast<std::int32_t>(mons.size() * rho.target_dim()));
        for (std::size_t s = 0; s < basis.generators.size(); ++s) {
            int qdeg = d - basis.degrees[s];
            if (qdeg < 1) continue;
            for (const auto& q : invariants_of(qdeg))
                span.add_row(detail::coefficients_of_map(q * basis.generators[s], mon_index,
                                                         rho.target_dim()));
        }
        if (span.rank() == cov_d.size()) continue;  // no room for new generators at this degree
        for (const auto& cand : cov_d) {
            std::size_t before = span.rank();
            span.add_row(detail::coefficients_of_map(cand, mon_index, rho.target_dim()));
            if (span.rank() > before) {
                basis.generators.push_back(cand);
                basis.degrees.push_back(d);
                if (basis.count() > r)
                    throw RankMismatch("more than r = " + std::to_string(r) +
                                       " independent module generators found at degree " +
                                       std::to_string(d));
            }
        }
    }
    if (basis.count() < r)
        throw DegreeBoundExceeded("found " + std::to_string(basis.count()) +
                                  " module generators up to degree " +
                                  std::to_string(degree_bound) + ", K1 rank is " +
                                  std::to_string(r));
    return basis;
}

// The gradient covariants written as a module basis for the adjoint
// representation (section-3.2 route: q_i = grad p_i).
inline CovariantBasis basis_from_gradients(const InvariantGenerators& gens) {
    CovariantBasis basis{adjoint_rep(gens.algebra), gens.qmaps, {}, 0};
    for (int d : gens.degrees) {
        basis.degrees.push_back(d - 1);
        basis.degree_bound_used = std::max(basis.degree_bound_used, d - 1);
    }
    return basis;
}

// K2 at a regular point: the generator values must form a basis of the joint
// kernel V^{g^x} of the centralizer action (V^{G^x} = V^{g^x}, G^x connected).
inline bool verify_k2(const CovariantBasis& basis, const Element& x) {
    const LieAlgebra& g = basis.rep.algebra();
    if (!g.is_regular(x)) throw NotRegular("verify_k2 requires a regular element");
    auto centralizer = g.centralizer(x);
    int dv = basis.rep.target_dim();
    int r = basis.count();
    DenseMat<Rational> stacked(centralizer.size() * dv, dv);
    for (std::size_t z = 0; z < centralizer.size(); ++z) {
        auto m = basis.rep.matrix_of(centralizer[z]);
        for (int a = 0; a < dv; ++a)
            for (int b = 0; b < dv; ++b) stacked(z * dv + a, b) = m(a, b);
    }
    auto fixed = dense_kernel(stacked);
    if (static_cast<int>(fixed.size()) != r) return false;
    DenseMat<Rational> values(r, dv);
    for (int i = 0; i < r; ++i) {
        auto v = basis.generators[i].evaluate(x);
        for (int b = 0; b < dv; ++b) values(i, b) = v[b];
    }
    if (dense_rank(values) != static_cast<std::size_t>(r)) return false;
    DenseMat<Rational> joint(fixed.size() + r, dv);
    for (std::size_t i = 0; i < fixed.size(); ++i)
        for (int b = 0; b < dv; ++b) joint(i, b) = fixed[i][b];
    for (int i = 0; i < r; ++i)
        for (int b = 0; b < dv; ++b) joint(fixed.size() + i, b) = values(i, b);
    return dense_rank(joint) == static_cast<std::size_t>(r);
}

}  // namespace liecov
