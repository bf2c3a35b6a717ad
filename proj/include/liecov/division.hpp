#pragma once

// Decomposition and division engines.
//
//  * kostant_decompose: the unique P = Q_1 P_1 + ... + Q_r P_r with invariant
//    coefficients, solved exactly degree by degree.
//  * tangency_defect / dixmier_divide: delta(X) = (kappa(q_i(x), X(x)))_i and
//    the polynomial division X = [. , Y(.)] for fields tangent to orbits.
//  * pointwise_decompose: the sampled-point numeric realization of the
//    decomposition of covariant functions, with the pointwise-fixedness
//    precondition pi(q_i(x)) f(x) = 0 validated per sample.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "liecov/covariants.hpp"
#include "liecov/errors.hpp"
#include "liecov/util.hpp"

namespace liecov {

struct Decomposition {
    std::vector<Poly<Rational>> coefficients;  // one invariant Q_i per basis generator
};

namespace detail {

// Full coefficient-space solve of sum Q_i P_i = target at one degree, used
// when the generator-product fast path cannot express the coefficients.
inline std::optional<std::vector<Poly<Rational>>> decompose_block_full(
    const PolyMap<Rational>& target_d, int d, const CovariantBasis& basis) {
    int n = target_d.domain_dim();
    int dv = target_d.target_dim();
    // columns: per generator i, monomials of degree d - deg(P_i)
    std::vector<std::vector<Exp>> qmons(basis.count());
    std::vector<int> col_offset(basis.count() + 1, 0);
    for (int i = 0; i < basis.count(); ++i) {
        int qd = d - basis.degrees[i];
        if (qd >= 0) qmons[i] = monomials_of_degree(n, static_cast<std::uint32_t>(qd));
        col_offset[i + 1] = col_offset[i] + static_cast<int>(qmons[i].size());
    }
    auto rmons = monomials_of_degree(n, static_cast<std::uint32_t>(d));
    std::map<Exp, int, GradedLexLess> rindex;
    for (std::size_t i = 0; i < rmons.size(); ++i) rindex[rmons[i]] = static_cast<int>(i);
    std::int32_t ncols = col_offset[basis.count()];
    std::vector<SparseRow<Rational>> rows(rmons.size() * dv);
    for (int i = 0; i < basis.count(); ++i)
        for (std::size_t mi = 0; mi < qmons[i].size(); ++mi) {
            std::int32_t col = col_offset[i] + static_cast<std::int32_t>(mi);
            for (int k = 0; k < dv; ++k)
                for (const auto& [e, c] : basis.generators[i].component(k).terms()) {
                    Exp prod = exp_add(qmons[i][mi], e);
                    rows[rindex.at(prod) * dv + k].emplace_back(col, c);
                }
        }
    SparseRref<Rational> rref(ncols + 1, ncols);
    for (std::size_t row = 0; row < rows.size(); ++row) {
        auto r = rows[row];
        std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        SparseRow<Rational> merged;
        for (auto& [c, v] : r) {
            if (!merged.empty() && merged.back().first == c) merged.back().second += v;
            else
                merged.emplace_back(c, v);
        }
        int k = static_cast<int>(row) % dv;
        int mi = static_cast<int>(row) / dv;
        const Rational* rhs = target_d.component(k).coefficient(rmons[mi]);
        if (rhs && !is_zero(*rhs)) merged.emplace_back(ncols, *rhs);
        merged.erase(std::remove_if(merged.begin(), merged.end(),
                                    [](const auto& e) { return is_zero(e.second); }),
                     merged.end());
        rref.add_row(std::move(merged));
    }
    auto sol = rref.solution(0);
    if (!sol) return std::nullopt;
    std::vector<Poly<Rational>> qs(basis.count(), Poly<Rational>(n));
    for (int i = 0; i < basis.count(); ++i)
        for (std::size_t mi = 0; mi < qmons[i].size(); ++mi) {
            const Rational& v = (*sol)[col_offset[i] + mi];
            if (!is_zero(v)) qs[i].add_term(qmons[i][mi], v);
        }
    return qs;
}

}  // namespace detail

// Unique Kostant decomposition of a covariant map over the given module
// basis. Fast path expresses the invariant coefficients over products of the
// invariant generators; the full graded solve is the fallback. The
// reconstruction is re-checked exactly before returning.
inline Decomposition kostant_decompose(const PolyMap<Rational>& P, const CovariantBasis& basis,
                                       const InvariantGenerators& gens) {
    if (!is_covariant(P, basis.rep))
        throw NotCovariant("kostant_decompose input has a nonzero equivariance defect");
    int n = P.domain_dim();
    std::vector<Poly<Rational>> qs(basis.count(), Poly<Rational>(n));
    for (int d = 0; d <= P.degree(); ++d) {
        PolyMap<Rational> block = P.homogeneous_component(static_cast<std::uint32_t>(d));
        if (block.is_zero_map()) continue;
        // candidates: (generator i) x (invariant products of the right degree)
        std::vector<PolyMap<Rational>> cands;
        std::vector<std::pair<int, Poly<Rational>>> cand_meta;
        for (int i = 0; i < basis.count(); ++i) {
            int qd = d - basis.degrees[i];
            if (qd < 0) continue;
            if (qd == 0) {
                cands.push_back(basis.generators[i]);
                cand_meta.emplace_back(i, Poly<Rational>::constant(n, Rational(1)));
                continue;
            }
            for (auto& prod : invariant_products(gens, qd)) {
                cands.push_back(prod * basis.generators[i]);
                cand_meta.emplace_back(i, prod);
            }
        }
        auto combo = express_in_span(block, cands);
        if (combo) {
            for (std::size_t c = 0; c < cands.size(); ++c) {
                if (is_zero((*combo)[c])) continue;
                qs[cand_meta[c].first] += (*combo)[c] * cand_meta[c].second;
            }
            continue;
        }
        auto full = detail::decompose_block_full(block, d, basis);
        if (!full)
            throw NotInModule("covariant map is not expressible over the module basis at degree " +
                              std::to_string(d) + " (K1 forbids this for a valid basis)");
        for (int i = 0; i < basis.count(); ++i) qs[i] += (*full)[i];
    }
    PolyMap<Rational> recon(n, basis.rep.target_dim());
    for (int i = 0; i < basis.count(); ++i) recon += qs[i] * basis.generators[i];
    if (!(recon == P)) throw NotInModule("decomposition reconstruction mismatch");
    return Decomposition{std::move(qs)};
}

// kappa(A(x), B(x)) as a polynomial.
inline Poly<Rational> kappa_pairing_poly(const LieAlgebra& g, const PolyMap<Rational>& A,
                                         const PolyMap<Rational>& B) {
    if (A.target_dim() != g.dim() || B.target_dim() != g.dim())
        throw DimensionMismatch("kappa_pairing_poly targets");
    Poly<Rational> s(A.domain_dim());
    for (int a = 0; a < g.dim(); ++a) {
        if (A.component(a).is_zero_poly()) continue;
        for (int b = 0; b < g.dim(); ++b) {
            const Rational& k = g.gram()(a, b);
            if (is_zero(k) || B.component(b).is_zero_poly()) continue;
            s += k * (A.component(a) * B.component(b));
        }
    }
    return s;
}

// delta(X) = (kappa(q_1(x), X(x)), ..., kappa(q_l(x), X(x))). All components
// vanish iff X(x) lies in [x, g] at every regular x.
inline std::vector<Poly<Rational>> tangency_defect(const PolyMap<Rational>& X,
                                                   const InvariantGenerators& gens) {
    const LieAlgebra& g = *gens.algebra;
    if (X.target_dim() != g.dim() || X.domain_dim() != g.dim())
        throw DimensionMismatch("tangency_defect expects a field g -> g");
    std::vector<Poly<Rational>> delta;
    delta.reserve(gens.qmaps.size());
    for (const auto& q : gens.qmaps) delta.push_back(kappa_pairing_poly(g, q, X));
    return delta;
}

// Division of tangent fields: Y with [x, Y(x)] = X(x), exactly. The bracket
// with x raises degree by exactly one, so the degree-(e) component of X is
// divided by a homogeneous Y of degree e-1; no other degrees can contribute.
// Among solutions the echelon representative with free variables zero is
// returned. Inputs are batched so one elimination per degree serves them all.
inline std::vector<PolyMap<Rational>> dixmier_divide_batch(const std::vector<PolyMap<Rational>>& Xs,
                                                           const InvariantGenerators& gens,
                                                           int degree_bound) {
    const LieAlgebra& g = *gens.algebra;
    int n = g.dim();
    for (const auto& X : Xs) {
        auto delta = tangency_defect(X, gens);
        for (std::size_t i = 0; i < delta.size(); ++i)
            if (!delta[i].is_zero_poly())
                throw NotTangent("field is not tangent to adjoint orbits: delta component " +
                                     std::to_string(i + 1) + " is nonzero",
                                 delta[i].to_text());
    }
    std::vector<PolyMap<Rational>> Ys(Xs.size(), PolyMap<Rational>(n, n));
    int max_deg = -1;
    for (const auto& X : Xs) {
        if (!X.homogeneous_component(0).is_zero_map())
            throw DegreeBoundExceeded("a constant component is never a bracket [x, Y(x)]");
        max_deg = std::max(max_deg, X.degree());
    }
    for (int e = 1; e <= max_deg; ++e) {
        std::vector<std::pair<std::size_t, PolyMap<Rational>>> blocks;
        for (std::size_t s = 0; s < Xs.size(); ++s) {
            auto b = Xs[s].homogeneous_component(static_cast<std::uint32_t>(e));
            if (!b.is_zero_map()) blocks.emplace_back(s, std::move(b));
        }
        if (blocks.empty()) continue;
        if (e - 1 > degree_bound)
            throw DegreeBoundExceeded("division needs Y of degree " + std::to_string(e - 1) +
                                      ", bound is " + std::to_string(degree_bound));
        auto ymons = monomials_of_degree(n, static_cast<std::uint32_t>(e - 1));
        auto xmons = monomials_of_degree(n, static_cast<std::uint32_t>(e));
        std::map<Exp, int, GradedLexLess> xindex;
        for (std::size_t i = 0; i < xmons.size(); ++i) xindex[xmons[i]] = static_cast<int>(i);
        std::int32_t ncols = static_cast<std::int32_t>(ymons.size()) * n;
        std::vector<SparseRow<Rational>> rows(xmons.size() * n);
        for (std::size_t mi = 0; mi < ymons.size(); ++mi)
            for (int j = 0; j < n; ++j) {
                std::int32_t col = static_cast<std::int32_t>(mi) * n + j;
                for (int i = 0; i < n; ++i)
                    for (const auto& [k, c] : g.basis_bracket(i, j)) {
                        Exp nu = ymons[mi];
                        nu[i] += 1;
                        rows[xindex.at(nu) * static_cast<std::size_t>(n) + k].emplace_back(col, c);
                    }
            }
        SparseRref<Rational> rref(ncols + static_cast<std::int32_t>(blocks.size()), ncols);
        for (std::size_t row = 0; row < rows.size(); ++row) {
            auto r = rows[row];
            std::sort(r.begin(), r.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            SparseRow<Rational> merged;
            for (auto& [c, v] : r) {
                if (!merged.empty() && merged.back().first == c) merged.back().second += v;
                else
                    merged.emplace_back(c, v);
            }
            int k = static_cast<int>(row) % n;
            int mi = static_cast<int>(row) / n;
            for (std::size_t b = 0; b < blocks.size(); ++b) {
                const Rational* rhs = blocks[b].second.component(k).coefficient(xmons[mi]);
                if (rhs && !is_zero(*rhs))
                    merged.emplace_back(ncols + static_cast<std::int32_t>(b), *rhs);
            }
            rref.add_row(std::move(merged));
        }
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            auto sol = rref.solution(static_cast<std::int32_t>(b));
            if (!sol)
                throw DegreeBoundExceeded(
                    "tangent field admits no polynomial divisor at forced degree " +
                    std::to_string(e - 1));
            auto& Y = Ys[blocks[b].first];
            for (std::size_t mi = 0; mi < ymons.size(); ++mi)
                for (int j = 0; j < n; ++j) {
                    const Rational& v = (*sol)[mi * static_cast<std::size_t>(n) + j];
                    if (!is_zero(v)) Y.component(j).add_term(ymons[mi], v);
                }
        }
    }
    // exact verification of every returned divisor
    PolyMap<Rational> id = PolyMap<Rational>::identity(n);
    for (std::size_t s = 0; s < Xs.size(); ++s)
        if (!(bracket_field(g, id, Ys[s]) == Xs[s]))
            throw std::logic_error("division verification failed");
    return Ys;
}

inline PolyMap<Rational> dixmier_divide(const PolyMap<Rational>& X, const InvariantGenerators& gens,
                                        int degree_bound) {
    return dixmier_divide_batch({X}, gens, degree_bound)[0];
}

struct PointwiseDecomposition {
    std::vector<Element> points;
    std::vector<std::vector<double>> coeff_values;  // per point, r values
    std::vector<double> residuals;                  // per point, euclidean residual
    bool residuals_ok = true;  // every residual <= residual_tol * (1 + |sample|)
};

namespace detail {

// Least squares via Householder QR; returns x minimizing |Ax - b| and the
// residual norm. A is m x r with r <= m and full column rank (K2).
inline std::pair<std::vector<double>, double> lsq_solve(std::vector<std::vector<double>> A,
                                                        std::vector<double> b) {
    std::size_t m = A.size();
    std::size_t r = m ? A[0].size() : 0;
    if (r > m) throw DimensionMismatch("least squares needs at least as many rows as unknowns");
    for (std::size_t k = 0; k < r; ++k) {
        double norm = 0;
        for (std::size_t i = k; i < m; ++i) norm += A[i][k] * A[i][k];
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        if (A[k][k] > 0) norm = -norm;
        std::vector<double> v(m, 0.0);
        for (std::size_t i = k; i < m; ++i) v[i] = A[i][k];
        v[k] -= norm;
        double vnorm2 = 0;
        for (std::size_t i = k; i < m; ++i) vnorm2 += v[i] * v[i];
        if (vnorm2 == 0.0) continue;
        for (std::size_t j = k; j < r; ++j) {
            double dot = 0;
            for (std::size_t i = k; i < m; ++i) dot += v[i] * A[i][j];
            double f = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < m; ++i) A[i][j] -= f * v[i];
        }
        double dot = 0;
        for (std::size_t i = k; i < m; ++i) dot += v[i] * b[i];
        double f = 2.0 * dot / vnorm2;
        for (std::size_t i = k; i < m; ++i) b[i] -= f * v[i];
    }
    std::vector<double> x(r, 0.0);
    for (std::size_t k = r; k-- > 0;) {
        double s = b[k];
        for (std::size_t j = k + 1; j < r; ++j) s -= A[k][j] * x[j];
        x[k] = (A[k][k] != 0.0) ? s / A[k][k] : 0.0;
    }
    double res2 = 0;
    for (std::size_t i = r; i < m; ++i) res2 += b[i] * b[i];
    return {x, std::sqrt(res2)};
}

}  // namespace detail

// Numeric decomposition of sampled covariant-function values at regular
// points. Each sample must satisfy pi(q_i(x)) v = 0 within input_tol (the
// pointwise-fixedness criterion); by K2 the least-squares system has a unique
// solution over span{P_i(x)}.
inline PointwiseDecomposition pointwise_decompose(
    const std::vector<std::pair<Element, std::vector<double>>>& samples,
    const CovariantBasis& basis, const InvariantGenerators& gens, double input_tol = 1e-6,
    double residual_tol = 1e-9) {
    const LieAlgebra& g = basis.rep.algebra();
    int dv = basis.rep.target_dim();
    PointwiseDecomposition out;
    out.points.resize(samples.size());
    out.coeff_values.resize(samples.size());
    out.residuals.resize(samples.size());
    std::vector<std::string> failures(samples.size());
    parallel_for(samples.size(), [&](std::size_t s) {
        const auto& [x, v] = samples[s];
        if (static_cast<int>(v.size()) != dv) {
            failures[s] = "sample vector has wrong dimension";
            return;
        }
        if (!g.is_regular(x)) {
            failures[s] = "sample point " + std::to_string(s) + " is not regular";
            return;
        }
        double vnorm = 0;
        for (double c : v) vnorm += c * c;
        vnorm = std::sqrt(vnorm);
        for (std::size_t i = 0; i < gens.qmaps.size(); ++i) {
            Element qx = gens.qmaps[i].evaluate(x);
            auto pm = basis.rep.matrix_of(qx);
            double defect = 0;
            for (int a = 0; a < dv; ++a) {
                double acc = 0;
                for (int b = 0; b < dv; ++b) acc += to_double(pm(a, b)) * v[b];
                defect += acc * acc;
            }
            if (std::sqrt(defect) > input_tol * (vnorm > 0 ? vnorm : 1.0)) {
                failures[s] = "sample " + std::to_string(s) +
                              " violates the pointwise-fixedness criterion pi(q_" +
                              std::to_string(i + 1) + "(x)) v = 0";
                return;
            }
        }
        std::vector<std::vector<double>> A(dv, std::vector<double>(basis.count(), 0.0));
        for (int i = 0; i < basis.count(); ++i) {
            auto pv = basis.generators[i].evaluate(x);
            for (int a = 0; a < dv; ++a) A[a][i] = to_double(pv[a]);
        }
        auto [coeffs, residual] = detail::lsq_solve(std::move(A), v);
        out.points[s] = x;
        out.coeff_values[s] = std::move(coeffs);
        out.residuals[s] = residual;
    });
    for (std::size_t s = 0; s < samples.size(); ++s) {
        if (failures[s].empty()) continue;
        if (failures[s].find("not regular") != std::string::npos) throw NotRegular(failures[s]);
        if (failures[s].find("wrong dimension") != std::string::npos)
            throw DimensionMismatch(failures[s]);
        throw NotPointwiseFixed(failures[s]);
    }
    for (std::size_t s = 0; s < samples.size(); ++s) {
        double vnorm = 0;
        for (double c : samples[s].second) vnorm += c * c;
        if (out.residuals[s] > residual_tol * (1.0 + std::sqrt(vnorm))) out.residuals_ok = false;
    }
    return out;
}

}  // namespace liecov
