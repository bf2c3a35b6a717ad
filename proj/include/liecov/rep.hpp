#pragma once

// Finite-dimensional matrix representations of the algebra: the adjoint
// representation, sl(2) irreducibles, symmetric powers of the defining
// representation, duals and direct sums. Group elements are never formed;
// equivariance is always checked infinitesimally (the adjoint group is
// connected).

#include <string>
#include <vector>

#include "liecov/errors.hpp"
#include "liecov/liecore.hpp"
#include "liecov/linalg.hpp"
#include "liecov/monomial.hpp"

namespace liecov {

class Representation {
  public:
    Representation(AlgebraPtr alg, std::string label, std::vector<DenseMat<Rational>> matrices)
        : alg_(std::move(alg)), label_(std::move(label)), matrices_(std::move(matrices)) {
        if (static_cast<int>(matrices_.size()) != alg_->dim())
            throw DimensionMismatch("representation needs one matrix per basis element");
        target_dim_ = matrices_.empty() ? 0 : static_cast<int>(matrices_[0].rows());
        for (const auto& m : matrices_)
            if (static_cast<int>(m.rows()) != target_dim_ ||
                static_cast<int>(m.cols()) != target_dim_)
                throw DimensionMismatch("representation matrices must be square of equal size");
        validate_homomorphism();
    }

    const LieAlgebra& algebra() const { return *alg_; }
    AlgebraPtr algebra_ptr() const { return alg_; }
    const std::string& label() const { return label_; }
    int target_dim() const { return target_dim_; }
    const DenseMat<Rational>& matrix(int i) const { return matrices_[i]; }

    DenseMat<Rational> matrix_of(const Element& xi) const {
        if (static_cast<int>(xi.size()) != alg_->dim())
            throw DimensionMismatch("matrix_of element size");
        DenseMat<Rational> m(target_dim_, target_dim_);
        for (int i = 0; i < alg_->dim(); ++i) {
            if (is_zero(xi[i])) continue;
            for (int a = 0; a < target_dim_; ++a)
                for (int b = 0; b < target_dim_; ++b) {
                    const Rational& v = matrices_[i](a, b);
                    if (!is_zero(v)) m(a, b) += xi[i] * v;
                }
        }
        return m;
    }

    std::vector<Rational> apply(const Element& xi, const std::vector<Rational>& v) const {
        if (static_cast<int>(v.size()) != target_dim_)
            throw DimensionMismatch("apply vector size");
        return matrix_of(xi).apply(v);
    }

    bool is_trivial() const {
        for (const auto& m : matrices_)
            if (!m.is_zero_matrix()) return false;
        return true;
    }

  private:
    void validate_homomorphism() const {
        int n = alg_->dim();
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                DenseMat<Rational> lhs(target_dim_, target_dim_);
                for (const auto& [k, c] : alg_->basis_bracket(i, j)) {
                    for (int a = 0; a < target_dim_; ++a)
                        for (int b = 0; b < target_dim_; ++b)
                            lhs(a, b) += c * matrices_[k](a, b);
                }
                DenseMat<Rational> rhs = matrices_[i] * matrices_[j] - matrices_[j] * matrices_[i];
                if (!(lhs == rhs))
                    throw MalformedInput("representation '" + label_ +
                                         "' is not a homomorphism on basis pair (" +
                                         std::to_string(i) + "," + std::to_string(j) + ")");
            }
    }

    AlgebraPtr alg_;
    std::string label_;
    int target_dim_;
    std::vector<DenseMat<Rational>> matrices_;
};

inline Representation adjoint_rep(const AlgebraPtr& g) {
    std::vector<DenseMat<Rational>> mats;
    mats.reserve(g->dim());
    for (int i = 0; i < g->dim(); ++i) mats.push_back(g->ad_matrix(g->basis_element(i)));
    return Representation(g, "adjoint", std::move(mats));
}

inline Representation trivial_rep(const AlgebraPtr& g) {
    std::vector<DenseMat<Rational>> mats(g->dim(), DenseMat<Rational>(1, 1));
    return Representation(g, "trivial", std::move(mats));
}

// Highest weight 2m irreducible of sl(2), dim 2m+1, in the weight basis with
// pi(h) = diag(2m, 2m-2, ..., -2m), pi(f) v_k = v_{k+1}, pi(e) v_k = k(2m-k+1) v_{k-1}.
inline Representation irreducible_sl2(const AlgebraPtr& sl2, int m) {
    if (sl2->dim() != 3 || sl2->rank() != 1)
        throw MalformedInput("irreducible_sl2 expects the sl2 catalog algebra");
    if (m < 0) throw MalformedInput("irreducible_sl2 needs m >= 0");
    int n = 2 * m + 1;
    DenseMat<Rational> H(n, n), E(n, n), F(n, n);
    for (int k = 0; k < n; ++k) H(k, k) = Rational(2 * m - 2 * k);
    for (int k = 1; k < n; ++k) E(k - 1, k) = Rational(static_cast<long>(k) * (2 * m - k + 1));
    for (int k = 0; k + 1 < n; ++k) F(k + 1, k) = 1;
    // catalog sl2 basis order is (h, e, f)
    return Representation(sl2, "m" + std::to_string(m), {H, E, F});
}

inline Representation dual_rep(const Representation& rho) {
    std::vector<DenseMat<Rational>> mats;
    mats.reserve(rho.algebra().dim());
    for (int i = 0; i < rho.algebra().dim(); ++i) {
        DenseMat<Rational> t = rho.matrix(i).transpose();
        mats.push_back(scalar_times(Rational(-1), t));
    }
    return Representation(rho.algebra_ptr(), rho.label() + "*", std::move(mats));
}

inline Representation direct_sum(const Representation& a, const Representation& b) {
    if (&a.algebra() != &b.algebra() && a.algebra().name() != b.algebra().name())
        throw DimensionMismatch("direct_sum needs representations of one algebra");
    int n = a.algebra().dim();
    int da = a.target_dim(), db = b.target_dim();
    std::vector<DenseMat<Rational>> mats;
    mats.reserve(n);
    for (int i = 0; i < n; ++i) {
        DenseMat<Rational> m(da + db, da + db);
        for (int p = 0; p < da; ++p)
            for (int q = 0; q < da; ++q) m(p, q) = a.matrix(i)(p, q);
        for (int p = 0; p < db; ++p)
            for (int q = 0; q < db; ++q) m(da + p, da + q) = b.matrix(i)(p, q);
        mats.push_back(std::move(m));
    }
    return Representation(a.algebra_ptr(), a.label() + "+" + b.label(), std::move(mats));
}

// Sym^k of the defining representation, acting by derivations on degree-k
// monomials in the defining space coordinates.
inline Representation sym_power_rep(const AlgebraPtr& g, int k) {
    const auto& def = g->defining_matrices();
    if (def.empty()) throw MalformedInput("sym_power_rep needs a defining representation");
    int n = static_cast<int>(def[0].rows());
    auto mons = monomials_of_degree(n, static_cast<std::uint32_t>(k));
    std::map<Exp, int, GradedLexLess> index;
    for (std::size_t i = 0; i < mons.size(); ++i) index[mons[i]] = static_cast<int>(i);
    int dim = static_cast<int>(mons.size());
    std::vector<DenseMat<Rational>> mats;
    mats.reserve(g->dim());
    for (int e = 0; e < g->dim(); ++e) {
        DenseMat<Rational> M(dim, dim);
        for (int col = 0; col < dim; ++col) {
            const Exp& alpha = mons[col];
            for (int p = 0; p < n; ++p) {
                if (alpha[p] == 0) continue;
                for (int q = 0; q < n; ++q) {
                    const Rational& x = def[e](q, p);
                    if (is_zero(x)) continue;
                    Exp beta = alpha;
                    beta[p] -= 1;
                    beta[q] += 1;
                    M(index.at(beta), col) += Rational(static_cast<long>(alpha[p])) * x;
                }
            }
        }
        mats.push_back(std::move(M));
    }
    return Representation(g, "sym" + std::to_string(k), std::move(mats));
}

// r = dim of the joint kernel of the Cartan action.
inline int zero_weight_multiplicity(const Representation& rho) {
    const auto& cartan = rho.algebra().cartan_indices();
    int d = rho.target_dim();
    DenseMat<Rational> stacked(cartan.size() * d, d);
    for (std::size_t h = 0; h < cartan.size(); ++h) {
        const auto& m = rho.matrix(cartan[h]);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) stacked(h * d + a, b) = m(a, b);
    }
    return static_cast<int>(dense_kernel(stacked).size());
}

// Weight of each basis vector, available when all Cartan matrices are
// diagonal in the chosen basis (true for every split catalog entry).
inline std::optional<std::vector<std::vector<Rational>>> weights(const Representation& rho) {
    const auto& cartan = rho.algebra().cartan_indices();
    int d = rho.target_dim();
    for (int h : cartan) {
        const auto& m = rho.matrix(h);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                if (a != b && !is_zero(m(a, b))) return std::nullopt;
    }
    std::vector<std::vector<Rational>> w(d);
    for (int a = 0; a < d; ++a)
        for (int h : cartan) w[a].push_back(rho.matrix(h)(a, a));
    return w;
}

inline Representation rep_by_name(const AlgebraPtr& g, const std::string& name) {
    if (name == "adjoint") return adjoint_rep(g);
    if (name == "trivial") return trivial_rep(g);
    if (name.size() == 2 && name[0] == 'm' && g->name() == "sl2")
        return irreducible_sl2(g, name[1] - '0');
    if (name.rfind("sym", 0) == 0 && name.size() == 4)
        return sym_power_rep(g, name[3] - '0');
    throw MalformedInput("unknown representation '" + name + "' for algebra " + g->name());
}

// File format: first line "target_dim", then one row-major matrix block of
// target_dim lines per basis element, entries as exact rationals.
inline Representation load_representation(std::istream& in, const AlgebraPtr& g,
                                          const std::string& label = "file") {
    int d = -1;
    if (!(in >> d) || d <= 0) throw MalformedInput("representation file: bad target dimension");
    std::vector<DenseMat<Rational>> mats;
    mats.reserve(g->dim());
    for (int i = 0; i < g->dim(); ++i) {
        DenseMat<Rational> m(d, d);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                std::string tok;
                if (!(in >> tok))
                    throw MalformedInput("representation file: truncated matrix block");
                m(a, b) = parse_rational(tok);
            }
        mats.push_back(std::move(m));
    }
    return Representation(g, label, std::move(mats));
}

}  // namespace liecov
