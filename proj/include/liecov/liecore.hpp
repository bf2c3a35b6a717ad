#pragma once

// Split reductive Lie algebras over Q, given by structure constants.
//
// The bilinear form kappa is always the trace form of the adjoint
// representation; algebras on which it degenerates (nontrivial center) are
// rejected at construction. The Cartan subalgebra is part of the input, not
// searched for.

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "liecov/errors.hpp"
#include "liecov/linalg.hpp"
#include "liecov/rng.hpp"
#include "liecov/scalar.hpp"

namespace liecov {

using Element = std::vector<Rational>;

class LieAlgebra {
  public:
    // structure[i][j] lists (k, c) with [e_i, e_j] = sum c * e_k.
    using BracketTable = std::vector<std::vector<std::vector<std::pair<int, Rational>>>>;

    LieAlgebra(std::string name, int dim, std::vector<int> cartan, BracketTable structure,
               std::vector<DenseMat<Rational>> defining = {})
        : name_(std::move(name)),
          dim_(dim),
          cartan_(std::move(cartan)),
          structure_(std::move(structure)),
          defining_(std::move(defining)) {
        validate_shape();
        build_gram();
        validate_axioms();
    }

    const std::string& name() const { return name_; }
    int dim() const { return dim_; }
    int rank() const { return static_cast<int>(cartan_.size()); }
    const std::vector<int>& cartan_indices() const { return cartan_; }
    const std::vector<DenseMat<Rational>>& defining_matrices() const { return defining_; }
    const DenseMat<Rational>& gram() const { return gram_; }
    const DenseMat<Rational>& gram_inverse() const { return gram_inv_; }

    const std::vector<std::pair<int, Rational>>& basis_bracket(int i, int j) const {
        return structure_[i][j];
    }

    Element basis_element(int i) const {
        Element x(dim_, Rational(0));
        x[i] = 1;
        return x;
    }

    Element zero() const { return Element(dim_, Rational(0)); }

    Element bracket(const Element& x, const Element& y) const {
        check_dim(x);
        check_dim(y);
        Element z(dim_, Rational(0));
        for (int i = 0; i < dim_; ++i) {
            if (is_zero(x[i])) continue;
            for (int j = 0; j < dim_; ++j) {
                if (is_zero(y[j])) continue;
                Rational f = x[i] * y[j];
                for (const auto& [k, c] : structure_[i][j]) z[k] += f * c;
            }
        }
        return z;
    }

    Rational kappa(const Element& x, const Element& y) const {
        check_dim(x);
        check_dim(y);
        Rational s(0);
        for (int i = 0; i < dim_; ++i) {
            if (is_zero(x[i])) continue;
            for (int j = 0; j < dim_; ++j) {
                if (is_zero(y[j])) continue;
                s += x[i] * gram_(i, j) * y[j];
            }
        }
        return s;
    }

    DenseMat<Rational> ad_matrix(const Element& x) const {
        check_dim(x);
        DenseMat<Rational> m(dim_, dim_);
        for (int i = 0; i < dim_; ++i) {
            if (is_zero(x[i])) continue;
            for (int j = 0; j < dim_; ++j)
                for (const auto& [k, c] : structure_[i][j]) m(k, j) += x[i] * c;
        }
        return m;
    }

    std::vector<Element> centralizer(const Element& x) const {
        auto kernel = dense_kernel(ad_matrix(x));
        return std::vector<Element>(kernel.begin(), kernel.end());
    }

    bool is_regular(const Element& x) const {
        return static_cast<int>(centralizer(x).size()) == rank();
    }

    // Integer coordinates in [-10, 10]; the regular set is Zariski-dense, so
    // the retry budget is only ever hit on a broken algebra definition.
    Element random_regular(std::uint64_t seed) const {
        Rng rng(seed);
        for (int attempt = 0; attempt < 64; ++attempt) {
            Element x(dim_);
            bool nonzero = false;
            for (auto& c : x) {
                c = rng.rational(10);
                if (!is_zero(c)) nonzero = true;
            }
            if (nonzero && is_regular(x)) return x;
        }
        throw SamplingExhausted("no regular element found for algebra " + name_);
    }

  private:
    void check_dim(const Element& x) const {
        if (static_cast<int>(x.size()) != dim_)
            throw DimensionMismatch("element has " + std::to_string(x.size()) +
                                    " coordinates, algebra " + name_ + " has dimension " +
                                    std::to_string(dim_));
    }

    void validate_shape() {
        if (dim_ <= 0) throw MalformedInput("algebra dimension must be positive");
        if (cartan_.empty()) throw MalformedInput("empty Cartan subalgebra");
        for (int i : cartan_)
            if (i < 0 || i >= dim_) throw MalformedInput("cartan index out of range");
        if (static_cast<int>(structure_.size()) != dim_)
            throw MalformedInput("structure constant table has wrong shape");
        for (const auto& row : structure_)
            if (static_cast<int>(row.size()) != dim_)
                throw MalformedInput("structure constant table has wrong shape");
    }

    void build_gram() {
        std::vector<DenseMat<Rational>> ad(dim_);
        for (int i = 0; i < dim_; ++i) ad[i] = ad_matrix(basis_element(i));
        gram_ = DenseMat<Rational>(dim_, dim_);
        for (int i = 0; i < dim_; ++i)
            for (int j = i; j < dim_; ++j) {
                Rational t(0);
                for (int a = 0; a < dim_; ++a)
                    for (int b = 0; b < dim_; ++b) t += ad[i](a, b) * ad[j](b, a);
                gram_(i, j) = t;
                gram_(j, i) = t;
            }
        auto inv = dense_inverse(gram_);
        if (!inv)
            throw MalformedInput("trace form of " + name_ +
                                 " is degenerate; algebras with nontrivial center are rejected");
        gram_inv_ = *inv;
    }

    void validate_axioms() const {
        // antisymmetry
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j <= i; ++j) {
                Element a = bracket(basis_element(i), basis_element(j));
                Element b = bracket(basis_element(j), basis_element(i));
                for (int k = 0; k < dim_; ++k)
                    if (a[k] + b[k] != 0)
                        throw MalformedInput("structure constants of " + name_ +
                                             " are not antisymmetric");
            }
        // Jacobi on all basis triples
        for (int i = 0; i < dim_; ++i)
            for (int j = i + 1; j < dim_; ++j)
                for (int k = j + 1; k < dim_; ++k) {
                    Element ei = basis_element(i), ej = basis_element(j), ek = basis_element(k);
                    Element s = bracket(bracket(ei, ej), ek);
                    Element t = bracket(bracket(ej, ek), ei);
                    Element u = bracket(bracket(ek, ei), ej);
                    for (int c = 0; c < dim_; ++c)
                        if (s[c] + t[c] + u[c] != 0)
                            throw MalformedInput("Jacobi identity fails for " + name_);
                }
        // reductive trace identity: tr ad x = 0 on the basis
        for (int i = 0; i < dim_; ++i) {
            auto m = ad_matrix(basis_element(i));
            Rational tr(0);
            for (int a = 0; a < dim_; ++a) tr += m(a, a);
            if (!is_zero(tr)) throw MalformedInput("tr ad is nonzero on " + name_);
        }
        // Cartan subalgebra must be abelian
        for (int a : cartan_)
            for (int b : cartan_) {
                Element z = bracket(basis_element(a), basis_element(b));
                for (int c = 0; c < dim_; ++c)
                    if (!is_zero(z[c]))
                        throw MalformedInput("cartan indices of " + name_ + " do not commute");
            }
        // rank probe: generic centralizer dimension must equal the given rank
        int min_dim = dim_;
        for (std::uint64_t seed = 1; seed <= 25; ++seed) {
            Rng rng(seed);
            Element x(dim_);
            for (auto& c : x) c = rng.rational(10);
            auto cen = centralizer(x);
            min_dim = std::min<int>(min_dim, static_cast<int>(cen.size()));
        }
        if (min_dim != rank())
            throw MalformedInput("declared rank of " + name_ + " is " + std::to_string(rank()) +
                                 " but generic centralizers have dimension " +
                                 std::to_string(min_dim));
    }

    std::string name_;
    int dim_;
    std::vector<int> cartan_;
    BracketTable structure_;
    std::vector<DenseMat<Rational>> defining_;
    DenseMat<Rational> gram_, gram_inv_;
};

using AlgebraPtr = std::shared_ptr<const LieAlgebra>;

namespace detail {

// Coordinates of a traceless n x n matrix in the basis
// H_0..H_{n-2}, then E_{ij} (i != j) in row-major order.
inline Element sl_coordinates(int n, const DenseMat<Rational>& m) {
    int dim = n * n - 1;
    Element coords(dim, Rational(0));
    Rational partial(0);
    for (int i = 0; i < n - 1; ++i) {
        partial += m(i, i);
        coords[i] = partial;
    }
    int idx = n - 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            coords[idx++] = m(i, j);
        }
    return coords;
}

inline LieAlgebra::BracketTable table_from_matrices(const std::vector<DenseMat<Rational>>& basis,
                                                    Element (*coords)(int, const DenseMat<Rational>&),
                                                    int n) {
    int dim = static_cast<int>(basis.size());
    LieAlgebra::BracketTable t(dim, std::vector<std::vector<std::pair<int, Rational>>>(dim));
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            DenseMat<Rational> comm = basis[i] * basis[j] - basis[j] * basis[i];
            Element c = coords(n, comm);
            for (int k = 0; k < dim; ++k)
                if (!is_zero(c[k])) t[i][j].emplace_back(k, c[k]);
        }
    return t;
}

}  // namespace detail

// sl(n): basis H_0..H_{n-2} (H_i = E_ii - E_{i+1,i+1}), then E_{ij} row-major.
inline AlgebraPtr make_sl(int n) {
    if (n < 2) throw MalformedInput("sl(n) needs n >= 2");
    std::vector<DenseMat<Rational>> basis;
    for (int i = 0; i < n - 1; ++i) {
        DenseMat<Rational> h(n, n);
        h(i, i) = 1;
        h(i + 1, i + 1) = -1;
        basis.push_back(h);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            DenseMat<Rational> e(n, n);
            e(i, j) = 1;
            basis.push_back(e);
        }
    auto table = detail::table_from_matrices(basis, detail::sl_coordinates, n);
    std::vector<int> cartan(n - 1);
    for (int i = 0; i < n - 1; ++i) cartan[i] = i;
    return std::make_shared<LieAlgebra>("sl" + std::to_string(n), n * n - 1, cartan,
                                        std::move(table), std::move(basis));
}

// so(3) with [L_i, L_j] = eps_ijk L_k. Its real form is compact, not split;
// everything here is plain rational linear algebra, so only the split-weight
// helpers (weights of a representation) are unavailable for it.
inline AlgebraPtr make_so3() {
    LieAlgebra::BracketTable t(3, std::vector<std::vector<std::pair<int, Rational>>>(3));
    auto set = [&](int i, int j, int k, long s) {
        t[i][j].emplace_back(k, Rational(s));
        t[j][i].emplace_back(k, Rational(-s));
    };
    set(0, 1, 2, 1);
    set(1, 2, 0, 1);
    set(2, 0, 1, 1);
    std::vector<DenseMat<Rational>> defining(3, DenseMat<Rational>(3, 3));
    defining[0](1, 2) = -1;
    defining[0](2, 1) = 1;
    defining[1](0, 2) = 1;
    defining[1](2, 0) = -1;
    defining[2](0, 1) = -1;
    defining[2](1, 0) = 1;
    return std::make_shared<LieAlgebra>("so3", 3, std::vector<int>{2}, std::move(t),
                                        std::move(defining));
}

inline AlgebraPtr algebra_by_name(const std::string& name) {
    if (name == "sl2") return make_sl(2);
    if (name == "sl3") return make_sl(3);
    if (name == "sl4") return make_sl(4);
    if (name == "so3") return make_so3();
    throw MalformedInput("unknown algebra '" + name + "' (catalog: sl2 sl3 sl4 so3)");
}

// Text format: first line "dim rank", then lines "i j k p/q" for the nonzero
// structure constants (0-based), then "cartan: i1 i2 ...".
inline AlgebraPtr load_algebra(std::istream& in, const std::string& name = "file") {
    int dim = -1, rank = -1;
    if (!(in >> dim >> rank)) throw MalformedInput("algebra file: missing 'dim rank' header");
    if (dim <= 0 || rank <= 0) throw MalformedInput("algebra file: bad dimensions");
    LieAlgebra::BracketTable t(dim, std::vector<std::vector<std::pair<int, Rational>>>(dim));
    std::vector<int> cartan;
    std::string tok;
    while (in >> tok) {
        if (tok == "cartan:") {
            int idx;
            while (in >> idx) cartan.push_back(idx);
            break;
        }
        int i = std::stoi(tok);
        int j, k;
        std::string coeff;
        if (!(in >> j >> k >> coeff)) throw MalformedInput("algebra file: truncated constant line");
        if (i < 0 || i >= dim || j < 0 || j >= dim || k < 0 || k >= dim)
            throw MalformedInput("algebra file: index out of range");
        t[i][j].emplace_back(k, parse_rational(coeff));
    }
    if (static_cast<int>(cartan.size()) != rank)
        throw MalformedInput("algebra file: cartan line lists " + std::to_string(cartan.size()) +
                             " indices, header says rank " + std::to_string(rank));
    return std::make_shared<LieAlgebra>(name, dim, cartan, std::move(t));
}

}  // namespace liecov
