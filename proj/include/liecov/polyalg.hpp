#pragma once

// Sparse multivariate polynomials and vector-valued polynomial maps over an
// exact field, with the calculus the covariant machinery needs: directional
// derivatives, adjoint vector fields tau(xi), and kappa-gradients.
//
// Terms are kept in a map ordered by the global graded-lex order, so the
// leading term of a nonzero polynomial is *rbegin() and printing is canonical.

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "liecov/errors.hpp"
#include "liecov/liecore.hpp"
#include "liecov/monomial.hpp"
#include "liecov/scalar.hpp"

namespace liecov {

template <class K>
class Poly {
  public:
    using Terms = std::map<Exp, K, GradedLexLess>;

    Poly() : nvars_(0) {}
    explicit Poly(int nvars) : nvars_(nvars) {}

    static Poly constant(int nvars, K c) {
        Poly p(nvars);
        if (!is_zero(c)) p.terms_.emplace(Exp(nvars, 0), std::move(c));
        return p;
    }

    static Poly variable(int nvars, int i, K c = K(1)) {
        Poly p(nvars);
        Exp e(nvars, 0);
        e[i] = 1;
        if (!is_zero(c)) p.terms_.emplace(std::move(e), std::move(c));
        return p;
    }

    static Poly monomial(int nvars, Exp e, K c) {
        Poly p(nvars);
        if (!is_zero(c)) p.terms_.emplace(std::move(e), std::move(c));
        return p;
    }

    int nvars() const { return nvars_; }
    const Terms& terms() const { return terms_; }
    bool is_zero_poly() const { return terms_.empty(); }

    int degree() const {
        if (terms_.empty()) return -1;
        return static_cast<int>(total_degree(terms_.rbegin()->first));
    }

    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        auto d = total_degree(terms_.begin()->first);
        return d == total_degree(terms_.rbegin()->first);
    }

    const K* coefficient(const Exp& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? nullptr : &it->second;
    }

    void add_term(const Exp& e, const K& c) {
        if (is_zero(c)) return;
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (is_zero(it->second)) terms_.erase(it);
        }
    }

    Poly& operator+=(const Poly& o) {
        check_vars(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        check_vars(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

    Poly operator-() const {
        Poly r(nvars_);
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
        return r;
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        a.check_vars(b);
        Poly r(a.nvars_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) r.add_term(exp_add(ea, eb), ca * cb);
        return r;
    }

    friend Poly operator*(const K& c, const Poly& p) {
        Poly r(p.nvars_);
        if (is_zero(c)) return r;
        for (const auto& [e, v] : p.terms_) r.terms_.emplace(e, c * v);
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly derivative(int var) const {
        Poly r(nvars_);
        for (const auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            Exp d = e;
            d[var] -= 1;
            r.add_term(d, K(static_cast<long>(e[var])) * c);
        }
        return r;
    }

    Poly homogeneous_component(std::uint32_t d) const {
        Poly r(nvars_);
        for (const auto& [e, c] : terms_)
            if (total_degree(e) == d) r.terms_.emplace(e, c);
        return r;
    }

    template <class V>
    V evaluate_as(const std::vector<V>& x) const {
        if (static_cast<int>(x.size()) != nvars_) throw DimensionMismatch("Poly::evaluate");
        V acc(0);
        for (const auto& [e, c] : terms_) {
            V t = value_of<V>(c);
            for (int i = 0; i < nvars_; ++i)
                for (std::uint32_t k = 0; k < e[i]; ++k) t = t * x[i];
            acc += t;
        }
        return acc;
    }

    K evaluate(const std::vector<K>& x) const { return evaluate_as<K>(x); }

    double evaluate_double(const std::vector<double>& x) const { return evaluate_as<double>(x); }

    template <class F>
    auto map_coefficients(F&& f) const {
        using K2 = decltype(f(std::declval<const K&>()));
        Poly<K2> r(nvars_);
        for (const auto& [e, c] : terms_) r.add_term(e, f(c));
        return r;
    }

    std::string to_text() const {
        if (terms_.empty()) return std::string();
        std::ostringstream os;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            os << to_string(it->second) << " :";
            for (auto e : it->first) os << ' ' << e;
            os << '\n';
        }
        return os.str();
    }

  private:
    template <class V>
    static V value_of(const K& c) {
        if constexpr (std::is_same_v<V, double>) {
            if constexpr (std::is_same_v<K, Rational>) return to_double(c);
            else
                static_assert(std::is_same_v<K, Rational>, "double evaluation needs Q coefficients");
        } else {
            return V(c);
        }
    }

    void check_vars(const Poly& o) const {
        if (nvars_ != o.nvars_) throw DimensionMismatch("polynomials on different variable sets");
    }

    int nvars_;
    Terms terms_;
};

template <class K>
class PolyMap {
  public:
    PolyMap() : domain_dim_(0) {}
    PolyMap(int domain_dim, int target_dim)
        : domain_dim_(domain_dim), comps_(target_dim, Poly<K>(domain_dim)) {}
    PolyMap(int domain_dim, std::vector<Poly<K>> comps)
        : domain_dim_(domain_dim), comps_(std::move(comps)) {
        for (const auto& c : comps_)
            if (c.nvars() != domain_dim_)
                throw DimensionMismatch("PolyMap component variable count");
    }

    static PolyMap identity(int n) {
        PolyMap m(n, n);
        for (int i = 0; i < n; ++i) m.comps_[i] = Poly<K>::variable(n, i);
        return m;
    }

    static PolyMap constant(int n, const std::vector<K>& v) {
        PolyMap m(n, static_cast<int>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i)
            m.comps_[i] = Poly<K>::constant(n, v[i]);
        return m;
    }

    int domain_dim() const { return domain_dim_; }
    int target_dim() const { return static_cast<int>(comps_.size()); }
    const Poly<K>& component(int k) const { return comps_[k]; }
    Poly<K>& component(int k) { return comps_[k]; }
    const std::vector<Poly<K>>& components() const { return comps_; }

    bool is_zero_map() const {
        for (const auto& c : comps_)
            if (!c.is_zero_poly()) return false;
        return true;
    }

    int degree() const {
        int d = -1;
        for (const auto& c : comps_) d = std::max(d, c.degree());
        return d;
    }

    bool is_homogeneous() const {
        int d = -1;
        for (const auto& c : comps_) {
            if (c.is_zero_poly()) continue;
            if (!c.is_homogeneous()) return false;
            if (d < 0) d = c.degree();
            else if (d != c.degree())
                return false;
        }
        return true;
    }

    PolyMap homogeneous_component(std::uint32_t d) const {
        PolyMap r(domain_dim_, target_dim());
        for (int k = 0; k < target_dim(); ++k) r.comps_[k] = comps_[k].homogeneous_component(d);
        return r;
    }

    PolyMap& operator+=(const PolyMap& o) {
        check_shape(o);
        for (int k = 0; k < target_dim(); ++k) comps_[k] += o.comps_[k];
        return *this;
    }
    PolyMap& operator-=(const PolyMap& o) {
        check_shape(o);
        for (int k = 0; k < target_dim(); ++k) comps_[k] -= o.comps_[k];
        return *this;
    }
    friend PolyMap operator+(PolyMap a, const PolyMap& b) { return a += b; }
    friend PolyMap operator-(PolyMap a, const PolyMap& b) { return a -= b; }

    friend PolyMap operator*(const K& c, const PolyMap& m) {
        PolyMap r(m.domain_dim_, m.target_dim());
        for (int k = 0; k < m.target_dim(); ++k) r.comps_[k] = c * m.comps_[k];
        return r;
    }

    friend PolyMap operator*(const Poly<K>& p, const PolyMap& m) {
        PolyMap r(m.domain_dim_, m.target_dim());
        for (int k = 0; k < m.target_dim(); ++k) r.comps_[k] = p * m.comps_[k];
        return r;
    }

    friend bool operator==(const PolyMap& a, const PolyMap& b) {
        return a.domain_dim_ == b.domain_dim_ && a.comps_ == b.comps_;
    }
    friend bool operator!=(const PolyMap& a, const PolyMap& b) { return !(a == b); }

    std::vector<K> evaluate(const std::vector<K>& x) const {
        std::vector<K> v;
        v.reserve(comps_.size());
        for (const auto& c : comps_) v.push_back(c.evaluate(x));
        return v;
    }

    std::vector<double> evaluate_double(const std::vector<double>& x) const {
        std::vector<double> v;
        v.reserve(comps_.size());
        for (const auto& c : comps_) v.push_back(c.evaluate_double(x));
        return v;
    }

    template <class F>
    auto map_coefficients(F&& f) const {
        using K2 = decltype(f(std::declval<const K&>()));
        std::vector<Poly<K2>> comps;
        comps.reserve(comps_.size());
        for (const auto& c : comps_) comps.push_back(c.map_coefficients(f));
        return PolyMap<K2>(domain_dim_, std::move(comps));
    }

    // Leading (monomial, component) in graded-lex order, component index as
    // tie-break: the normalization anchor for computed bases.
    std::pair<Exp, int> leading_position() const {
        const Exp* best = nullptr;
        int best_comp = -1;
        GradedLexLess less;
        for (int k = 0; k < target_dim(); ++k) {
            if (comps_[k].is_zero_poly()) continue;
            const Exp& lead = comps_[k].terms().rbegin()->first;
            if (!best || less(*best, lead)) {
                best = &lead;
                best_comp = k;
            }
        }
        if (!best) throw std::domain_error("leading term of zero map");
        return {*best, best_comp};
    }

    K leading_coefficient() const {
        auto [e, k] = leading_position();
        return *comps_[k].coefficient(e);
    }

    std::string to_text() const {
        std::ostringstream os;
        for (int k = 0; k < target_dim(); ++k) {
            if (k) os << "---\n";
            os << comps_[k].to_text();
        }
        return os.str();
    }

  private:
    void check_shape(const PolyMap& o) const {
        if (domain_dim_ != o.domain_dim_ || comps_.size() != o.comps_.size())
            throw DimensionMismatch("PolyMap shapes differ");
    }

    int domain_dim_;
    std::vector<Poly<K>> comps_;
};

// d/dt p(x + t dir(x)) at t=0: the chain-rule kernel behind equivariance
// defects and field application.
template <class K>
Poly<K> directional_derivative(const Poly<K>& p, const PolyMap<K>& dir) {
    if (dir.target_dim() != p.nvars() || dir.domain_dim() != p.nvars())
        throw DimensionMismatch("directional_derivative: direction must map the domain to itself");
    Poly<K> r(p.nvars());
    for (int i = 0; i < p.nvars(); ++i) {
        if (dir.component(i).is_zero_poly()) continue;
        r += p.derivative(i) * dir.component(i);
    }
    return r;
}

template <class K>
PolyMap<K> directional_derivative(const PolyMap<K>& P, const PolyMap<K>& dir) {
    std::vector<Poly<K>> comps;
    comps.reserve(P.target_dim());
    for (int k = 0; k < P.target_dim(); ++k)
        comps.push_back(directional_derivative(P.component(k), dir));
    return PolyMap<K>(P.domain_dim(), std::move(comps));
}

// Derivation of f along the polynomial vector field Xf.
template <class K, class F>
auto apply_field(const PolyMap<K>& Xf, const F& f) {
    return directional_derivative(f, Xf);
}

// The adjoint vector field tau(xi)(x) = [x, xi].
inline PolyMap<Rational> tau_field(const LieAlgebra& g, const Element& xi) {
    if (static_cast<int>(xi.size()) != g.dim()) throw DimensionMismatch("tau_field element size");
    PolyMap<Rational> m(g.dim(), g.dim());
    for (int i = 0; i < g.dim(); ++i)
        for (int j = 0; j < g.dim(); ++j) {
            if (is_zero(xi[j])) continue;
            for (const auto& [k, c] : g.basis_bracket(i, j))
                m.component(k) += Poly<Rational>::variable(g.dim(), i, c * xi[j]);
        }
    return m;
}

// [A(x), B(x)] componentwise.
template <class K>
PolyMap<K> bracket_field(const LieAlgebra& g, const PolyMap<K>& A, const PolyMap<K>& B) {
    if (A.target_dim() != g.dim() || B.target_dim() != g.dim() || A.domain_dim() != B.domain_dim())
        throw DimensionMismatch("bracket_field shapes");
    PolyMap<K> r(A.domain_dim(), g.dim());
    for (int i = 0; i < g.dim(); ++i) {
        if (A.component(i).is_zero_poly()) continue;
        for (int j = 0; j < g.dim(); ++j) {
            if (B.component(j).is_zero_poly()) continue;
            Poly<K> prod = A.component(i) * B.component(j);
            for (const auto& [k, c] : g.basis_bracket(i, j))
                r.component(k) += K(Rational(c)) * prod;
        }
    }
    return r;
}

// Gradient with respect to kappa: kappa(grad p (x), y) = dp_x(y).
inline PolyMap<Rational> kappa_gradient(const LieAlgebra& g, const Poly<Rational>& p) {
    if (p.nvars() != g.dim()) throw DimensionMismatch("kappa_gradient variable count");
    std::vector<Poly<Rational>> partials;
    partials.reserve(g.dim());
    for (int i = 0; i < g.dim(); ++i) partials.push_back(p.derivative(i));
    PolyMap<Rational> grad(g.dim(), g.dim());
    const auto& kinv = g.gram_inverse();
    for (int i = 0; i < g.dim(); ++i)
        for (int j = 0; j < g.dim(); ++j) {
            if (is_zero(kinv(i, j)) || partials[j].is_zero_poly()) continue;
            grad.component(i) += kinv(i, j) * partials[j];
        }
    return grad;
}

// kappa(x, x) as a polynomial on g.
inline Poly<Rational> kappa_poly(const LieAlgebra& g) {
    Poly<Rational> p(g.dim());
    for (int i = 0; i < g.dim(); ++i)
        for (int j = 0; j < g.dim(); ++j) {
            const Rational& c = g.gram()(i, j);
            if (is_zero(c)) continue;
            Exp e(g.dim(), 0);
            e[i] += 1;
            e[j] += 1;
            p.add_term(e, c);
        }
    return p;
}

// tr(x^k) in the defining representation, for catalog algebras.
inline Poly<Rational> trace_power_poly(const LieAlgebra& g, int k) {
    const auto& def = g.defining_matrices();
    if (def.empty())
        throw MalformedInput("algebra " + g.name() + " carries no defining matrices");
    int n = static_cast<int>(def[0].rows());
    int nv = g.dim();
    // matrix of linear polynomials x -> sum x_i def[i]
    std::vector<std::vector<Poly<Rational>>> X(n, std::vector<Poly<Rational>>(n, Poly<Rational>(nv)));
    for (int i = 0; i < nv; ++i)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (!is_zero(def[i](a, b))) X[a][b] += Poly<Rational>::variable(nv, i, def[i](a, b));
    auto cur = X;
    for (int step = 1; step < k; ++step) {
        std::vector<std::vector<Poly<Rational>>> next(n, std::vector<Poly<Rational>>(n, Poly<Rational>(nv)));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) next[a][b] += cur[a][c] * X[c][b];
        cur = std::move(next);
    }
    Poly<Rational> tr(nv);
    for (int a = 0; a < n; ++a) tr += cur[a][a];
    return tr;
}

// ---------------------------------------------------------------------------
// Exact linear expression of a map over a candidate family.

template <class K>
std::optional<std::vector<K>> express_in_span(const PolyMap<K>& target,
                                              const std::vector<PolyMap<K>>& candidates) {
    if (candidates.empty())
        return target.is_zero_map() ? std::optional<std::vector<K>>(std::vector<K>{}) : std::nullopt;
    std::map<std::pair<Exp, int>, std::size_t> row_index;
    auto index_of = [&](const Exp& e, int comp) {
        return row_index.emplace(std::make_pair(e, comp), row_index.size()).first->second;
    };
    for (const auto& c : candidates)
        for (int k = 0; k < c.target_dim(); ++k)
            for (const auto& [e, v] : c.component(k).terms()) index_of(e, k);
    for (int k = 0; k < target.target_dim(); ++k)
        for (const auto& [e, v] : target.component(k).terms()) index_of(e, k);

    DenseMat<K> A(row_index.size(), candidates.size());
    std::vector<K> b(row_index.size(), K(0));
    for (std::size_t j = 0; j < candidates.size(); ++j)
        for (int k = 0; k < candidates[j].target_dim(); ++k)
            for (const auto& [e, v] : candidates[j].component(k).terms())
                A(index_of(e, k), j) = v;
    for (int k = 0; k < target.target_dim(); ++k)
        for (const auto& [e, v] : target.component(k).terms()) b[index_of(e, k)] = v;
    return dense_solve(A, b);
}

template <class K>
std::optional<std::vector<K>> express_in_span(const Poly<K>& target,
                                              const std::vector<Poly<K>>& candidates) {
    std::vector<PolyMap<K>> cand;
    cand.reserve(candidates.size());
    for (const auto& p : candidates) cand.push_back(PolyMap<K>(p.nvars(), {p}));
    return express_in_span(PolyMap<K>(target.nvars(), {target}), cand);
}

// ---------------------------------------------------------------------------
// Text format: one term per line "coeff : e1 e2 ... en"; PolyMap components
// separated by '---' lines.

template <class K>
K parse_scalar(const std::string& tok);

template <>
inline Rational parse_scalar<Rational>(const std::string& tok) {
    return parse_rational(tok);
}

template <>
inline Gaussian parse_scalar<Gaussian>(const std::string& tok) {
    return parse_gaussian(tok);
}

template <class K>
Poly<K> parse_poly_block(const std::vector<std::string>& lines, int nvars_hint = -1) {
    int nvars = nvars_hint;
    std::vector<std::pair<Exp, K>> terms;
    for (const auto& line : lines) {
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw MalformedInput("polynomial line missing ':': " + line);
        K coeff = parse_scalar<K>(line.substr(0, colon));
        std::istringstream es(line.substr(colon + 1));
        Exp e;
        long v;
        while (es >> v) {
            if (v < 0) throw MalformedInput("negative exponent in: " + line);
            e.push_back(static_cast<std::uint32_t>(v));
        }
        if (nvars < 0) nvars = static_cast<int>(e.size());
        if (static_cast<int>(e.size()) != nvars)
            throw MalformedInput("inconsistent exponent count in polynomial block");
        terms.emplace_back(std::move(e), std::move(coeff));
    }
    if (nvars < 0) throw MalformedInput("cannot infer variable count of empty polynomial block");
    Poly<K> p(nvars);
    for (auto& [e, c] : terms) p.add_term(e, c);
    return p;
}

template <class K>
PolyMap<K> parse_polymap(std::istream& in, int nvars_hint = -1) {
    std::vector<std::vector<std::string>> blocks(1);
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("---", 0) == 0) {
            blocks.emplace_back();
            continue;
        }
        blocks.back().push_back(line);
    }
    int nvars = nvars_hint;
    if (nvars < 0) {
        for (const auto& b : blocks)
            if (!b.empty()) {
                auto colon = b[0].find(':');
                std::istringstream es(b[0].substr(colon + 1));
                long v;
                int count = 0;
                while (es >> v) ++count;
                nvars = count;
                break;
            }
        if (nvars < 0) throw MalformedInput("empty polynomial map");
    }
    std::vector<Poly<K>> comps;
    comps.reserve(blocks.size());
    for (const auto& b : blocks)
        comps.push_back(b.empty() ? Poly<K>(nvars) : parse_poly_block<K>(b, nvars));
    return PolyMap<K>(nvars, std::move(comps));
}

template <class K>
PolyMap<K> parse_polymap(const std::string& text, int nvars_hint = -1) {
    std::istringstream in(text);
    return parse_polymap<K>(in, nvars_hint);
}

}  // namespace liecov
