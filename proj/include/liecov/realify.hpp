#pragma once

// Galois descent for module bases over Q(i).
//
// In the coordinates used here both conjugations sigma_g and sigma_V are the
// identity, so sigma acts on a polynomial map by conjugating coefficients; a
// map is defined over R exactly when sigma fixes it. Given a homogeneous
// module basis, degrees are processed in ascending order: the action of sigma
// on the degree-d block is expressed as sigma(Q_j) = sum_i lambda_ij Q_i +
// sum_n R_nj Q_n over the lower (already real) generators, the cocycle
// condition Lambda conj(Lambda) = I is checked exactly, Lambda is split as
// M conj(M)^{-1} by a randomized constructive Hilbert-90 step, and the block
// is replaced by sigma-fixed combinations.

#include <string>
#include <vector>

#include "liecov/covariants.hpp"
#include "liecov/errors.hpp"
#include "liecov/polyalg.hpp"
#include "liecov/rng.hpp"

namespace liecov {

using GPoly = Poly<Gaussian>;
using GMap = PolyMap<Gaussian>;

inline GPoly sigma(const GPoly& p) {
    return p.map_coefficients([](const Gaussian& c) { return conj(c); });
}

inline GMap sigma(const GMap& m) {
    return m.map_coefficients([](const Gaussian& c) { return conj(c); });
}

inline GPoly lift(const Poly<Rational>& p) {
    return p.map_coefficients([](const Rational& c) { return Gaussian(c); });
}

inline GMap lift(const PolyMap<Rational>& m) {
    return m.map_coefficients([](const Rational& c) { return Gaussian(c); });
}

inline DenseMat<Gaussian> conj(const DenseMat<Gaussian>& m) {
    DenseMat<Gaussian> r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = conj(m(i, j));
    return r;
}

struct SigmaExpression {
    DenseMat<Gaussian> lambda;           // k x k
    std::vector<std::vector<GPoly>> r;   // one invariant polynomial per (lower gen, block gen)
};

namespace detail {

inline std::vector<GPoly> gaussian_products(const InvariantGenerators& gens, int d) {
    std::vector<GPoly> out;
    for (auto& p : generator_products(gens.gens, gens.degrees, d)) out.push_back(lift(p));
    return out;
}

}  // namespace detail

// Expresses sigma of each degree-d generator over the basis: the degree-d
// block itself plus invariant multiples of the lower-degree generators.
// Verifies the displayed identities Lambda conj(Lambda) = I and
// R conj(Lambda) + sigma(R) = 0 before returning.
inline SigmaExpression express_sigma_in_basis(const std::vector<GMap>& block,
                                              const std::vector<GMap>& lower,
                                              const std::vector<int>& lower_degrees,
                                              const InvariantGenerators& gens, int d) {
    std::size_t k = block.size();
    std::vector<GMap> candidates = block;
    std::vector<std::pair<std::size_t, GPoly>> meta;  // (lower index, product)
    for (std::size_t n = 0; n < lower.size(); ++n) {
        int pd = d - lower_degrees[n];
        if (pd < 1) continue;
        for (auto& prod : detail::gaussian_products(gens, pd)) {
            candidates.push_back(prod * lower[n]);
            meta.emplace_back(n, prod);
        }
    }
    SigmaExpression out;
    out.lambda = DenseMat<Gaussian>(k, k);
    int nvars = block.empty() ? 0 : block[0].domain_dim();
    out.r.assign(lower.size(), std::vector<GPoly>(k, GPoly(nvars)));
    for (std::size_t j = 0; j < k; ++j) {
        auto combo = express_in_span(sigma(block[j]), candidates);
        if (!combo)
            throw NotExpressible("sigma of generator " + std::to_string(j) +
                                 " does not lie in the module span; input is not a module basis");
        for (std::size_t i = 0; i < k; ++i) out.lambda(i, j) = (*combo)[i];
        for (std::size_t c = k; c < candidates.size(); ++c) {
            const Gaussian& v = (*combo)[c];
            if (is_zero(v)) continue;
            const auto& [n, prod] = meta[c - k];
            out.r[n][j] += v * prod;
        }
    }
    DenseMat<Gaussian> prod = out.lambda * conj(out.lambda);
    if (!(prod == DenseMat<Gaussian>::identity(k)))
        throw ConsistencyFailure("Lambda conj(Lambda) != I; degree-" + std::to_string(d) +
                                 " block is corrupted");
    for (std::size_t n = 0; n < lower.size(); ++n)
        for (std::size_t j = 0; j < k; ++j) {
            GPoly acc(nvars);
            for (std::size_t i = 0; i < k; ++i) acc += conj(out.lambda(i, j)) * out.r[n][i];
            acc += sigma(out.r[n][j]);
            if (!acc.is_zero_poly())
                throw ConsistencyFailure("R conj(Lambda) + sigma(R) != 0 at degree " +
                                         std::to_string(d));
        }
    return out;
}

// Constructive Hilbert 90: with Lambda conj(Lambda) = I, any C gives
// M = Lambda conj(C) + C with Lambda conj(M) = M; draw C until M is
// invertible. Non-invertible draws form a measure-zero set, so the retry
// budget only guards against broken inputs.
inline DenseMat<Gaussian> hilbert90_solve(const DenseMat<Gaussian>& lambda,
                                          std::uint64_t seed = 1) {
    std::size_t k = lambda.rows();
    if (!(lambda * conj(lambda) == DenseMat<Gaussian>::identity(k)))
        throw ConsistencyFailure("hilbert90_solve requires Lambda conj(Lambda) = I");
    Rng rng(seed);
    for (int attempt = 0; attempt < 32; ++attempt) {
        DenseMat<Gaussian> C(k, k);
        if (attempt == 0) {
            C = DenseMat<Gaussian>::identity(k);  // M = Lambda + I, often enough
        } else {
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) C(i, j) = rng.gaussian(3);
        }
        DenseMat<Gaussian> M = lambda * conj(C) + C;
        if (dense_inverse(M)) return M;
    }
    throw RetryBudgetExhausted("no invertible Hilbert-90 candidate found in 32 draws");
}

struct RealifyStep {
    int degree;
    std::vector<std::size_t> block;        // generator indices of this degree
    DenseMat<Gaussian> lambda;
    std::vector<std::vector<GPoly>> r;
    DenseMat<Gaussian> m;
    std::vector<std::vector<GPoly>> t;
};

struct RealificationCertificate {
    std::vector<RealifyStep> steps;
    std::vector<GMap> new_generators;
    std::vector<int> degrees;
};

// The full descent: ascending degrees, one SigmaExpression + Hilbert-90 step
// per degree block, generators replaced in place. All certificate identities
// and the sigma-fixedness of every output are verified exactly.
inline RealificationCertificate realify_basis(std::vector<GMap> generators,
                                              std::vector<int> degrees,
                                              const InvariantGenerators& gens,
                                              std::uint64_t seed = 1) {
    if (generators.size() != degrees.size())
        throw DimensionMismatch("realify_basis: one degree per generator");
    RealificationCertificate cert;
    std::vector<int> order;  // distinct degrees ascending
    for (int d : degrees)
        if (std::find(order.begin(), order.end(), d) == order.end()) order.push_back(d);
    std::sort(order.begin(), order.end());
    int nvars = generators.empty() ? 0 : generators[0].domain_dim();
    for (int d : order) {
        std::vector<std::size_t> block_idx;
        std::vector<std::size_t> lower_idx;
        for (std::size_t i = 0; i < generators.size(); ++i) {
            if (degrees[i] == d) block_idx.push_back(i);
            else if (degrees[i] < d)
                lower_idx.push_back(i);
        }
        std::vector<GMap> block, lower;
        std::vector<int> lower_deg;
        for (auto i : block_idx) block.push_back(generators[i]);
        for (auto i : lower_idx) {
            lower.push_back(generators[i]);
            lower_deg.push_back(degrees[i]);
        }
        auto expr = express_sigma_in_basis(block, lower, lower_deg, gens, d);
        std::size_t k = block.size();
        RealifyStep step;
        step.degree = d;
        step.block = block_idx;
        step.lambda = expr.lambda;
        step.r = expr.r;
        bool already_real = expr.lambda == DenseMat<Gaussian>::identity(k);
        for (const auto& row : expr.r)
            for (const auto& p : row) already_real = already_real && p.is_zero_poly();
        if (already_real) {
            step.m = DenseMat<Gaussian>::identity(k);
            step.t.assign(lower.size(), std::vector<GPoly>(k, GPoly(nvars)));
        } else {
            step.m = hilbert90_solve(expr.lambda, seed + static_cast<std::uint64_t>(d));
            auto mbar = conj(step.m);
            // T = (1/2) R conj(M)
            Gaussian half(Rational(1, 2));
            step.t.assign(lower.size(), std::vector<GPoly>(k, GPoly(nvars)));
            for (std::size_t n = 0; n < lower.size(); ++n)
                for (std::size_t j = 0; j < k; ++j) {
                    GPoly acc(nvars);
                    for (std::size_t i = 0; i < k; ++i) acc += mbar(i, j) * expr.r[n][i];
                    step.t[n][j] = half * acc;
                }
        }
        // certificate identities
        if (!(expr.lambda * conj(step.m) == step.m))
            throw ConsistencyFailure("Lambda conj(M) != M at degree " + std::to_string(d));
        auto mbar = conj(step.m);
        for (std::size_t n = 0; n < lower.size(); ++n)
            for (std::size_t j = 0; j < k; ++j) {
                GPoly rm(nvars);
                for (std::size_t i = 0; i < k; ++i) rm += mbar(i, j) * expr.r[n][i];
                if (!(rm + sigma(step.t[n][j]) == step.t[n][j]))
                    throw ConsistencyFailure("R conj(M) + sigma(T) != T at degree " +
                                             std::to_string(d));
            }
        // replacement P_j = sum_i mu_ij Q_i + sum_n T_nj Q_n
        std::vector<GMap> replaced;
        for (std::size_t j = 0; j < k; ++j) {
            GMap P(nvars, block[0].target_dim());
            for (std::size_t i = 0; i < k; ++i) P += step.m(i, j) * block[i];
            for (std::size_t n = 0; n < lower.size(); ++n) P += step.t[n][j] * lower[n];
            if (!(sigma(P) == P))
                throw ConsistencyFailure("replacement generator is not sigma-fixed at degree " +
                                         std::to_string(d));
            replaced.push_back(std::move(P));
        }
        // module-basis preservation: every old block generator is expressible
        // over the new family
        for (std::size_t j = 0; j < k; ++j) {
            std::vector<GMap> family = replaced;
            std::vector<GMap> lower_family = lower;
            for (std::size_t n = 0; n < lower_family.size(); ++n) {
                int pd = d - lower_deg[n];
                if (pd < 1) continue;
                for (auto& prod : detail::gaussian_products(gens, pd))
                    family.push_back(prod * lower_family[n]);
            }
            if (!express_in_span(block[j], family))
                throw ConsistencyFailure("old generator left the module span after replacement");
        }
        for (std::size_t j = 0; j < k; ++j) generators[block_idx[j]] = replaced[j];
        cert.steps.push_back(std::move(step));
    }
    cert.new_generators = std::move(generators);
    cert.degrees = std::move(degrees);
    return cert;
}

// Test-fixture scrambler: a degree-preserving invertible Gaussian mix per
// degree block plus invariant-multiple shears from lower-degree generators.
// Rational catalog computations never produce non-real bases on their own, so
// nontrivial inputs for the descent are manufactured this way.
inline std::pair<std::vector<GMap>, std::vector<int>> scramble_basis(
    const CovariantBasis& basis, const InvariantGenerators& gens, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<GMap> out;
    std::vector<int> degrees = basis.degrees;
    for (const auto& g : basis.generators) out.push_back(lift(g));
    // blocks of equal degree
    std::vector<int> distinct = degrees;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (int d : distinct) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < degrees.size(); ++i)
            if (degrees[i] == d) idx.push_back(i);
        std::size_t k = idx.size();
        DenseMat<Gaussian> B(k, k);
        for (;;) {
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) B(i, j) = rng.gaussian(2);
            if (dense_inverse(B)) break;
        }
        std::vector<GMap> mixed;
        for (std::size_t j = 0; j < k; ++j) {
            GMap m(out[idx[0]].domain_dim(), out[idx[0]].target_dim());
            for (std::size_t i = 0; i < k; ++i) m += B(i, j) * out[idx[i]];
            mixed.push_back(std::move(m));
        }
        for (std::size_t j = 0; j < k; ++j) out[idx[j]] = mixed[j];
        // shears from strictly lower degrees
        for (std::size_t j : idx)
            for (std::size_t n = 0; n < out.size(); ++n) {
                if (degrees[n] >= d) continue;
                int pd = d - degrees[n];
                auto prods = detail::gaussian_products(gens, pd);
                if (prods.empty()) continue;
                GPoly shear(out[n].domain_dim());
                for (auto& p : prods) shear += rng.gaussian(2) * p;
                out[j] += shear * out[n];
            }
    }
    return {out, degrees};
}

}  // namespace liecov
