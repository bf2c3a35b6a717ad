#pragma once

// Deterministic random draws. Every randomized routine in the library takes a
// seed and goes through this engine, so runs are reproducible bit for bit.

#include <cstdint>
#include <random>

#include "liecov/scalar.hpp"

namespace liecov {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    long integer(long lo, long hi) {
        std::uniform_int_distribution<long> d(lo, hi);
        return d(eng_);
    }

    // Uniform integer in [-box, box].
    Rational rational(long box) { return Rational(integer(-box, box)); }

    Rational nonzero_rational(long box) {
        for (;;) {
            Rational r = rational(box);
            if (!is_zero(r)) return r;
        }
    }

    Gaussian gaussian(long box) { return Gaussian(rational(box), rational(box)); }

    Gaussian nonzero_gaussian(long box) {
        for (;;) {
            Gaussian g = gaussian(box);
            if (!is_zero(g)) return g;
        }
    }

    std::mt19937_64& engine() { return eng_; }

  private:
    std::mt19937_64 eng_;
};

}  // namespace liecov
