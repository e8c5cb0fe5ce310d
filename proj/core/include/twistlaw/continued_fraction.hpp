#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "twistlaw/hyperbolic.hpp"
#include "twistlaw/random.hpp"

namespace twistlaw::cf {

inline constexpr double kSafetyFloorBits = 64.0;

// A real known to `bits` bits of absolute precision. `value` is the exact rational
// representative (a dyadic for sampled reals); exact rationals carry infinite bits.
struct PrecisionReal {
    mpq_class value;
    double bits = std::numeric_limits<double>::infinity();

    static PrecisionReal exact(const mpq_class& q);
    static PrecisionReal exact(long num, long den);
    // numerator / 2^bits, known to `bits` bits.
    static PrecisionReal dyadic(const mpz_class& numerator, unsigned bits);
    // Uniform on (0,1) at the given bit budget.
    static PrecisionReal uniform(Rng& rng, unsigned bits);

    bool is_exact() const { return bits == std::numeric_limits<double>::infinity(); }
};

struct GaussStep {
    mpz_class a;
    PrecisionReal next;
    bool terminated = false; // x' == 0: x was rational
    bool exhausted = false;  // precision budget would drop below the floor; `a` not emitted
};

// One step of the Gauss map x -> 1/x - floor(1/x). Each step costs
// 2*log2(1/x) bits of absolute precision (|d(1/x)| = |dx|/x^2).
GaussStep gauss_step(const PrecisionReal& x, double floor_bits = kSafetyFloorBits);

struct CfExpansion {
    mpz_class integer_part = 0;     // a_0; zero for values in (0,1)
    std::vector<mpz_class> coeffs;  // a_1, a_2, ...
    bool exhausted = false;         // stopped because the precision budget ran out
    bool terminated = false;        // value was rational and fully expanded
    double bits_left = 0.0;
};

CfExpansion cf_expand(const PrecisionReal& x, std::size_t n_max, double floor_bits = kSafetyFloorBits);

// Expansion of an arbitrary real (a_0 = floor(x), then the fractional part).
CfExpansion cf_expand_real(const PrecisionReal& x, std::size_t n_max,
                           double floor_bits = kSafetyFloorBits);

struct Rational {
    mpz_class p;
    mpz_class q;
};

// p_k/q_k for k = 1..n (with a_0 prepended when nonzero it contributes p_0/q_0 first).
std::vector<Rational> convergents(const CfExpansion& e);

// Ford horoball of the reduced fraction p/q at thin-part parameter eps:
// tangency p/q, diameter eps/q^2, weight 1. Throws for non-reduced input or eps
// outside (0, 1] (beyond 1 the Ford packing stops being disjoint).
hyp::Horoball ford_horoball(const mpz_class& p, const mpz_class& q, double eps);

// Sum minus one copy of the maximum. Throws InvalidArgument on empty input.
double trimmed_sum(std::span<const double> values);

// (a_1 + ... + a_n - max a_k) / (n log n). Requires n >= 2 and n coefficients.
double dv_statistic(const CfExpansion& e, std::size_t n);

} // namespace twistlaw::cf
