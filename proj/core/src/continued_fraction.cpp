#include "twistlaw/continued_fraction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "twistlaw/error.hpp"

namespace twistlaw::cf {

namespace {

double log2_abs(const mpz_class& z) {
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::log2(std::abs(mant)) + static_cast<double>(exp);
}

} // namespace

PrecisionReal PrecisionReal::exact(const mpq_class& q) {
    PrecisionReal r;
    r.value = q;
    r.value.canonicalize();
    return r;
}

PrecisionReal PrecisionReal::exact(long num, long den) {
    if (den == 0) throw InvalidArgument("PrecisionReal: zero denominator");
    return exact(mpq_class(num, den));
}

PrecisionReal PrecisionReal::dyadic(const mpz_class& numerator, unsigned bits) {
    PrecisionReal r;
    mpz_class den = 1;
    den <<= bits;
    r.value = mpq_class(numerator, den);
    r.value.canonicalize();
    r.bits = static_cast<double>(bits);
    return r;
}

PrecisionReal PrecisionReal::uniform(Rng& rng, unsigned bits) {
    if (bits < 2) throw InvalidArgument("PrecisionReal::uniform: need at least 2 bits");
    // Odd numerators keep the sample strictly inside (0,1).
    mpz_class n = uniform_bits(rng, bits);
    n |= 1;
    return dyadic(n, bits);
}

GaussStep gauss_step(const PrecisionReal& x, double floor_bits) {
    if (sgn(x.value) <= 0 || x.value >= 1)
        throw InvalidArgument("gauss_step: value must lie in (0,1)");
    if (x.bits < floor_bits)
        throw PrecisionExhausted("gauss_step: precision budget already below the safety floor");

    const mpz_class& num = x.value.get_num();
    const mpz_class& den = x.value.get_den();
    GaussStep s;
    mpz_class rem;
    mpz_fdiv_qr(s.a.get_mpz_t(), rem.get_mpz_t(), den.get_mpz_t(), num.get_mpz_t());

    const double cost = 2.0 * (log2_abs(den) - log2_abs(num));
    s.next.bits = x.is_exact() ? x.bits : x.bits - cost;
    if (!x.is_exact() && s.next.bits < floor_bits) {
        s.exhausted = true;
        s.a = 0;
        s.next = x;
        return s;
    }
    // gcd(rem, num) = gcd(den, num) = 1, so the quotient is already reduced.
    s.next.value = rem == 0 ? mpq_class(0) : mpq_class(rem, num);
    s.terminated = (rem == 0);
    return s;
}

CfExpansion cf_expand(const PrecisionReal& x, std::size_t n_max, double floor_bits) {
    if (n_max < 1) throw InvalidArgument("cf_expand: n_max must be >= 1");
    CfExpansion e;
    PrecisionReal cur = x;
    e.bits_left = cur.bits;
    if (sgn(cur.value) == 0) {
        e.terminated = true;
        return e;
    }
    while (e.coeffs.size() < n_max) {
        if (cur.bits < floor_bits) {
            e.exhausted = true;
            break;
        }
        GaussStep s = gauss_step(cur, floor_bits);
        if (s.exhausted) {
            e.exhausted = true;
            break;
        }
        e.coeffs.push_back(std::move(s.a));
        cur = std::move(s.next);
        e.bits_left = cur.bits;
        if (s.terminated) {
            e.terminated = true;
            break;
        }
    }
    return e;
}

CfExpansion cf_expand_real(const PrecisionReal& x, std::size_t n_max, double floor_bits) {
    mpz_class a0;
    mpz_fdiv_q(a0.get_mpz_t(), x.value.get_num().get_mpz_t(), x.value.get_den().get_mpz_t());
    PrecisionReal frac = x;
    frac.value = x.value - mpq_class(a0);
    frac.value.canonicalize();
    CfExpansion e;
    if (sgn(frac.value) == 0) {
        e.terminated = true;
        e.bits_left = frac.bits;
    } else {
        e = cf_expand(frac, n_max, floor_bits);
    }
    e.integer_part = a0;
    return e;
}

std::vector<Rational> convergents(const CfExpansion& e) {
    if (e.coeffs.empty() && e.integer_part == 0)
        throw InvalidArgument("convergents: empty expansion");
    std::vector<Rational> out;
    out.reserve(e.coeffs.size() + 1);
    mpz_class p_prev = 1, q_prev = 0;           // p_{-1}/q_{-1}
    mpz_class p = e.integer_part, q = 1;        // p_0/q_0
    if (e.integer_part != 0) out.push_back({p, q});
    for (const auto& a : e.coeffs) {
        mpz_class p_next = a * p + p_prev;
        mpz_class q_next = a * q + q_prev;
        p_prev = std::move(p);
        q_prev = std::move(q);
        p = std::move(p_next);
        q = std::move(q_next);
        out.push_back({p, q});
    }
    return out;
}

hyp::Horoball ford_horoball(const mpz_class& p, const mpz_class& q, double eps) {
    if (q < 1) throw InvalidArgument("ford_horoball: denominator must be >= 1");
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    if (g != 1)
        throw InvalidArgument("ford_horoball: " + p.get_str() + "/" + q.get_str() + " is not reduced");
    if (!(eps > 0.0 && eps <= 1.0))
        throw InvalidArgument("ford_horoball: eps must lie in (0, 1]");
    const double qd = q.get_d();
    const double tangency = mpq_class(p, q).get_d();
    return hyp::Horoball::make(hyp::BoundaryPoint::at(tangency), eps / (qd * qd), 1.0,
                               p.get_str() + "/" + q.get_str());
}

double trimmed_sum(std::span<const double> values) {
    if (values.empty()) throw InvalidArgument("trimmed_sum: empty sequence");
    const double total = std::accumulate(values.begin(), values.end(), 0.0);
    return total - *std::max_element(values.begin(), values.end());
}

double dv_statistic(const CfExpansion& e, std::size_t n) {
    if (n < 2) throw InvalidArgument("dv_statistic: n must be >= 2");
    if (e.coeffs.size() < n)
        throw InvalidArgument("dv_statistic: only " + std::to_string(e.coeffs.size()) +
                              " coefficients available, need " + std::to_string(n));
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = e.coeffs[i].get_d();
    const double nd = static_cast<double>(n);
    return trimmed_sum(a) / (nd * std::log(nd));
}

} // namespace twistlaw::cf
