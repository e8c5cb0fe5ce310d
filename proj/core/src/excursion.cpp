#include "twistlaw/excursion.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include <mpfr.h>

#include "twistlaw/error.hpp"
#include "twistlaw/hyperbolic.hpp"

namespace twistlaw::exc {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

double log_abs(const mpz_class& z) {
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::log(std::abs(mant)) + static_cast<double>(exp) * kLn2;
}

// RAII wrapper for a single mpfr_t.
class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
    ~Mpfr() { mpfr_clear(v_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
    mpfr_ptr get() { return v_; }

private:
    mpfr_t v_;
};

long double to_ld(const mpz_class& num, const mpz_class& den) {
    Mpfr x(96), y(96);
    mpfr_set_z(x.get(), num.get_mpz_t(), MPFR_RNDN);
    mpfr_set_z(y.get(), den.get_mpz_t(), MPFR_RNDN);
    mpfr_div(x.get(), x.get(), y.get(), MPFR_RNDN);
    return mpfr_get_ld(x.get(), MPFR_RNDN);
}

} // namespace

double time_scale(TimeConvention c) {
    return c == TimeConvention::teichmuller ? hyp::kTeichmullerScale : 1.0;
}

namespace {
const flat::Origami& validated(const flat::Origami& o) {
    flat::validate(o);
    return o;
}
} // namespace

PreparedSurface::PreparedSurface(const flat::Origami& o)
    : origami(validated(o)), orbit(o), eps_zero(flat::eps_zero(o)), stratum(flat::stratum(o)) {}

double xi_prime(double xi) {
    if (!(xi > 1.0)) throw InvalidArgument("xi_prime: xi must exceed 1");
    return 0.5 * std::sqrt(1.0 - 1.0 / (xi * xi));
}

double twist_count(double A, double eps, long double phi, long double phi_max) {
    if (!(A > 0.0 && A <= 1.0)) throw InvalidArgument("twist_count: area must lie in (0, 1]");
    if (!(eps > 0.0)) throw InvalidArgument("twist_count: eps must be positive");
    if (phi > phi_max) throw DomainError("twist_count: phi exceeds phi_max");
    if (phi == 0.0L) throw UnboundedExcursion("twist_count: ray aimed at the tangency point");
    if (phi < 0.0L) throw DomainError("twist_count: negative angle");
    const long double s = std::sin(phi);
    const long double smax = std::sin(phi_max);
    const long double ratio = s / smax;
    const long double rad = std::max(0.0L, 1.0L - ratio * ratio);
    return static_cast<double>((2.0L * A / eps) * (smax / s) * std::sqrt(rad));
}

unsigned direction_bits(double T, TimeConvention c, double margin) {
    const double lnq = T / (2.0 * time_scale(c)) + margin;
    return static_cast<unsigned>(std::ceil(2.0 * lnq / kLn2)) + 128u;
}

cf::PrecisionReal sample_direction(Rng& rng, unsigned bits) {
    if (bits < 8) throw InvalidArgument("sample_direction: need at least 8 bits");
    // psi = 2 pi U uniform; the boundary point of the ray from i is -cot(psi / 2).
    mpz_class u = uniform_bits(rng, bits);
    u |= 1;
    const auto prec = static_cast<mpfr_prec_t>(2 * bits + 64);
    Mpfr x(prec), pi(prec);
    mpfr_set_z(x.get(), u.get_mpz_t(), MPFR_RNDN);
    mpfr_div_2ui(x.get(), x.get(), bits, MPFR_RNDN);
    mpfr_const_pi(pi.get(), MPFR_RNDN);
    mpfr_mul(x.get(), x.get(), pi.get(), MPFR_RNDN);
    mpfr_cot(x.get(), x.get(), MPFR_RNDN);
    mpfr_neg(x.get(), x.get(), MPFR_RNDN);
    mpfr_mul_2ui(x.get(), x.get(), bits, MPFR_RNDN);
    mpfr_rint(x.get(), x.get(), MPFR_RNDN);
    mpz_class n;
    mpfr_get_z(n.get_mpz_t(), x.get(), MPFR_RNDN);
    return cf::PrecisionReal::dyadic(n, bits);
}

namespace {

struct Engine {
    const PreparedSurface& surface;
    const TrajectoryConfig& cfg;
    double scale;
    mpz_class N, M; // theta = N / M
    std::vector<ExcursionRecord> records;
    std::set<std::pair<mpz_class, mpz_class>> seen;
    std::size_t candidates = 0;
    long double log_y0_min = 0.0L;

    // Every cylinder horoball tangent at p/q, given the orbit element whose
    // horizontal direction is (p,q).
    void visit(const mpz_class& p, const mpz_class& q, std::size_t element) {
        if (!seen.emplace(p, q).second) return;
        ++candidates;
        mpz_class g, a, b;
        mpz_gcdext(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
        // w = g(z) with g = [[a, b], [-q, p]] sends p/q to infinity.
        const mpz_class df = p * M - q * N;
        const mpz_class db = q * M + p * N;
        const mpz_class norm = p * p + q * q;
        const mpz_class re_w = b * p - a * q; // Re w = re_w / norm, Im w = 1 / norm
        hyp::CuspFrame f;
        f.base_log_y = -static_cast<long double>(log_abs(norm));

        // Endpoints u = A / df (forward) and u' = B / db (backward); everything is
        // kept as integer numerator/denominator pairs to avoid rational gcds.
        const mpz_class A = a * N + b * M;
        const mpz_class B = b * N - a * M;
        if (df == 0) {
            f.fwd_infinite = true;
        } else if (db == 0) {
            f.back_infinite = true;
            f.fwd = to_ld(A * norm - re_w * df, df * norm);
        } else {
            // Centre the semicircle: fwd - mid = (M^2 + N^2) / (2 df db).
            const mpz_class den = 2 * df * db;
            const mpz_class fwd_num = M * M + N * N;
            const mpz_class base_num = 2 * re_w * df * db - norm * (A * db + B * df);
            // Past the top of the semicircle only a base already inside can matter.
            if (sgn(base_num) == sgn(fwd_num) && f.base_log_y < log_y0_min) return;
            f.fwd = to_ld(fwd_num, den);
            f.back = -f.fwd;
            f.base_x = to_ld(base_num, den * norm);
            if (std::abs(f.fwd) < std::exp(log_y0_min) * (1 - hyp::kGeomTol) &&
                f.base_log_y < log_y0_min)
                return;
        }

        const auto& cyls = surface.orbit.horizontal_cylinders(element);
        const std::string dir = p.get_str() + "/" + q.get_str() + "#";
        const double n = surface.origami.n;
        for (std::size_t k = 0; k < cyls.size(); ++k) {
            const double c = static_cast<double>(cyls[k].circumference);
            f.height = static_cast<long double>(c * c / (cfg.eps * n));
            const auto geom = hyp::intersect_in_frame(f);
            if (!geom) continue;
            ExcursionRecord r;
            r.t_entry = scale * geom->t_entry;
            if (!(r.t_entry < cfg.T)) continue;
            r.label = dir + std::to_string(k);
            r.phi = geom->phi;
            r.phi_max = geom->phi_max;
            r.weight = cyls[k].area_fraction;
            r.base_inside = geom->base_inside;
            if (geom->unbounded()) {
                r.E = r.E_area = r.tw = std::numeric_limits<double>::infinity();
            } else {
                r.t_exit = scale * *geom->t_exit;
                r.E = static_cast<double>(scale * geom->horocyclic_length);
                r.E_area = r.weight * r.E;
                // The angle formula presumes a base outside the horoball; for a start
                // inside it, use its exact horocyclic equivalent.
                r.tw = r.base_inside
                           ? static_cast<double>(r.weight / cfg.eps * geom->horocyclic_length)
                           : twist_count(r.weight, cfg.eps, r.phi, r.phi_max);
            }
            r.complete = std::isfinite(r.t_exit) && r.t_exit <= cfg.T;
            records.push_back(std::move(r));
        }
    }
};

} // namespace

Trajectory enumerate_excursions(const PreparedSurface& s, const TrajectoryConfig& cfg) {
    if (!(cfg.T > 0.0)) throw InvalidArgument("enumerate_excursions: T must be positive");
    if (!(cfg.xi > 1.0)) throw InvalidArgument("enumerate_excursions: xi must exceed 1");
    if (!(cfg.eps > 0.0 && cfg.eps <= s.eps_thick_bound()))
        throw InvalidArgument("enumerate_excursions: eps must lie in (0, " +
                              std::to_string(s.eps_thick_bound()) + "]");
    if (cfg.sweep_q < 0) throw InvalidArgument("enumerate_excursions: sweep_q must be >= 0");

    Engine eng{s, cfg, time_scale(cfg.convention), cfg.theta.value.get_num(),
               cfg.theta.value.get_den(), {}, {}, 0, 0.0L};
    const double n = s.origami.n;
    // All cylinders have circumference >= 1, so every horoball sits at height >= 1/(eps n).
    eng.log_y0_min = std::log(1.0L / (static_cast<long double>(cfg.eps) * n));
    const double lnq_max = cfg.T / (2.0 * eng.scale) + cfg.margin;

    const auto& orbit = s.orbit;
    const std::size_t start = 0;
    eng.visit(1, 0, start);

    // Small denominators near theta.
    for (long q = 1; q <= cfg.sweep_q; ++q) {
        const mpz_class qz = q;
        mpz_class lo, hi;
        const mpq_class lo_q = (cfg.theta.value - 2) * qz, hi_q = (cfg.theta.value + 2) * qz;
        mpz_cdiv_q(lo.get_mpz_t(), lo_q.get_num_mpz_t(), lo_q.get_den_mpz_t());
        mpz_fdiv_q(hi.get_mpz_t(), hi_q.get_num_mpz_t(), hi_q.get_den_mpz_t());
        for (mpz_class p = lo; p <= hi; ++p) {
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), qz.get_mpz_t());
            if (g != 1) continue;
            eng.visit(p, qz, orbit.horizontal_for(start, p, qz));
        }
    }

    // Convergents and their Stern-Brocot neighbours [a0; ..., a_k, j]. The orbit
    // element for a prefix is carried along: coefficient i acts by T^{-a_i} for
    // even i and L^{-a_i} for odd i; a word ending on T leaves direction (0,1),
    // which T L^{-1} turns horizontal.
    auto finish = [&](std::size_t e, std::size_t index, const mpz_class& j) {
        if (index % 2 == 0) {
            e = orbit.apply_T(e, -j);
            e = orbit.apply_T(e, 1);
            return orbit.apply_L(e, -1);
        }
        return orbit.apply_L(e, -j);
    };

    Trajectory out;
    mpz_class a0;
    mpz_fdiv_q(a0.get_mpz_t(), eng.N.get_mpz_t(), eng.M.get_mpz_t());
    mpz_class p_prev = 1, q_prev = 0, p = a0, q = 1;
    eng.visit(p, q, finish(start, 0, a0));
    std::size_t state = orbit.apply_T(start, -a0);
    std::size_t index = 0;

    cf::PrecisionReal x = cfg.theta;
    x.value -= a0;
    while (sgn(x.value) != 0) {
        if (log_abs(q) > lnq_max) break;
        if (x.bits < cf::kSafetyFloorBits) {
            out.truncated = true;
            break;
        }
        const cf::GaussStep step = cf::gauss_step(x);
        if (step.exhausted) {
            // The next coefficient is unreliable, but its size is known well enough
            // to decide whether any denominator it generates could still matter.
            const double lnx = log_abs(x.value.get_num()) - log_abs(x.value.get_den());
            const double ln_err = -x.bits * kLn2;
            const double ln_a_lo = -(std::max(lnx, ln_err) + kLn2) - 1.0;
            for (long j = 1; j <= 2; ++j) {
                const mpz_class qj = q_prev + j * q;
                if (log_abs(qj) <= lnq_max) eng.visit(p_prev + j * p, qj, finish(state, index + 1, j));
            }
            if (log_abs(q) + ln_a_lo <= lnq_max) out.truncated = true;
            break;
        }
        const mpz_class& a = step.a;
        std::set<mpz_class> js{a};
        for (long d : {1L, 2L}) {
            if (d <= a) js.insert(mpz_class(d));
            if (a - d >= 1) js.insert(a - d);
        }
        for (const auto& j : js) {
            const mpz_class qj = q_prev + j * q;
            if (log_abs(qj) <= lnq_max) eng.visit(p_prev + j * p, qj, finish(state, index + 1, j));
        }
        mpz_class p_next = a * p + p_prev, q_next = a * q + q_prev;
        p_prev = std::move(p);
        q_prev = std::move(q);
        p = std::move(p_next);
        q = std::move(q_next);
        ++index;
        state = (index % 2 == 0) ? orbit.apply_T(state, -a) : orbit.apply_L(state, -a);
        x = step.next;
    }

    auto& recs = eng.records;
    std::sort(recs.begin(), recs.end(), [](const ExcursionRecord& u, const ExcursionRecord& v) {
        if (u.t_entry != v.t_entry) return u.t_entry < v.t_entry;
        return u.label < v.label;
    });
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto tangency_i = recs[i].label.substr(0, recs[i].label.find('#'));
        for (std::size_t j = i + 1; j < recs.size() && recs[j].t_entry < recs[i].t_exit; ++j) {
            // Boundary contacts (e.g. tangent horoballs touching at the base) are not overlaps.
            const double shared = std::min(recs[i].t_exit, recs[j].t_exit) - recs[j].t_entry;
            if (shared <= hyp::kGeomTol * (1.0 + recs[j].t_entry)) continue;
            if (recs[j].label.compare(0, recs[j].label.find('#'), tangency_i) != 0) ++out.overlaps;
        }
    }
    out.records = std::move(recs);
    out.candidates = eng.candidates;
    out.horizon = cfg.T;
    return out;
}

std::vector<ExcursionRecord> at_horizon(const std::vector<ExcursionRecord>& records, double T) {
    std::vector<ExcursionRecord> out;
    for (const auto& r : records) {
        if (!(r.t_entry < T)) continue;
        out.push_back(r);
        out.back().complete = std::isfinite(r.t_exit) && r.t_exit <= T;
    }
    return out;
}

FilterResult filter_excursions(const std::vector<ExcursionRecord>& records, double xi, double T, double s_xi) {
    const double shallow = 1.0 / xi_prime(xi);
    if (!(s_xi >= 0.0)) throw InvalidArgument("filter_excursions: s_xi must be >= 0");
    FilterResult res;
    for (auto& r : at_horizon(records, T)) {
        char keep = 0;
        if (!r.complete) {
            ++res.dropped.incomplete;
        } else if (r.E <= shallow) {
            ++res.dropped.shallow;
            res.dropped.mass_shallow += r.E_area;
        } else if (r.t_entry < s_xi) {
            ++res.dropped.early;
            res.dropped.mass_early += r.E_area;
        } else {
            keep = 1;
            res.kept.push_back(std::move(r));
        }
        res.kept_mask.push_back(keep);
    }
    return res;
}

} // namespace twistlaw::exc
