#include "twistlaw/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "twistlaw/error.hpp"
#include "twistlaw/parallel.hpp"

namespace twistlaw::sv {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kE = 2.71828182845904523536;
// Oracle samples are split into this many independently seeded batches.
constexpr std::size_t kBatches = 64;

template <class Get>
Statistic trimmed_statistic(const std::vector<exc::ExcursionRecord>& kept, double T, Get get) {
    if (!(T >= kE)) throw InvalidArgument("statistic: horizon T must be >= e");
    Statistic st;
    double sum = 0.0, max = 0.0;
    for (const auto& r : kept) {
        if (!r.complete || !(r.t_entry < T) || r.t_exit > T) continue;
        const double v = get(r);
        sum += v;
        max = st.empty ? v : std::max(max, v);
        st.empty = false;
    }
    if (!st.empty) st.value = (sum - max) / (T * std::log(T));
    return st;
}

struct Moments {
    double sum = 0.0, sum_sq = 0.0;
    std::size_t n = 0;
};

} // namespace

Statistic twist_statistic(const std::vector<exc::ExcursionRecord>& kept, double T) {
    return trimmed_statistic(kept, T, [](const exc::ExcursionRecord& r) { return r.tw; });
}

Statistic excursion_statistic(const std::vector<exc::ExcursionRecord>& kept, double T) {
    return trimmed_statistic(kept, T, [](const exc::ExcursionRecord& r) { return r.E_area; });
}

std::vector<HorizonStats> trimmed_series(const std::vector<exc::ExcursionRecord>& records,
                                         const std::vector<double>& grid, double xi, double s_xi) {
    std::vector<HorizonStats> out;
    for (double T : grid) {
        auto f = exc::filter_excursions(records, xi, T, s_xi);
        HorizonStats h;
        h.T = T;
        h.n_kept = f.kept.size();
        h.dropped = f.dropped;
        h.twist = twist_statistic(f.kept, T);
        h.excursion = excursion_statistic(f.kept, T);
        const double tlog = T * std::log(T);
        h.twist_trimmed = h.twist.value * tlog;
        h.area_trimmed = h.excursion.value * tlog;
        out.push_back(h);
    }
    return out;
}

DiscSample SurfaceSampler::draw(Rng& rng) const {
    // dx dy / y^2 on {|x| <= 1/2, y >= sqrt(3)/2}, restricted to |z| >= 1.
    const double y_min = std::sqrt(3.0) / 2.0;
    for (;;) {
        const double x = uniform01(rng) - 0.5;
        const double y = y_min / uniform01(rng);
        if (x * x + y * y < 1.0) continue;
        DiscSample d;
        d.z = hyp::UhpPoint{x, y};
        d.element = static_cast<std::size_t>(rng() % surface_->orbit.size());
        return d;
    }
}

double short_cylinder_weight(const exc::PreparedSurface& s, const DiscSample& d, double bound) {
    if (!(bound > 0.0)) throw InvalidArgument("short_cylinder_weight: bound must be positive");
    const double n = s.origami.n;
    const double x = d.z.x, y = d.z.y;
    double total = 0.0;
    auto add = [&](const std::vector<flat::Cylinder>& cyls, double holonomy_sq) {
        for (const auto& c : cyls) {
            const double circ = static_cast<double>(c.circumference);
            if (circ * circ * holonomy_sq / (n * y) <= bound) total += c.area_fraction;
        }
    };
    add(s.orbit.horizontal_cylinders(d.element), 1.0);
    // circ >= 1: q^2 y <= n bound and (q x - p)^2 <= n bound y.
    const auto q_max = static_cast<long>(std::floor(std::sqrt(n * bound / y)));
    const double reach = std::sqrt(n * bound * y);
    for (long q = 1; q <= q_max; ++q) {
        const auto lo = static_cast<long>(std::ceil(q * x - reach));
        const auto hi = static_cast<long>(std::floor(q * x + reach));
        for (long p = lo; p <= hi; ++p) {
            if (std::gcd(p, q) != 1) continue;
            const double re = q * x - p, im = q * y;
            const double hol = re * re + im * im;
            if (hol / (n * y) > bound) continue;
            const auto e = s.orbit.horizontal_for(d.element, p, q);
            add(s.orbit.horizontal_cylinders(e), hol);
        }
    }
    return total;
}

OracleResult oracle_siegel_transform(const exc::PreparedSurface& s, std::size_t samples, double R,
                                     std::uint64_t seed, unsigned workers) {
    if (samples < kBatches) throw InvalidArgument("oracle_siegel_transform: need at least 64 samples");
    if (!(R > 0.0)) throw InvalidArgument("oracle_siegel_transform: R must be positive");
    const SurfaceSampler sampler(s);
    const auto batches = parallel_map(kBatches, workers, [&](std::size_t b) {
        Rng rng = make_rng(seed, Stream::oracle_transform, b);
        const std::size_t count = samples / kBatches + (b < samples % kBatches ? 1 : 0);
        Moments m;
        for (std::size_t i = 0; i < count; ++i) {
            const double w = short_cylinder_weight(s, sampler.draw(rng), R * R);
            m.sum += w;
            m.sum_sq += w * w;
            ++m.n;
        }
        return m;
    });
    Moments all;
    for (const auto& m : batches) {
        all.sum += m.sum;
        all.sum_sq += m.sum_sq;
        all.n += m.n;
    }
    const double nn = static_cast<double>(all.n);
    const double mean = all.sum / nn;
    const double var = std::max(0.0, all.sum_sq / nn - mean * mean);
    const double area = kPi * R * R;
    OracleResult r;
    r.samples = all.n;
    r.value = mean / area;
    r.std_error = std::sqrt(var / nn) / area;
    return r;
}

namespace {

// Intercept of the least-squares line through (x_i, y_i).
double intercept(const std::vector<double>& x, const std::vector<double>& y) {
    const double k = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / k;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / k;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return my - (sxy / sxx) * mx;
}

} // namespace

OracleResult oracle_thin_volume(const exc::PreparedSurface& s, std::size_t samples, double eps,
                                const std::vector<double>& ladder, std::uint64_t seed, unsigned workers) {
    if (ladder.size() < 3) throw InvalidArgument("oracle_thin_volume: ladder needs at least 3 rungs");
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        if (!(ladder[i] > 0.0)) throw InvalidArgument("oracle_thin_volume: ladder values must be positive");
        if (i && !(ladder[i] > ladder[i - 1]))
            throw InvalidArgument("oracle_thin_volume: ladder must be strictly increasing");
    }
    if (!(eps > 0.0)) throw InvalidArgument("oracle_thin_volume: eps must be positive");
    if (eps / ladder.front() > s.eps_zero * (1 + 1e-12))
        throw InvalidArgument("oracle_thin_volume: scale eps/R = " + std::to_string(eps / ladder.front()) +
                              " exceeds eps0 = " + std::to_string(s.eps_zero));
    if (samples < kBatches) throw InvalidArgument("oracle_thin_volume: need at least 64 samples");

    std::vector<double> scales;
    for (double R : ladder) scales.push_back(eps / R);
    const SurfaceSampler sampler(s);
    // Common random numbers: every rung sees the same sample points.
    const auto batches = parallel_map(kBatches, workers, [&](std::size_t b) {
        Rng rng = make_rng(seed, Stream::oracle_thin, b);
        const std::size_t count = samples / kBatches + (b < samples % kBatches ? 1 : 0);
        std::vector<double> sums(scales.size(), 0.0);
        for (std::size_t i = 0; i < count; ++i) {
            const DiscSample d = sampler.draw(rng);
            // Rungs are nested: weight at a smaller scale never exceeds a larger one.
            for (std::size_t k = 0; k < scales.size(); ++k) sums[k] += short_cylinder_weight(s, d, scales[k]);
        }
        return std::pair{count, sums};
    });

    OracleResult r;
    std::vector<double> totals(scales.size(), 0.0);
    std::vector<double> batch_estimates;
    for (const auto& [count, sums] : batches) {
        r.samples += count;
        std::vector<double> ratios;
        for (std::size_t k = 0; k < scales.size(); ++k) {
            totals[k] += sums[k];
            ratios.push_back(sums[k] / static_cast<double>(count) / (kPi * scales[k]));
        }
        batch_estimates.push_back(intercept(scales, ratios));
    }
    for (std::size_t k = 0; k < scales.size(); ++k)
        r.rung_values.push_back(totals[k] / static_cast<double>(r.samples) / (kPi * scales[k]));
    r.rung_scales = scales;
    r.value = intercept(scales, r.rung_values);
    const double nb = static_cast<double>(batch_estimates.size());
    const double mb = std::accumulate(batch_estimates.begin(), batch_estimates.end(), 0.0) / nb;
    double ss = 0.0;
    for (double v : batch_estimates) ss += (v - mb) * (v - mb);
    r.std_error = std::sqrt(ss / (nb - 1) / nb);
    return r;
}

double median(std::vector<double> values) {
    if (values.empty()) throw InvalidArgument("median: empty sample");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

std::pair<double, double> bootstrap_median_ci(const std::vector<double>& values, std::size_t resamples,
                                              double level, Rng& rng) {
    if (values.empty()) throw InvalidArgument("bootstrap: empty sample");
    if (resamples < 1) throw InvalidArgument("bootstrap: need at least one resample");
    if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("bootstrap: level must lie in (0,1)");
    std::vector<double> meds;
    meds.reserve(resamples);
    std::vector<double> draw(values.size());
    for (std::size_t b = 0; b < resamples; ++b) {
        for (auto& v : draw) v = values[static_cast<std::size_t>(rng() % values.size())];
        meds.push_back(median(draw));
    }
    std::sort(meds.begin(), meds.end());
    const double alpha = (1.0 - level) / 2.0;
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(meds.size() - 1);
        const auto i = static_cast<std::size_t>(std::floor(pos));
        const double frac = pos - static_cast<double>(i);
        return i + 1 < meds.size() ? meds[i] * (1 - frac) + meds[i + 1] * frac : meds[i];
    };
    return {quantile(alpha), quantile(1.0 - alpha)};
}

EstimateReport estimate_c_area(const exc::PreparedSurface& s, const EnsembleConfig& cfg) {
    if (cfg.rays < 30) throw InvalidArgument("estimate_c_area: ensemble needs at least 30 rays");
    if (cfg.T_grid.empty()) throw InvalidArgument("estimate_c_area: empty horizon grid");
    for (std::size_t i = 0; i < cfg.T_grid.size(); ++i) {
        if (!(cfg.T_grid[i] >= kE)) throw InvalidArgument("estimate_c_area: horizons must be >= e");
        if (i && !(cfg.T_grid[i] > cfg.T_grid[i - 1]))
            throw InvalidArgument("estimate_c_area: horizon grid must be increasing");
    }
    if (!(cfg.eps > 0.0 && cfg.eps <= s.eps_zero * (1 + 1e-12)))
        throw InvalidArgument("estimate_c_area: eps must lie in (0, eps0 = " + std::to_string(s.eps_zero) + "]");
    if (cfg.s_xi < 0.0) throw InvalidArgument("estimate_c_area: s_xi must be >= 0");
    exc::xi_prime(cfg.xi);

    const double t_max = cfg.T_grid.back();
    const unsigned bits = exc::direction_bits(t_max, cfg.convention);
    EstimateReport rep;
    rep.seed = cfg.seed;
    rep.level = cfg.level;
    rep.ensemble = cfg.rays;
    rep.trajectories = parallel_map(cfg.rays, cfg.workers, [&](std::size_t i) {
        Rng rng = make_rng(cfg.seed, Stream::rays, i);
        exc::TrajectoryConfig tc;
        tc.theta = exc::sample_direction(rng, bits);
        tc.T = t_max;
        tc.eps = cfg.eps;
        tc.xi = cfg.xi;
        tc.s_xi = cfg.s_xi;
        tc.convention = cfg.convention;
        const auto traj = exc::enumerate_excursions(s, tc);
        TrajectorySummary ts;
        ts.id = i;
        ts.truncated = traj.truncated;
        ts.records = traj.records.size();
        ts.overlaps = traj.overlaps;
        ts.per_T = trimmed_series(traj.records, cfg.T_grid, cfg.xi, cfg.s_xi);
        return ts;
    });

    for (std::size_t k = 0; k < cfg.T_grid.size(); ++k) {
        std::vector<double> tw, ex;
        HorizonEstimate h;
        h.T = cfg.T_grid[k];
        for (const auto& ts : rep.trajectories) {
            if (ts.truncated) continue;
            tw.push_back(ts.per_T[k].twist.value / 4.0);
            ex.push_back(ts.per_T[k].excursion.value / (2.0 * cfg.eps));
            if (ts.per_T[k].twist.empty) ++h.empty;
        }
        if (tw.empty()) throw PrecisionExhausted("estimate_c_area: every trajectory was truncated");
        h.c_twist = median(tw);
        h.c_excursion = median(ex);
        rep.per_T.push_back(h);
        if (k + 1 == cfg.T_grid.size()) {
            rep.used = tw.size();
            rep.excluded_truncated = cfg.rays - tw.size();
            rep.point = h.c_twist;
            Rng rng = make_rng(cfg.seed, Stream::bootstrap, 0);
            const auto [lo, hi] = bootstrap_median_ci(tw, cfg.bootstrap, cfg.level, rng);
            rep.lo = std::min(lo, rep.point);
            rep.hi = std::max(hi, rep.point);
        }
    }
    return rep;
}

} // namespace twistlaw::sv
