#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "twistlaw/excursion.hpp"
#include "twistlaw/hyperbolic.hpp"
#include "twistlaw/random.hpp"

namespace twistlaw::sv {

struct Statistic {
    double value = 0.0;
    bool empty = true; // no kept record entered before T
};

// (sum tw - max tw) / (T log T) over complete records entering before T.
// Throws InvalidArgument for T < e.
Statistic twist_statistic(const std::vector<exc::ExcursionRecord>& kept, double T);
// (sum E_area - max E_area) / (T log T); same conventions.
Statistic excursion_statistic(const std::vector<exc::ExcursionRecord>& kept, double T);

struct HorizonStats {
    double T = 0.0;
    std::size_t n_kept = 0;
    double twist_trimmed = 0.0;
    double area_trimmed = 0.0;
    Statistic twist, excursion;
    exc::DroppedSummary dropped;
};

// Both statistics of one trajectory on a horizon grid (filtered at each horizon).
std::vector<HorizonStats> trimmed_series(const std::vector<exc::ExcursionRecord>& records,
                                         const std::vector<double>& grid, double xi, double s_xi);

// A point of the disc, drawn from its hyperbolic area measure: z in the standard
// modular fundamental domain, together with the orbit element it belongs to.
struct DiscSample {
    hyp::UhpPoint z;
    std::size_t element = 0;
};

class SurfaceSampler {
public:
    explicit SurfaceSampler(const exc::PreparedSurface& s) : surface_(&s) {}
    DiscSample draw(Rng& rng) const;
    const exc::PreparedSurface& surface() const { return *surface_; }

private:
    const exc::PreparedSurface* surface_;
};

// Sum of area fractions of cylinders whose squared unit-area core length at the
// sample is <= bound.
double short_cylinder_weight(const exc::PreparedSurface& s, const DiscSample& d, double bound);

struct OracleResult {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    std::vector<double> rung_values; // thin-volume oracle: per ladder rung
    std::vector<double> rung_scales; // eps / R per rung
};

// Mean of the area Siegel-Veech transform of the radius-R disc indicator,
// divided by pi R^2.
OracleResult oracle_siegel_transform(const exc::PreparedSurface& s, std::size_t samples, double R,
                                     std::uint64_t seed, unsigned workers = 1);

// Weighted measure of the thin part at scale eps/R, over pi eps/R, for each R of
// the ladder; extrapolated to scale 0 by a least-squares line. Throws for fewer
// than 3 rungs, a non-increasing ladder, or eps/R above eps_zero.
OracleResult oracle_thin_volume(const exc::PreparedSurface& s, std::size_t samples, double eps,
                                const std::vector<double>& ladder, std::uint64_t seed,
                                unsigned workers = 1);

struct EnsembleConfig {
    double eps = 0.1;
    double xi = 2.0;
    double s_xi = 2.0;
    std::vector<double> T_grid{500.0, 1000.0, 2000.0};
    std::size_t rays = 100;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::size_t bootstrap = 1000;
    double level = 0.9;
    exc::TimeConvention convention = exc::TimeConvention::teichmuller;
};

struct TrajectorySummary {
    std::size_t id = 0;
    bool truncated = false;
    std::size_t records = 0;
    std::size_t overlaps = 0;
    std::vector<HorizonStats> per_T;
};

struct HorizonEstimate {
    double T = 0.0;
    double c_twist = 0.0;     // median twist statistic / 4
    double c_excursion = 0.0; // median excursion statistic / (2 eps)
    std::size_t empty = 0;    // trajectories without kept records
};

struct EstimateReport {
    double point = 0.0; // c_area estimate at the largest horizon
    double lo = 0.0, hi = 0.0;
    double level = 0.9;
    std::size_t ensemble = 0;
    std::size_t used = 0;
    std::size_t excluded_truncated = 0;
    std::uint64_t seed = 0;
    std::vector<HorizonEstimate> per_T;
    std::vector<TrajectorySummary> trajectories;
};

// Median over trajectories of twist_statistic(T_max)/4 with a percentile bootstrap
// interval. Requires at least 30 rays; truncated trajectories are excluded.
EstimateReport estimate_c_area(const exc::PreparedSurface& s, const EnsembleConfig& cfg);

// Median-of-values bootstrap, shared with the CLI: returns {lo, hi}.
std::pair<double, double> bootstrap_median_ci(const std::vector<double>& values, std::size_t resamples,
                                              double level, Rng& rng);
double median(std::vector<double> values);

} // namespace twistlaw::sv
