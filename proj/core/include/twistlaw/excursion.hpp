#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "twistlaw/continued_fraction.hpp"
#include "twistlaw/origami.hpp"
#include "twistlaw/random.hpp"

namespace twistlaw::exc {

// Teichmuller time is half the curvature -1 arclength; the hyperbolic convention
// keeps the raw arclength (for A/B comparisons only).
enum class TimeConvention { teichmuller, hyperbolic };

double time_scale(TimeConvention c);

// Surface data that every trajectory on the same origami shares.
struct PreparedSurface {
    flat::Origami origami;
    flat::OrbitTable orbit;
    double eps_zero = 0.0;
    std::vector<int> stratum;

    explicit PreparedSurface(const flat::Origami& o);
    double eps_thick_bound() const { return 2.0 * eps_zero; }
};

struct TrajectoryConfig {
    cf::PrecisionReal theta;  // ideal endpoint of the ray from i
    double T = 100.0;
    double eps = 0.1;
    double xi = 2.0;
    double s_xi = 2.0;
    TimeConvention convention = TimeConvention::teichmuller;
    int sweep_q = 8;          // every p/q with q <= sweep_q near theta is also tried
    double margin = 4.0;      // slack, in units of log q, on the denominator cutoff
};

struct ExcursionRecord {
    std::string label;        // "p/q#k": cylinder k in direction (p,q)
    double t_entry = 0.0;
    double t_exit = std::numeric_limits<double>::infinity();
    long double phi = 0.0L;
    long double phi_max = 0.0L;
    double weight = 1.0;      // cylinder area fraction
    double E = 0.0;           // horocyclic length of the projected passage
    double E_area = 0.0;      // weight * E
    double tw = 0.0;          // twist count from the angle formula
    bool complete = false;
    bool base_inside = false;
};

struct Trajectory {
    std::vector<ExcursionRecord> records; // ordered by t_entry
    bool truncated = false;   // theta's precision ran out before the horizon was covered
    std::size_t candidates = 0;
    std::size_t overlaps = 0; // record pairs with different tangencies whose intervals overlap
    double horizon = 0.0;
};

// (1/2) sqrt(1 - 1/xi^2). Throws InvalidArgument for xi <= 1.
double xi_prime(double xi);

// (2A/eps) (sin phi_max / sin phi) sqrt(1 - sin^2 phi / sin^2 phi_max).
// Throws DomainError for phi > phi_max, UnboundedExcursion for phi == 0.
double twist_count(double A, double eps, long double phi, long double phi_max);

// Precision (bits) a sampled endpoint needs for horizon T.
unsigned direction_bits(double T, TimeConvention c = TimeConvention::teichmuller, double margin = 4.0);

// Endpoint of a ray from i with direction uniform in the unit tangent circle,
// rounded to a dyadic with `bits` fractional bits.
cf::PrecisionReal sample_direction(Rng& rng, unsigned bits);

// All excursions with t_entry < T, ordered by entry time. Throws InvalidArgument
// for eps outside (0, thick bound], xi <= 1 or T <= 0.
Trajectory enumerate_excursions(const PreparedSurface& s, const TrajectoryConfig& cfg);

// Records entering before T, with `complete` re-evaluated at horizon T.
std::vector<ExcursionRecord> at_horizon(const std::vector<ExcursionRecord>& records, double T);

struct DroppedSummary {
    std::size_t incomplete = 0, shallow = 0, early = 0;
    double mass_shallow = 0.0, mass_early = 0.0; // sums of E_area
    std::size_t total() const { return incomplete + shallow + early; }
};

struct FilterResult {
    std::vector<ExcursionRecord> kept;
    std::vector<char> kept_mask; // per record of at_horizon(records, T)
    DroppedSummary dropped;
};

// Drops the partial excursions, the shallow ones (E <= 1/xi'), and those entering
// before s_xi; records entering at or after T are ignored.
FilterResult filter_excursions(const std::vector<ExcursionRecord>& records, double xi, double T,
                               double s_xi = 2.0);

} // namespace twistlaw::exc
