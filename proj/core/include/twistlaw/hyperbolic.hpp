#pragma once

#include <optional>
#include <string>

namespace twistlaw::hyp {

// Metric scale of the Teichmuller disc relative to the curvature -1 metric on the
// upper half-plane: Teichmuller time and horocyclic lengths are half the
// hyperbolic ones (the diagonal flow moves i to e^{2t} i).
inline constexpr double kTeichmullerScale = 0.5;

inline constexpr double kGeomTol = 1e-12;

struct UhpPoint {
    double x = 0.0;
    double y = 1.0;

    // Throws InvalidArgument unless y > 0 and both coordinates are finite.
    static UhpPoint make(double x, double y);
};

// Point of R u {inf}.
struct BoundaryPoint {
    double x = 0.0;
    bool infinite = false;

    static BoundaryPoint at(double x);
    static BoundaryPoint infinity() { return {0.0, true}; }

    friend bool operator==(const BoundaryPoint&, const BoundaryPoint&) = default;
};

// Element of SL(2,R) acting by z -> (az+b)/(cz+d).
struct Mobius {
    double a = 1, b = 0, c = 0, d = 1;

    // Throws InvalidArgument when |det - 1| > 1e-12.
    static Mobius make(double a, double b, double c, double d);
    static Mobius identity() { return {}; }

    UhpPoint apply(UhpPoint z) const;
    BoundaryPoint apply(BoundaryPoint p) const;
    Mobius inverse() const { return {d, -b, -c, a}; }
    Mobius operator*(const Mobius& o) const;
};

UhpPoint mobius_apply(const Mobius& m, UhpPoint z);

double distance(UhpPoint z, UhpPoint w);

// Unit-speed (curvature -1) geodesic ray from `base` to the ideal point `endpoint`.
class GeodesicRay {
public:
    GeodesicRay(UhpPoint base, BoundaryPoint endpoint);

    const UhpPoint& base() const { return base_; }
    const BoundaryPoint& endpoint() const { return endpoint_; }
    // The other ideal endpoint of the complete geodesic through base.
    const BoundaryPoint& backward_endpoint() const { return backward_; }

    UhpPoint at(double t) const;

    GeodesicRay transformed(const Mobius& m) const;

    // Semicircle data; meaningful only when !vertical().
    bool vertical() const { return endpoint_.infinite || backward_.infinite; }
    double center() const { return center_; }
    double radius() const { return radius_; }

private:
    UhpPoint base_;
    BoundaryPoint endpoint_;
    BoundaryPoint backward_;
    double center_ = 0.0;
    double radius_ = 0.0;
    // tan(alpha/2) of the base, alpha measured from the backward endpoint.
    double tan_half_base_ = 0.0;
};

GeodesicRay geodesic_ray(UhpPoint base, BoundaryPoint endpoint);

// Closed disc tangent to the real axis at `tangency` with Euclidean diameter
// `diameter`; for tangency at infinity the region y >= 1/diameter.
struct Horoball {
    BoundaryPoint tangency;
    double diameter = 1.0;
    double weight = 1.0;
    std::string label;

    // Throws InvalidArgument unless diameter > 0 and 0 < weight <= 1.
    static Horoball make(BoundaryPoint tangency, double diameter, double weight = 1.0,
                         std::string label = {});

    // Height of the horoball after an isometry moving the tangency to infinity
    // (for the normalisation z -> -1/(z - tangency)).
    double height_at_infinity() const { return 1.0 / diameter; }
};

struct ExcursionGeometry {
    double t_entry = 0.0;             // curvature -1 arclength from the base
    std::optional<double> t_exit;     // nullopt: the ray ends at the tangency
    long double phi = 0.0L;           // angle at the base between the ray and the ray to the tangency
    long double phi_max = 0.0L;       // angle between the ray to the tangency and the tangent ray
    long double horocyclic_length = 0.0L; // curvature -1 length of the projection; inf when unbounded
    bool base_inside = false;

    bool unbounded() const { return !t_exit.has_value(); }
};

// A geodesic written in the frame where the horoball is {y >= height}. Boundary
// points are given as long doubles with an `infinite` flag; the base height is
// passed as a logarithm so that points far below the horoball (heights well
// under the double range) stay representable.
struct CuspFrame {
    long double back = 0.0L;
    bool back_infinite = false;
    long double fwd = 0.0L;
    bool fwd_infinite = false;
    long double base_x = 0.0L;
    long double base_log_y = 0.0L;
    long double height = 1.0L;
};

std::optional<ExcursionGeometry> intersect_in_frame(const CuspFrame& frame);

// Entry/exit data of the ray in the (closed) horoball; nullopt when the ray misses it
// or has already left it.
std::optional<ExcursionGeometry> intersect(const GeodesicRay& ray, const Horoball& h);

// Curvature -1 horocyclic length of the closest-point projection of the ray's
// passage through h onto the boundary horocycle. Throws UnboundedExcursion when
// the ray ends at the tangency, InvalidArgument when it misses h.
double excursion_exact(const GeodesicRay& ray, const Horoball& h);

// phi_max / phi. Throws UnboundedExcursion for phi == 0, DomainError for phi > phi_max.
double excursion_angle(const ExcursionGeometry& geom);

} // namespace twistlaw::hyp
