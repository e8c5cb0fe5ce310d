#include "twistlaw/hyperbolic.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "twistlaw/error.hpp"

namespace twistlaw::hyp {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

// log tan(alpha/2) from log sin(alpha) and cos(alpha).
long double log_tan_half(long double log_sin, long double cos_a) {
    return log_sin - std::log1p(cos_a);
}

} // namespace

UhpPoint UhpPoint::make(double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y))
        throw InvalidArgument("UhpPoint: non-finite coordinate");
    if (!(y > 0.0))
        throw InvalidArgument("UhpPoint: y must be > 0");
    return {x, y};
}

BoundaryPoint BoundaryPoint::at(double x) {
    if (!std::isfinite(x)) throw InvalidArgument("BoundaryPoint: non-finite coordinate");
    return {x, false};
}

Mobius Mobius::make(double a, double b, double c, double d) {
    const double det = a * d - b * c;
    if (std::abs(det - 1.0) > 1e-12)
        throw InvalidArgument("Mobius: determinant " + std::to_string(det) + " is not 1");
    return {a, b, c, d};
}

UhpPoint Mobius::apply(UhpPoint z) const {
    // (az+b)/(cz+d) with Im = y / |cz+d|^2 for det 1.
    const double den_re = c * z.x + d;
    const double den_im = c * z.y;
    const double den2 = den_re * den_re + den_im * den_im;
    const double num_re = a * z.x + b;
    const double num_im = a * z.y;
    return {(num_re * den_re + num_im * den_im) / den2, z.y / den2};
}

BoundaryPoint Mobius::apply(BoundaryPoint p) const {
    if (p.infinite) {
        if (c == 0.0) return BoundaryPoint::infinity();
        return {a / c, false};
    }
    const double den = c * p.x + d;
    if (den == 0.0) return BoundaryPoint::infinity();
    return {(a * p.x + b) / den, false};
}

Mobius Mobius::operator*(const Mobius& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

UhpPoint mobius_apply(const Mobius& m, UhpPoint z) {
    const double det = m.a * m.d - m.b * m.c;
    if (std::abs(det - 1.0) > 1e-12)
        throw InvalidArgument("mobius_apply: determinant is not 1");
    return m.apply(z);
}

double distance(UhpPoint z, UhpPoint w) {
    const double dx = z.x - w.x;
    const double dy = z.y - w.y;
    return 2.0 * std::asinh(std::hypot(dx, dy) / (2.0 * std::sqrt(z.y * w.y)));
}

GeodesicRay::GeodesicRay(UhpPoint base, BoundaryPoint endpoint)
    : base_(UhpPoint::make(base.x, base.y)), endpoint_(endpoint) {
    if (endpoint_.infinite) {
        backward_ = BoundaryPoint::at(base_.x);
        return;
    }
    if (endpoint_.x == base_.x) {
        backward_ = BoundaryPoint::infinity();
        return;
    }
    const double e = endpoint_.x;
    center_ = (base_.x * base_.x + base_.y * base_.y - e * e) / (2.0 * (base_.x - e));
    radius_ = std::abs(e - center_);
    backward_ = BoundaryPoint::at(2.0 * center_ - e);
    const double sigma = e > backward_.x ? 1.0 : -1.0;
    const double sin_a = base_.y / radius_;
    const double cos_a = -sigma * (base_.x - center_) / radius_;
    tan_half_base_ = cos_a > -0.5 ? sin_a / (1.0 + cos_a) : (1.0 - cos_a) / sin_a;
}

UhpPoint GeodesicRay::at(double t) const {
    if (endpoint_.infinite) return {base_.x, base_.y * std::exp(t)};
    if (backward_.infinite) return {base_.x, base_.y * std::exp(-t)};
    const double sigma = endpoint_.x > backward_.x ? 1.0 : -1.0;
    // tan(alpha/2) = tau; 1 + cos(alpha) = 2/(1+tau^2), sin(alpha) = 2 tau/(1+tau^2).
    const double log_tau = std::log(tan_half_base_) + t;
    double one_plus_cos;
    double sin_a;
    if (log_tau > 0.0) {
        const double u = std::exp(-log_tau);
        one_plus_cos = 2.0 * u * u / (1.0 + u * u);
        sin_a = 2.0 * u / (1.0 + u * u);
    } else {
        const double tau = std::exp(log_tau);
        one_plus_cos = 2.0 / (1.0 + tau * tau);
        sin_a = 2.0 * tau / (1.0 + tau * tau);
    }
    // x = center - sigma r cos(alpha) = endpoint - sigma r (1 + cos(alpha))
    return {endpoint_.x - sigma * radius_ * one_plus_cos, radius_ * sin_a};
}

GeodesicRay GeodesicRay::transformed(const Mobius& m) const {
    return GeodesicRay(m.apply(base_), m.apply(endpoint_));
}

GeodesicRay geodesic_ray(UhpPoint base, BoundaryPoint endpoint) {
    return GeodesicRay(base, endpoint);
}

Horoball Horoball::make(BoundaryPoint tangency, double diameter, double weight, std::string label) {
    if (!(diameter > 0.0) || !std::isfinite(diameter))
        throw InvalidArgument("Horoball: diameter must be positive");
    if (!(weight > 0.0 && weight <= 1.0))
        throw InvalidArgument("Horoball: weight must lie in (0, 1]");
    return {tangency, diameter, weight, std::move(label)};
}

std::optional<ExcursionGeometry> intersect_in_frame(const CuspFrame& f) {
    const long double h = f.height;
    const long double log_h = std::log(h);
    const long double tol = static_cast<long double>(kGeomTol);
    ExcursionGeometry g;

    if (f.fwd_infinite) {
        // Straight up into the cusp.
        g.phi = 0.0L;
        if (f.base_log_y >= log_h - tol) {
            g.base_inside = true;
            g.t_entry = 0.0;
            g.phi_max = kPi / 2;
        } else {
            g.t_entry = static_cast<double>(log_h - f.base_log_y);
            g.phi_max = std::asin(std::exp(f.base_log_y - log_h));
        }
        g.t_exit.reset();
        g.horocyclic_length = std::numeric_limits<long double>::infinity();
        return g;
    }
    if (f.back_infinite) {
        // Straight down, away from the cusp.
        if (f.base_log_y <= log_h + tol) return std::nullopt;
        g.base_inside = true;
        g.t_entry = 0.0;
        g.t_exit = static_cast<double>(f.base_log_y - log_h);
        g.phi = kPi;
        g.phi_max = kPi / 2;
        g.horocyclic_length = 0.0L;
        return g;
    }

    const long double m = (f.back + f.fwd) / 2;
    const long double r = std::abs(f.fwd - f.back) / 2;
    const long double sigma = f.fwd > f.back ? 1.0L : -1.0L;
    if (r < h * (1 - tol)) return std::nullopt;

    const long double log_r = std::log(r);
    const long double log_sin_w = f.base_log_y - log_r;
    const long double sin_w = std::exp(log_sin_w);
    const long double cos_w = -sigma * (f.base_x - m) / r;
    const long double alpha_w = std::atan2(sin_w, cos_w);

    const long double ratio = std::min(1.0L, h / r);
    const long double alpha_e = std::asin(ratio);
    const long double alpha_x = kPi - alpha_e;
    const long double half_chord = r * std::sqrt(std::max(0.0L, 1 - ratio * ratio));
    const long double lt_e = log_tan_half(std::log(ratio), std::sqrt(std::max(0.0L, 1 - ratio * ratio)));
    const long double lt_x = -lt_e;
    const long double lt_w = log_tan_half(log_sin_w, cos_w);

    g.phi = alpha_w;
    if (alpha_w < alpha_e - tol) {
        g.t_entry = static_cast<double>(lt_e - lt_w);
        g.t_exit = static_cast<double>(lt_x - lt_w);
        g.phi_max = std::asin(std::min(1.0L, std::exp(f.base_log_y - log_h)));
        g.horocyclic_length = 2 * half_chord / h;
    } else if (alpha_w <= alpha_x + tol) {
        g.base_inside = true;
        g.t_entry = 0.0;
        g.t_exit = static_cast<double>(std::max(0.0L, lt_x - lt_w));
        g.phi_max = kPi / 2;
        const long double x_exit = m + sigma * half_chord;
        g.horocyclic_length = std::abs(x_exit - f.base_x) / h;
    } else {
        return std::nullopt;
    }
    return g;
}

std::optional<ExcursionGeometry> intersect(const GeodesicRay& ray, const Horoball& h) {
    CuspFrame f;
    if (h.tangency.infinite) {
        f.back = ray.backward_endpoint().x;
        f.back_infinite = ray.backward_endpoint().infinite;
        f.fwd = ray.endpoint().x;
        f.fwd_infinite = ray.endpoint().infinite;
        f.base_x = ray.base().x;
        f.base_log_y = std::log(static_cast<long double>(ray.base().y));
        f.height = 1.0L / h.diameter;
        return intersect_in_frame(f);
    }
    // z -> -1/(z - tau) sends the tangency to infinity and the horoball to y >= 1/diameter.
    const long double tau = h.tangency.x;
    auto image = [tau](const BoundaryPoint& p, long double& out) {
        if (p.infinite) {
            out = 0.0L;
            return false;
        }
        const long double d = p.x - tau;
        if (d == 0.0L) return true;
        out = -1.0L / d;
        return false;
    };
    f.fwd_infinite = image(ray.endpoint(), f.fwd);
    f.back_infinite = image(ray.backward_endpoint(), f.back);
    const long double dx = ray.base().x - tau;
    const long double y = ray.base().y;
    const long double n2 = dx * dx + y * y;
    f.base_x = -dx / n2;
    f.base_log_y = std::log(y) - std::log(n2);
    f.height = 1.0L / h.diameter;
    return intersect_in_frame(f);
}

double excursion_exact(const GeodesicRay& ray, const Horoball& h) {
    const auto g = intersect(ray, h);
    if (!g) throw InvalidArgument("excursion_exact: ray misses the horoball");
    if (g->unbounded())
        throw UnboundedExcursion("excursion_exact: ray ends at the tangency point; excursion is partial");
    return static_cast<double>(g->horocyclic_length);
}

double excursion_angle(const ExcursionGeometry& geom) {
    if (geom.phi > geom.phi_max)
        throw DomainError("excursion_angle: phi exceeds phi_max");
    if (geom.phi == 0.0L)
        throw UnboundedExcursion("excursion_angle: ray aimed at the tangency point");
    return static_cast<double>(geom.phi_max / geom.phi);
}

} // namespace twistlaw::hyp
