#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <utility>

#include "twistlaw/hyperbolic.hpp"

namespace oracle {

// Curvature -1 length of the horocycle arc cut out by the complete geodesic with
// ideal endpoints (back, fwd), found by golden-section search and bisection along
// the geodesic and Simpson integration of |dz|/y along the horocycle.
// nullopt when the geodesic misses the horoball.
inline std::optional<double> horocycle_arclength(const twistlaw::hyp::BoundaryPoint& back,
                                                 const twistlaw::hyp::BoundaryPoint& fwd,
                                                 const twistlaw::hyp::Horoball& h) {
    using P = std::pair<double, double>;
    std::function<P(double)> at;
    double lo, hi;
    if (back.infinite || fwd.infinite) {
        const double x0 = back.infinite ? fwd.x : back.x;
        at = [x0](double s) { return P{x0, std::exp(s)}; };
        lo = -60.0;
        hi = 60.0;
    } else {
        const double c = 0.5 * (back.x + fwd.x), r = 0.5 * std::abs(fwd.x - back.x);
        at = [c, r](double s) { return P{c + r * std::cos(s), r * std::sin(s)}; };
        lo = 1e-15;
        hi = std::numbers::pi - 1e-15;
    }
    const double R = 0.5 * h.diameter;
    auto inside = [&](double s) {
        const auto [x, y] = at(s);
        if (h.tangency.infinite) return y - 1.0 / h.diameter;
        return R * R - ((x - h.tangency.x) * (x - h.tangency.x) + (y - R) * (y - R));
    };
    // golden-section search for the deepest point
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    for (int i = 0; i < 300; ++i) {
        const double m1 = b - g * (b - a), m2 = a + g * (b - a);
        if (inside(m1) < inside(m2)) a = m1;
        else b = m2;
    }
    const double top = 0.5 * (a + b);
    if (inside(top) <= 0.0) return std::nullopt;
    auto root = [&](double out, double in) {
        for (int i = 0; i < 300; ++i) {
            const double mid = 0.5 * (out + in);
            (inside(mid) > 0.0 ? in : out) = mid;
        }
        return at(0.5 * (out + in));
    };
    const P e1 = root(lo, top), e2 = root(hi, top);
    const int N = 200000;
    if (h.tangency.infinite) {
        // |dz|/y with y = 1/diameter constant along the arc
        double acc = 0.0;
        for (int i = 0; i < N; ++i) acc += (std::abs(e2.first - e1.first) / N) * h.diameter;
        return acc;
    }
    // horocycle (t + R sin psi, R - R cos psi), psi in (0, 2 pi); ds = dpsi / (1 - cos psi)
    auto psi = [&](const P& p) {
        double v = std::atan2(p.first - h.tangency.x, R - p.second);
        return v < 0.0 ? v + 2.0 * std::numbers::pi : v;
    };
    double p1 = psi(e1), p2 = psi(e2);
    if (p1 > p2) std::swap(p1, p2);
    const double step = (p2 - p1) / N;
    auto f = [](double s) { return 1.0 / (1.0 - std::cos(s)); };
    double acc = f(p1) + f(p2);
    for (int i = 1; i < N; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(p1 + i * step);
    return acc * step / 3.0;
}

} // namespace oracle
