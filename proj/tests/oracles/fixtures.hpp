#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "twistlaw/error.hpp"
#include "twistlaw/hyperbolic.hpp"
#include "twistlaw/origami.hpp"

namespace fixtures {

using twistlaw::flat::Origami;

inline Origami l_origami() { return twistlaw::flat::parse_origami("3; (1 2); (1 3)"); }

// Staircase: h pairs (1 2)(3 4)..., v pairs (2 3)(4 5)...
inline Origami staircase(int n) {
    Origami o{n, twistlaw::flat::identity_perm(n), twistlaw::flat::identity_perm(n)};
    for (int i = 0; i + 1 < n; i += 2) std::swap(o.h[i], o.h[i + 1]);
    for (int i = 1; i + 1 < n; i += 2) std::swap(o.v[i], o.v[i + 1]);
    return o;
}

inline bool connected(const Origami& o) {
    try {
        twistlaw::flat::validate(o);
        return true;
    } catch (const twistlaw::InvalidArgument&) {
        return false;
    }
}

inline Origami random_origami(std::mt19937_64& rng, int n) {
    for (;;) {
        Origami o{n, twistlaw::flat::identity_perm(n), twistlaw::flat::identity_perm(n)};
        std::shuffle(o.h.begin(), o.h.end(), rng);
        std::shuffle(o.v.begin(), o.v.end(), rng);
        if (connected(o)) return o;
    }
}

inline std::vector<Origami> test_origamis() {
    std::vector<Origami> out{Origami::torus(), l_origami(), staircase(4), staircase(5),
                             twistlaw::flat::parse_origami("4; (1 2 3 4); (1 2)")};
    std::mt19937_64 rng(20240611);
    for (int n : {5, 6, 7}) out.push_back(random_origami(rng, n));
    return out;
}

inline twistlaw::hyp::Mobius random_mobius(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 0.7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const double a = std::exp(g(rng)), b = u(rng), c = u(rng);
    return twistlaw::hyp::Mobius::make(a, b, c, (1.0 + b * c) / a);
}

// Image of a horoball: tangent at m(tangency), through the image of its top point.
inline twistlaw::hyp::Horoball transform(const twistlaw::hyp::Mobius& m, const twistlaw::hyp::Horoball& h) {
    using namespace twistlaw::hyp;
    const UhpPoint top = h.tangency.infinite ? UhpPoint::make(0.0, 1.0 / h.diameter)
                                             : UhpPoint::make(h.tangency.x, h.diameter);
    const UhpPoint w = m.apply(top);
    const BoundaryPoint t = m.apply(h.tangency);
    const double d = t.infinite ? 1.0 / w.y : ((w.x - t.x) * (w.x - t.x) + w.y * w.y) / w.y;
    return Horoball::make(t, d, h.weight, h.label);
}

// A random ray together with a horoball it crosses from outside.
struct Crossing {
    twistlaw::hyp::GeodesicRay ray;
    twistlaw::hyp::Horoball ball;
};

inline Crossing random_crossing(std::mt19937_64& rng) {
    using namespace twistlaw::hyp;
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_real_distribution<double> ly(-1.0, 1.0);
    for (;;) {
        const UhpPoint base = UhpPoint::make(u(rng), std::exp(ly(rng)));
        const BoundaryPoint end = BoundaryPoint::at(u(rng));
        const GeodesicRay ray(base, end);
        const double diam = std::exp(2.0 * ly(rng) - 1.0);
        const Horoball ball = Horoball::make(BoundaryPoint::at(end.x + 0.3 * ly(rng)), diam);
        const auto g = intersect(ray, ball);
        if (g && !g->unbounded() && !g->base_inside && *g->t_exit - g->t_entry > 1e-3) return {ray, ball};
    }
}

// Product of four random elementary matrices with entries in [-3, 3].
inline twistlaw::flat::IntMatrix random_unimodular(std::mt19937_64& rng) {
    twistlaw::flat::IntMatrix m;
    std::uniform_int_distribution<long> k(-3, 3);
    for (int i = 0; i < 4; ++i) {
        const long t = k(rng);
        m = (i % 2 == 0) ? twistlaw::flat::IntMatrix{m.a + t * m.c, m.b + t * m.d, m.c, m.d}
                         : twistlaw::flat::IntMatrix{m.a, m.b, m.c + t * m.a, m.d + t * m.b};
    }
    return m;
}

} // namespace fixtures
