#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles/deep_crossing.hpp"
#include "oracles/fixtures.hpp"
#include "oracles/frozen.hpp"
#include "oracles/horocycle_quadrature.hpp"
#include "twistlaw/error.hpp"
#include "twistlaw/hyperbolic.hpp"

using namespace twistlaw;
using namespace twistlaw::hyp;

using fixtures::random_crossing;

TEST_CASE("mobius_apply: identity, translation and inversion") {
    const auto z = UhpPoint::make(0.0, 1.0);
    CHECK(mobius_apply(Mobius::identity(), z).x == 0.0);
    CHECK(mobius_apply(Mobius::identity(), z).y == 1.0);
    const auto t = mobius_apply(Mobius::make(1, 1, 0, 1), z);
    CHECK(t.x == doctest::Approx(1.0));
    CHECK(t.y == doctest::Approx(1.0));
    const auto s = mobius_apply(Mobius::make(0, -1, 1, 0), UhpPoint::make(0.0, 2.0));
    CHECK(s.x == doctest::Approx(0.0));
    CHECK(s.y == doctest::Approx(0.5));
    CHECK_THROWS_AS(Mobius::make(1, 1, 1, 1), InvalidArgument);
}

TEST_CASE("UhpPoint rejects the boundary and non-finite coordinates") {
    CHECK_THROWS_AS(UhpPoint::make(0.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(UhpPoint::make(0.0, -1.0), InvalidArgument);
    CHECK_THROWS_AS(UhpPoint::make(NAN, 1.0), InvalidArgument);
}

TEST_CASE("geodesic_ray: vertical rays and the unit semicircle") {
    const auto i = UhpPoint::make(0.0, 1.0);
    const GeodesicRay up(i, BoundaryPoint::infinity());
    const GeodesicRay down(i, BoundaryPoint::at(0.0));
    for (double t : {0.0, 0.5, 2.0, 7.0}) {
        CHECK(up.at(t).x == doctest::Approx(0.0));
        CHECK(up.at(t).y == doctest::Approx(std::exp(t)));
        CHECK(down.at(t).y == doctest::Approx(std::exp(-t)));
    }
    const GeodesicRay arc(i, BoundaryPoint::at(1.0));
    CHECK_FALSE(arc.vertical());
    CHECK(arc.center() == doctest::Approx(0.0));
    CHECK(arc.radius() == doctest::Approx(1.0));
    CHECK(arc.backward_endpoint().x == doctest::Approx(-1.0));
    const auto far = arc.at(20.0);
    CHECK(std::abs(far.x - 1.0) < 1e-8);
}

TEST_CASE("geodesic_ray: parameterization is unit speed up to t = 30") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 200; ++k) {
        const GeodesicRay ray(UhpPoint::make(u(rng), std::exp(u(rng))), BoundaryPoint::at(u(rng)));
        for (double t : {0.0, 1e-3, 0.7, 3.0, 10.0, 20.0, 30.0})
            CHECK(std::abs(distance(ray.base(), ray.at(t)) - t) <= 1e-12 * std::max(1.0, t));
    }
}

TEST_CASE("intersect: spec examples") {
    const auto i = UhpPoint::make(0.0, 1.0);
    const auto g1 = intersect(GeodesicRay(i, BoundaryPoint::infinity()),
                              Horoball::make(BoundaryPoint::infinity(), 1.0 / std::numbers::e));
    REQUIRE(g1);
    CHECK(g1->t_entry == doctest::Approx(1.0));
    CHECK(g1->unbounded());

    const auto g2 = intersect(GeodesicRay(i, BoundaryPoint::at(0.0)), Horoball::make(BoundaryPoint::at(0.0), 1.0));
    REQUIRE(g2);
    CHECK(std::abs(g2->t_entry) < 1e-12);
    CHECK(g2->unbounded());

    CHECK_FALSE(intersect(GeodesicRay(i, BoundaryPoint::at(1.0)), Horoball::make(BoundaryPoint::at(0.0), 0.1)));
}

TEST_CASE("Horoball::make validates diameter and weight") {
    CHECK_THROWS_AS(Horoball::make(BoundaryPoint::at(0.0), 0.0), InvalidArgument);
    CHECK_THROWS_AS(Horoball::make(BoundaryPoint::at(0.0), 1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(Horoball::make(BoundaryPoint::at(0.0), 1.0, 1.5), InvalidArgument);
}

TEST_CASE("excursion_exact: chords at height c have length 2/c") {
    for (double c : {0.1, 0.5, 0.9}) {
        // semicircle of radius sqrt(1 + c^2) about 0 passes through (-1, c) and (1, c)
        const double rho = std::sqrt(1.0 + c * c);
        const double alpha = 3.1;
        const GeodesicRay ray(UhpPoint::make(rho * std::cos(alpha), rho * std::sin(alpha)), BoundaryPoint::at(rho));
        const double len = excursion_exact(ray, Horoball::make(BoundaryPoint::infinity(), 1.0 / c));
        CHECK(len == doctest::Approx(2.0 / c).epsilon(1e-10));
    }
}

TEST_CASE("excursion_exact: tangent ray has zero excursion") {
    // unit semicircle tangent to y = 1 at its top
    const GeodesicRay ray(UhpPoint::make(std::cos(3.0), std::sin(3.0)), BoundaryPoint::at(1.0));
    const double len = excursion_exact(ray, Horoball::make(BoundaryPoint::infinity(), 1.0));
    CHECK(len == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("excursion_exact: geodesic (-1,1) through y >= 1/2 matches quadrature") {
    const GeodesicRay ray(UhpPoint::make(std::cos(3.0), std::sin(3.0)), BoundaryPoint::at(1.0));
    const Horoball ball = Horoball::make(BoundaryPoint::infinity(), 2.0);
    const auto quad = oracle::horocycle_arclength(ray.backward_endpoint(), ray.endpoint(), ball);
    REQUIRE(quad);
    CHECK(*quad == doctest::Approx(frozen::kUnitChordLength).epsilon(1e-9));
    CHECK(excursion_exact(ray, ball) == doctest::Approx(frozen::kUnitChordLength).epsilon(1e-12));
}

TEST_CASE("excursion_exact: agrees with horocycle quadrature on random finite horoballs") {
    std::mt19937_64 rng(2);
    for (int k = 0; k < 40; ++k) {
        const auto c = random_crossing(rng);
        const auto quad = oracle::horocycle_arclength(c.ray.backward_endpoint(), c.ray.endpoint(), c.ball);
        REQUIRE(quad);
        CHECK(excursion_exact(c.ray, c.ball) == doctest::Approx(*quad).epsilon(1e-7));
    }
}

TEST_CASE("excursion_exact: errors") {
    const auto i = UhpPoint::make(0.0, 1.0);
    CHECK_THROWS_AS(excursion_exact(GeodesicRay(i, BoundaryPoint::at(0.0)), Horoball::make(BoundaryPoint::at(0.0), 0.5)),
                    UnboundedExcursion);
    CHECK_THROWS_AS(excursion_exact(GeodesicRay(i, BoundaryPoint::at(1.0)), Horoball::make(BoundaryPoint::at(0.0), 0.1)),
                    InvalidArgument);
}

TEST_CASE("excursion_angle: ratio, boundary case and errors") {
    ExcursionGeometry g;
    g.t_exit = 1.0;
    g.phi_max = 0.1L;
    g.phi = 0.02L;
    CHECK(excursion_angle(g) == doctest::Approx(5.0));
    g.phi = 0.1L;
    CHECK(excursion_angle(g) == doctest::Approx(1.0));
    g.phi = 0.0L;
    CHECK_THROWS_AS(excursion_angle(g), UnboundedExcursion);
    g.phi = 0.2L;
    CHECK_THROWS_AS(excursion_angle(g), DomainError);
}

TEST_CASE("isometry invariance of excursion_exact over 1000 random pairs") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 1000; ++k) {
        const auto c = random_crossing(rng);
        const Mobius m = fixtures::random_mobius(rng);
        const double before = excursion_exact(c.ray, c.ball);
        const double after = excursion_exact(c.ray.transformed(m), fixtures::transform(m, c.ball));
        CHECK(after == doctest::Approx(before).epsilon(1e-9));
    }
}

TEST_CASE("additive error between exact and angle excursions stays below the frozen constant") {
    auto rng = make_rng(1, Stream::calibration, 1);
    for (int k = 0; k < 1000; ++k) {
        const auto d = oracle::deep_crossing(rng);
        const auto g = intersect(d.ray, d.ball);
        REQUIRE(g);
        const double exact = kTeichmullerScale * excursion_exact(d.ray, d.ball);
        REQUIRE(exact >= 2.0 * (1 - 1e-9));
        CHECK(std::abs(exact - excursion_angle(*g)) <= frozen::kAdditiveConstant);
    }
}

TEST_CASE("monotonicity: deeper rays have smaller phi, larger ratio and larger excursion") {
    const auto base = UhpPoint::make(0.0, 0.01);
    const Horoball ball = Horoball::make(BoundaryPoint::infinity(), 1.0);
    double prev_phi = 10.0, prev_ratio = 0.0, prev_exact = 0.0;
    for (double end : {3.0, 5.0, 20.0, 100.0, 1000.0}) {
        const GeodesicRay ray(base, BoundaryPoint::at(end));
        const auto g = intersect(ray, ball);
        REQUIRE(g);
        const double ratio = excursion_angle(*g);
        const double exact = excursion_exact(ray, ball);
        CHECK(g->phi < prev_phi);
        CHECK(ratio > prev_ratio);
        CHECK(exact > prev_exact);
        prev_phi = static_cast<double>(g->phi);
        prev_ratio = ratio;
        prev_exact = exact;
    }
}

TEST_CASE("excursion geometry invariants: 0 < phi <= phi_max < pi, t_exit > t_entry") {
    std::mt19937_64 rng(4);
    for (int k = 0; k < 300; ++k) {
        const auto c = random_crossing(rng);
        const auto g = intersect(c.ray, c.ball);
        REQUIRE(g);
        CHECK(g->phi > 0.0L);
        CHECK(g->phi <= g->phi_max);
        CHECK(g->phi_max < std::numbers::pi_v<long double>);
        CHECK(*g->t_exit > g->t_entry);
    }
}
