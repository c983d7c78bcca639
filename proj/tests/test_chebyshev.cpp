#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "multimin/chebyshev.hpp"
#include "multimin/util.hpp"

using namespace multimin;

namespace {

SetSpec unit_circle(std::size_t samples) {
    std::vector<double> thetas(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        thetas[i] = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(samples);
    }
    return SetSpec::parametric(std::move(thetas), [](double t) { return Point{std::cos(t), std::sin(t)}; }, "circle");
}

const SetSpec two_point = SetSpec::point_cloud({{-1.0}, {1.0}}, "two-point");

}  // namespace

TEST_CASE("distance-excess supremum") {
    SECTION("circle around the center: (norm(y)-1)^2 - norm(y)^2 = 1 - 2 norm(y), maximal at 0") {
        const SetSpec circle = unit_circle(720);
        for (double r : {0.1, 1.0, 5.0}) {
            CHECK(distance_excess_sup({0.0, 0.0}, circle, r) == Catch::Approx(1.0).margin(1e-3));
        }
    }

    SECTION("two points on the line: min((y+-1)^2) - y^2 = 1 - 2|y|") {
        for (double r : {0.3, 1.0, 4.0}) {
            CHECK(distance_excess_sup({0.0}, two_point, r) == 1.0);
        }
    }

    SECTION("shrinking ball recovers delta^2") {
        const SetSpec circle = unit_circle(720);
        const Point u0 = {0.5, 0.0};
        const double delta = dist_to_set(u0, circle);
        const double r = 1e-4;
        const double v = distance_excess_sup(u0, circle, r);
        CHECK(v >= delta * delta);
        CHECK(v <= delta * delta + 2.0 * delta * r + 1e-12);
    }

    SECTION("nondecreasing in the radius") {
        Rng rng(5);
        std::vector<Point> pts;
        for (int i = 0; i < 25; ++i) pts.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
        const SetSpec X = SetSpec::point_cloud(pts);
        const Point u0 = {2.0, 2.0};
        double prev = 0.0;
        for (double r : {0.25, 0.5, 1.0, 2.0}) {
            const double v = distance_excess_sup(u0, X, r);
            CHECK(v >= prev - 1e-9);
            prev = v;
        }
    }

    SECTION("rejects a base point lying on the set") {
        CHECK_THROWS_AS(distance_excess_sup({1.0}, two_point, 1.0), std::invalid_argument);
    }
}

TEST_CASE("admissible radius scan") {
    SECTION("perturbed two-point threshold is exactly (1 - 1 + 0.1)/2") {
        const Perturbation phi = Perturbation::from_values({0.0, 0.1});
        const auto certs = admissible_radius_scan({0.0}, two_point, phi, {0.025, 0.05, 0.1, 0.4});
        REQUIRE(certs.size() == 4);
        for (const auto& c : certs) {
            CHECK(c.threshold() == Catch::Approx(0.05).margin(1e-12));
            CHECK(c.admissible() == (c.r > 0.05));
        }
    }

    SECTION("zero perturbation admits every radius") {
        const Perturbation phi = Perturbation::zero(2);
        for (const auto& c : admissible_radius_scan({0.0}, two_point, phi, {1e-4, 0.1, 2.0})) {
            CHECK(c.admissible());
        }
    }

    SECTION("homogeneity: scaling the geometry rescales the margin") {
        const double scale = 3.0;
        const Perturbation phi = Perturbation::from_values({0.0, 0.1});
        const Perturbation phi_scaled = Perturbation::from_values({0.0, 0.1 * scale * scale});
        const SetSpec scaled = SetSpec::point_cloud({{-scale}, {scale}});
        const auto base = admissible_radius_scan({0.0}, two_point, phi, {0.2});
        const auto big = admissible_radius_scan({0.0}, scaled, phi_scaled, {0.2 * scale});
        CHECK(big.front().margin == Catch::Approx(base.front().margin * scale).epsilon(1e-9));
        CHECK(big.front().admissible() == base.front().admissible());
    }

    SECTION("empty grid is rejected") {
        CHECK_THROWS_AS(admissible_radius_scan({0.0}, two_point, Perturbation::zero(2), {}), std::invalid_argument);
    }
}

TEST_CASE("non-convexity certificates") {
    SECTION("exact two-point set is non-convex") {
        CHECK(nonconvexity_certificate(two_point).nonconvex);
    }

    SECTION("circle is non-convex with a near-center witness") {
        const auto cert = nonconvexity_certificate(unit_circle(720));
        CHECK(cert.nonconvex);
        CHECK(cert.gap > 0.5);
    }

    SECTION("densely sampled segment is not flagged") {
        std::vector<double> ts(1001);
        for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = static_cast<double>(i) / 1000.0;
        const SetSpec segment =
            SetSpec::parametric(std::move(ts), [](double t) { return Point{2.0 * t - 1.0, 0.0}; }, "segment");
        CHECK_FALSE(nonconvexity_certificate(segment).nonconvex);
    }
}

TEST_CASE("double-minimum search") {
    const DoubleMinParams params{Tolerances::value_eps(1.05), Tolerances::separation_eps(2.0), 1e-13, 200, 1};

    SECTION("perturbed two-point witness sits at eps/4") {
        const double eps = 0.1;
        const Perturbation phi = Perturbation::from_values({0.0, eps});
        const auto certs = admissible_radius_scan({0.0}, two_point, phi, {0.1});
        BallLattice lattice{{0.0}, certs[0].r, certs[0].r / 16.0};
        const auto search = find_double_minimum({0.0}, two_point, two_point.samples, phi, certs[0], lattice, params);
        REQUIRE(search.witness.has_value());
        CHECK(search.witness->y0[0] == Catch::Approx(eps / 4.0).margin(1e-6));
        CHECK(search.witness->clusters.size() == 2);
    }

    SECTION("circle with no perturbation: the center is the medial point") {
        const SetSpec circle = unit_circle(720);
        const Perturbation phi = Perturbation::zero(720);
        const auto certs = admissible_radius_scan({0.0, 0.0}, circle, phi, {0.25});
        BallLattice lattice{{0.0, 0.0}, certs[0].r, certs[0].r / 8.0};
        DoubleMinParams p2 = params;
        p2.eps_v = Tolerances::value_eps(1.0);
        const auto search = find_double_minimum({0.0, 0.0}, circle, circle.samples, phi, certs[0], lattice, p2);
        REQUIRE(search.witness.has_value());
        CHECK(norm(search.witness->y0) < 1e-3);
        CHECK(search.witness->clusters.size() >= 2);
    }

    SECTION("symmetric lattice with no perturbation lands exactly on the midpoint") {
        const Perturbation phi = Perturbation::zero(2);
        const auto certs = admissible_radius_scan({0.0}, two_point, phi, {0.2});
        BallLattice lattice{{0.0}, certs[0].r, certs[0].r / 8.0};
        const auto search = find_double_minimum({0.0}, two_point, two_point.samples, phi, certs[0], lattice, params);
        REQUIRE(search.witness.has_value());
        CHECK(search.witness->y0[0] == 0.0);
    }

    SECTION("witness stays strictly inside the ball") {
        const Perturbation phi = Perturbation::from_values({0.0, 0.1});
        const auto certs = admissible_radius_scan({0.0}, two_point, phi, {0.1});
        BallLattice lattice{{0.0}, certs[0].r, certs[0].r / 16.0};
        const auto search = find_double_minimum({0.0}, two_point, two_point.samples, phi, certs[0], lattice, params);
        REQUIRE(search.witness.has_value());
        CHECK(dist(search.witness->y0, {0.0}) < certs[0].r);
    }

    SECTION("inadmissible certificate is rejected") {
        RadiusCertificate bad;
        bad.r = 0.01;
        bad.delta = 1.0;
        bad.excess_sup = 1.0;
        bad.osc_phi = 0.1;
        bad.margin = bad.r - bad.threshold();
        BallLattice lattice{{0.0}, 0.01, 0.002};
        CHECK_THROWS_AS(
            find_double_minimum({0.0}, two_point, two_point.samples, Perturbation::from_values({0.0, 0.1}), bad,
                                lattice, params),
            std::invalid_argument);
    }
}

TEST_CASE("double-minimum verification oracle") {
    SECTION("the two-point witness re-verifies with equal values") {
        const double eps = 0.1;
        const Perturbation phi = Perturbation::from_values({0.0, eps});
        const auto rep = verify_double_minimum({eps / 4.0}, two_point, two_point.samples, phi, 1e-9, 0.5);
        REQUIRE(rep.cluster_count == 2);
        CHECK(rep.value_spread <= 1e-12);
    }

    SECTION("off the medial axis the projection is unique") {
        const SetSpec circle = unit_circle(720);
        const auto rep = verify_double_minimum({0.5, 0.0}, circle, circle.samples, Perturbation::zero(720),
                                               Tolerances::value_eps(0.25), Tolerances::separation_eps(2.0));
        CHECK(rep.cluster_count == 1);
        CHECK(rep.clusters.front().representative[0] == Catch::Approx(1.0).margin(1e-6));
    }

    SECTION("convexified set has a unique nearest point at its own base") {
        std::vector<double> ts(1001);
        for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = static_cast<double>(i) / 1000.0;
        const SetSpec segment =
            SetSpec::parametric(std::move(ts), [](double t) { return Point{2.0 * t - 1.0}; }, "segment");
        const auto rep = verify_double_minimum({0.0011}, segment, segment.samples, Perturbation::zero(1001),
                                               Tolerances::value_eps(0.0), Tolerances::separation_eps(2.0));
        CHECK(rep.cluster_count == 1);
    }
}

TEST_CASE("grid refinement changes delta and the excess supremum by at most the chord bound") {
    const SetSpec coarse = unit_circle(360);
    const SetSpec fine = unit_circle(720);
    const Point u0 = {0.3, 0.1};
    const double chord_half = std::sin(std::numbers::pi / 360.0);

    const double d360 = dist_to_set(u0, coarse);
    const double d720 = dist_to_set(u0, fine);
    CHECK(std::abs(d360 - d720) <= chord_half);

    const double r = 0.5;
    const double rho360 = distance_excess_sup(u0, coarse, r);
    const double rho720 = distance_excess_sup(u0, fine, r);
    // dist varies by at most half a chord pointwise, so dist^2 by at most
    // 2(delta + 2r) chord_half plus the estimator slack
    const double bound = 2.0 * (d360 + 2.0 * r) * chord_half + 1e-3;
    CHECK(std::abs(rho360 - rho720) <= bound);
}
