#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "multimin/roots.hpp"
#include "multimin/util.hpp"

using namespace multimin;

TEST_CASE("bracketed bisection root scan") {
    SECTION("x + 5 cos x has three roots on [-10, 10]") {
        // sign alternation at -pi/2, 0, 2, 3pi/2
        const auto scan = scalar_root_scan(builtin::sine(), 5.0, 0.0, -10.0, 10.0, 400);
        REQUIRE(scan.roots.size() >= 3);
        for (double r : scan.roots) {
            CHECK(std::abs(r + 5.0 * std::cos(r)) < 1e-9);
        }
    }

    SECTION("zero multiplier leaves the single root x = b") {
        const auto scan = scalar_root_scan(builtin::sine(), 0.0, 2.75, -10.0, 10.0, 400);
        REQUIRE(scan.roots.size() == 1);
        CHECK(scan.roots[0] == Catch::Approx(2.75).margin(1e-10));
    }

    SECTION("derivative bound 1 - |a| > 0 forces a unique root") {
        const auto scan = scalar_root_scan(builtin::sine(), 0.5, 0.0, -10.0, 10.0, 400);
        CHECK(scan.roots.size() == 1);
    }

    SECTION("the enforced interval contains |b| + |a| sup|J'|") {
        const auto scan = scalar_root_scan(builtin::sine(), 5.0, 2.0, -1.0, 1.0, 100);
        CHECK(scan.lo <= -(2.0 + 5.0));
        CHECK(scan.hi >= 2.0 + 5.0);
    }
}

TEST_CASE("deflated Newton enumeration") {
    SECTION("x - 1.2 sin x: exactly the symmetric triple") {
        const VectorField F = [](const Point& x) { return Point{x[0] - 1.2 * std::sin(x[0])}; };
        std::vector<Point> starts;
        for (int i = 0; i < 21; ++i) starts.push_back({-3.0 + 6.0 * i / 20.0});
        const auto roots = solve_deflated(F, starts, 1e-12, 1e-6);
        REQUIRE(roots.size() == 3);
        CHECK(roots[0][0] == Catch::Approx(-roots[2][0]).margin(1e-9));
        CHECK(std::abs(roots[1][0]) < 1e-9);
        CHECK(roots[2][0] > 1.0);
        CHECK(roots[2][0] < 1.1);
        // bisection oracle over the same field agrees
        const auto scan = bracketed_roots([](double x) { return x - 1.2 * std::sin(x); }, -3.0, 3.0, 500);
        REQUIRE(scan.roots.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) CHECK(roots[i][0] == Catch::Approx(scan.roots[i]).margin(1e-9));
    }

    SECTION("affine field has one root") {
        const VectorField F = [](const Point& x) { return Point{x[0]}; };
        const auto roots = solve_deflated(F, {{-2.0}, {0.5}, {3.0}}, 1e-12, 1e-6);
        REQUIRE(roots.size() == 1);
        CHECK(std::abs(roots[0][0]) < 1e-12);
    }

    SECTION("x + 5 cos x from a scan of starts") {
        const VectorField F = [](const Point& x) { return Point{x[0] + 5.0 * std::cos(x[0])}; };
        std::vector<Point> starts;
        for (int i = 0; i <= 40; ++i) starts.push_back({-10.0 + 0.5 * i});
        const auto roots = solve_deflated(F, starts, 1e-12, 1e-6);
        CHECK(roots.size() >= 3);
        for (const auto& r : roots) CHECK(std::abs(F(r)[0]) < 1e-12);
    }

    SECTION("residuals are re-evaluated, not trusted") {
        const VectorField F = [](const Point& x) { return Point{std::exp(x[0]) - 2.0}; };
        const auto roots = solve_deflated(F, {{0.0}, {1.0}}, 1e-13, 1e-8);
        REQUIRE(roots.size() == 1);
        CHECK(std::abs(F(roots[0])[0]) < 1e-13);
        CHECK(roots[0][0] == Catch::Approx(std::log(2.0)).epsilon(1e-12));
    }

    SECTION("two-dimensional field") {
        // roots of (x^2 + y^2 - 1, y - x): two points on the diagonal
        const VectorField F = [](const Point& p) {
            return Point{p[0] * p[0] + p[1] * p[1] - 1.0, p[1] - p[0]};
        };
        std::vector<Point> starts = {{1.0, 1.0}, {-1.0, -1.0}, {0.3, -0.2}, {-0.4, 0.8}};
        const auto roots = solve_deflated(F, starts, 1e-12, 1e-6);
        REQUIRE(roots.size() == 2);
        const double c = 1.0 / std::sqrt(2.0);
        CHECK(roots[0][0] == Catch::Approx(-c).margin(1e-10));
        CHECK(roots[1][0] == Catch::Approx(c).margin(1e-10));
    }
}

TEST_CASE("deflated solver matches the bisection oracle on random scalar stations") {
    Rng rng(41);
    const ScalarFunction J = builtin::sine();
    int tested = 0;
    while (tested < 100) {
        const double a = rng.uniform(-3.0, 3.0);
        const double b = rng.uniform(-3.0, 3.0);
        // skip near-tangent instances: bisection cannot see even-multiplicity
        // roots, so a local extremum close to zero would be ill-posed for the
        // comparison
        const auto g = scalar_station_field(J, a, b);
        bool near_tangent = false;
        double prev = g(-12.0);
        for (double x = -12.0; x <= 12.0; x += 0.01) {
            const double v = g(x);
            if ((v - prev) * prev < 0.0 && std::abs(v) < 1e-3) near_tangent = true;
            prev = v;
        }
        double min_at_extrema = 1e300;
        for (double x = -12.0; x <= 12.0; x += 1e-3) {
            const double slope = 1.0 + a * (-std::sin(x));
            if (std::abs(slope) < 2e-3) min_at_extrema = std::min(min_at_extrema, std::abs(g(x)));
        }
        if (near_tangent || min_at_extrema < 1e-3) continue;
        ++tested;

        const auto scan = scalar_root_scan(J, a, b, -12.0, 12.0, 2000);
        const VectorField F = [&](const Point& x) { return Point{g(x[0])}; };
        std::vector<Point> starts;
        for (int i = 0; i <= 48; ++i) starts.push_back({scan.lo + (scan.hi - scan.lo) * i / 48.0});
        const auto roots = solve_deflated(F, starts, 1e-12, 1e-6);
        REQUIRE(roots.size() == scan.roots.size());
        for (std::size_t i = 0; i < roots.size(); ++i) {
            CHECK(roots[i][0] == Catch::Approx(scan.roots[i]).margin(1e-9));
        }
    }
}

TEST_CASE("graph radius bound") {
    const FieldFn I0 = [](const Point&) { return 0.0; };
    const FieldFn Jcos = [](const Point& p) { return std::cos(p[0]); };

    SECTION("cosine instance evaluates to pi^2/8") {
        // hat = pi^2/4, inf(x^2 + cos^2 x) = 1 at 0, osc(-cos^2) = 1
        const auto rep = graph_radius_bound(I0, Jcos, {std::numbers::pi / 2.0});
        REQUIRE(rep.hypotheses_ok);
        CHECK(rep.bound == Catch::Approx(std::numbers::pi * std::numbers::pi / 8.0).margin(1e-3));
        CHECK(rep.r_cut_sensitivity < 1e-6);
        CHECK(rep.delta == Catch::Approx(1.0).margin(1e-6));
    }

    SECTION("J(0) = 0 is rejected") {
        const FieldFn Jsin = [](const Point& p) { return std::sin(p[0]); };
        const auto rep = graph_radius_bound(I0, Jsin, {std::numbers::pi / 2.0});
        CHECK_FALSE(rep.hypotheses_ok);
        CHECK(rep.failure == "J(0) = 0");
    }

    SECTION("a base point without the antipodal sign flip is rejected") {
        const auto rep = graph_radius_bound(I0, Jcos, {1.0});
        CHECK_FALSE(rep.hypotheses_ok);
        CHECK(rep.failure == "J(-x_hat) != -J(x_hat)");
    }

    SECTION("the sampled excess supremum respects the hull bound") {
        const auto rep = graph_radius_bound(I0, Jcos, {std::numbers::pi / 2.0});
        CHECK(rep.excess_bound_ok);
        CHECK(rep.excess_sup_sample <= rep.hat_value + 1e-6);
    }
}

TEST_CASE("graph non-convexity tracks affinity") {
    SECTION("cosine graph is non-convex") {
        const SetSpec graph = graph_set([](const Point& p) { return std::cos(p[0]); }, 0.01, 4.0);
        CHECK(nonconvexity_certificate(graph).nonconvex);
    }

    SECTION("affine graph is a line") {
        const SetSpec graph = graph_set([](const Point& p) { return 2.0 * p[0] + 1.0; }, 0.01, 4.0);
        CHECK_FALSE(nonconvexity_certificate(graph).nonconvex);
    }
}

TEST_CASE("three-solution lattice search") {
    const FieldFn I0 = [](const Point&) { return 0.0; };
    const FieldFn Jcos = [](const Point& p) { return std::cos(p[0]); };

    SECTION("cosine instance yields a witness inside the certified ball") {
        const auto bound = graph_radius_bound(I0, Jcos, {std::numbers::pi / 2.0});
        ThreeSolutionParams params;
        const auto search = find_three_solutions(I0, Jcos, 1, bound.bound * 1.01, params);
        REQUIRE(search.witness.has_value());
        const auto& w = *search.witness;
        CHECK(w.roots.size() == 3);
        CHECK(std::sqrt(norm_sq(w.y0) + w.mu0 * w.mu0) <= 1.21);
        const VectorField F = station_field(I0, Jcos, w.y0, w.mu0);
        for (const auto& root : w.roots) CHECK(norm(F(root)) < 1e-10);
        // margin of at least the lattice spacing inside the ball
        CHECK(std::sqrt(norm_sq(w.y0) + w.mu0 * w.mu0) <= bound.bound * 1.01 - params.lattice_spacing + 1e-12);
    }

    SECTION("the mu0 = 0 slice of a zero base objective is affine") {
        const VectorField F = station_field(I0, Jcos, {0.3}, 0.0);
        std::vector<Point> starts;
        for (int i = 0; i < 11; ++i) starts.push_back({-5.0 + i});
        CHECK(solve_deflated(F, starts, 1e-10, 1e-6).size() == 1);
    }

    SECTION("witnesses mirror under flipping the offset with an even J") {
        // roots of x - mu sin x - y0 map to negated roots of x - mu sin x + y0
        const double mu = 1.15, y0 = 0.01;
        const VectorField Fp = station_field(I0, Jcos, {y0}, mu);
        const VectorField Fm = station_field(I0, Jcos, {-y0}, mu);
        std::vector<Point> starts;
        for (int i = 0; i <= 20; ++i) starts.push_back({-2.5 + 0.25 * i});
        const auto rp = solve_deflated(Fp, starts, 1e-11, 1e-6);
        const auto rm = solve_deflated(Fm, starts, 1e-11, 1e-6);
        REQUIRE(rp.size() == 3);
        REQUIRE(rm.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(rp[i][0] == Catch::Approx(-rm[2 - i][0]).margin(1e-8));
        }
    }

    SECTION("positive radius is required") {
        CHECK_THROWS_AS(find_three_solutions(I0, Jcos, 1, 0.0), std::invalid_argument);
    }
}

TEST_CASE("finite-difference gradient helper") {
    const FieldFn f = [](const Point& p) { return p[0] * p[0] + 3.0 * p[0] * p[1]; };
    const Point g = fd_gradient(f, {1.0, 2.0});
    CHECK(g[0] == Catch::Approx(8.0).margin(1e-7));
    CHECK(g[1] == Catch::Approx(3.0).margin(1e-7));
}
