#include <catch_amalgamated.hpp>

#include <cmath>

#include "multimin/minimax.hpp"
#include "multimin/util.hpp"

using namespace multimin;

namespace {

const SetSpec two_point = SetSpec::point_cloud({{-1.0}, {1.0}}, "two-point");

std::vector<Point> grid_1d(double a, double b, std::size_t m) {
    std::vector<Point> g;
    for (std::size_t i = 0; i < m; ++i) g.push_back({a + (b - a) * static_cast<double>(i) / static_cast<double>(m - 1)});
    return g;
}

}  // namespace

TEST_CASE("bilinear pairing is linear in both arguments") {
    BilinearPairing pair{3};
    Rng rng(17);
    for (int k = 0; k < 100; ++k) {
        Point eta = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        Point v = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        Point w = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const double a = rng.uniform(-2, 2);
        CHECK(pair(eta, add(scale(v, a), w)) == Catch::Approx(a * pair(eta, v) + pair(eta, w)).margin(1e-12));
        CHECK(pair(add(scale(eta, a), w), v) == Catch::Approx(a * pair(eta, v) + pair(w, v)).margin(1e-12));
    }
}

TEST_CASE("hull bound on the sup-inf") {
    SECTION("two symmetric points with zero base objective") {
        // inf over {-1,1} of eta(x - 0) = -|eta| <= 0 = max I
        const std::vector<double> I = {0.0, 0.0};
        const std::vector<Point> etas = {{-2.0}, {-0.5}, {0.0}, {0.7}, {3.0}};
        const auto rep = check_supinf_hull_bound(I, two_point.samples, {0, 1}, {0.5, 0.5}, etas);
        CHECK(rep.violations == 0);
        CHECK(rep.worst_inf <= 0.0);
    }

    SECTION("singleton support: the tilt vanishes at its own barycenter") {
        const std::vector<double> I = {0.25, -0.75};
        const auto rep = check_supinf_hull_bound(I, two_point.samples, {1}, {1.0}, {{-5.0}, {5.0}});
        CHECK(rep.violations == 0);
        CHECK(rep.worst_inf <= I[1] + 1e-12);
    }

    SECTION("random instances never violate the bound") {
        Rng rng(23);
        for (int inst = 0; inst < 100; ++inst) {
            const std::size_t dim = 1 + rng.index(3);
            const std::size_t m = 2 + rng.index(8);
            std::vector<Point> image(m, Point(dim));
            std::vector<double> I(m);
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t d = 0; d < dim; ++d) image[i][d] = rng.uniform(-2, 2);
                I[i] = rng.uniform(-1, 1);
            }
            const std::size_t k = 1 + rng.index(std::min<std::size_t>(5, m));
            std::vector<std::size_t> support(k);
            std::vector<double> weights(k);
            double sum = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                support[j] = rng.index(m);
                weights[j] = rng.uniform(0.0, 1.0) + 1e-9;
                sum += weights[j];
            }
            double acc = 0.0;
            for (std::size_t j = 0; j + 1 < k; ++j) {
                weights[j] /= sum;
                acc += weights[j];
            }
            weights[k - 1] = 1.0 - acc;
            std::vector<Point> etas(50, Point(dim));
            for (auto& e : etas) {
                for (std::size_t d = 0; d < dim; ++d) e[d] = 3.0 * rng.normal();
            }
            CHECK(check_supinf_hull_bound(I, image, support, weights, etas).violations == 0);
        }
    }

    SECTION("weight violations are rejected") {
        CHECK_THROWS_AS(check_supinf_hull_bound({0.0, 0.0}, two_point.samples, {0, 1}, {0.7, 0.7}, {{0.0}}),
                        std::invalid_argument);
        CHECK_THROWS_AS(check_supinf_hull_bound({0.0, 0.0}, two_point.samples, {0, 1}, {1.5, -0.5}, {{0.0}}),
                        std::invalid_argument);
    }
}

TEST_CASE("linear supremum over a ball") {
    CHECK(linear_sup_over_ball({0.0, 0.0}, 3.0) == 0.0);
    CHECK(linear_sup_over_ball({3.0, 4.0}, 2.0) == 10.0);
    CHECK_THROWS_AS(linear_sup_over_ball({1.0}, 0.0), std::invalid_argument);

    SECTION("positively homogeneous in the radius and the argument") {
        Rng rng(13);
        for (int k = 0; k < 50; ++k) {
            const Point v = {rng.uniform(-3, 3), rng.uniform(-3, 3)};
            const double r = rng.uniform(0.1, 4.0);
            const double c = rng.uniform(0.1, 5.0);
            CHECK(linear_sup_over_ball(v, c * r) == Catch::Approx(c * linear_sup_over_ball(v, r)).margin(1e-12));
            CHECK(linear_sup_over_ball(scale(v, c), r) ==
                  Catch::Approx(c * linear_sup_over_ball(v, r)).margin(1e-12));
        }
    }

    SECTION("sampled supremum stays below and converges under refinement") {
        const Point v = {1.0, -2.0, 0.5};
        const double r = 1.5;
        const double closed = linear_sup_over_ball(v, r);
        double prev = -1e300;
        for (std::size_t count : {100, 1000, 10000}) {
            double sampled = 0.0;
            for (const auto& eta : ball_points(3, r, count)) sampled = std::max(sampled, dot(eta, v));
            CHECK(sampled <= closed);
            CHECK(sampled >= prev - 1e-12);
            prev = sampled;
        }
        CHECK(prev == Catch::Approx(closed).epsilon(0.02));
    }
}

TEST_CASE("oscillation-budget margin") {
    const std::vector<double> I = {0.0, 0.0};

    SECTION("two symmetric points, unit radius: margin one") {
        // first term inf(|x| r) = 1, second term sup over |eta|<1 of -|eta| = 0
        const double margin = duality_margin(I, two_point.samples, Perturbation::zero(2), {0.0}, 1.0);
        CHECK(margin == Catch::Approx(1.0).margin(1e-9));
    }

    SECTION("the margin is affine in the oscillation") {
        const double base = duality_margin(I, two_point.samples, Perturbation::zero(2), {0.0}, 1.0);
        const double shifted = duality_margin(I, two_point.samples, Perturbation::from_values({0.0, 0.3}), {0.0}, 1.0);
        CHECK(base - shifted == Catch::Approx(0.3).margin(1e-12));
    }

    SECTION("sign agreement with the admissible-radius certificate") {
        // with I = ||x - u0||^2 / 2 and half the perturbation, the margin and
        // the certificate margin agree in sign: margin = cert_margin * delta
        const Point u0 = {0.0};
        const double r = 0.2;
        for (double osc : {0.1, 0.5}) {
            const Perturbation phi = Perturbation::from_values({0.0, osc});
            const Perturbation half_phi = Perturbation::from_values({0.0, osc / 2.0});
            const auto certs = admissible_radius_scan(u0, two_point, phi, {r});
            std::vector<double> I_half(2);
            for (std::size_t i = 0; i < 2; ++i) I_half[i] = 0.5 * dist_sq(two_point.samples[i], u0);
            const double margin = duality_margin(I_half, two_point.samples, half_phi, u0, r);
            CHECK((margin > 0.0) == certs[0].admissible());
        }
    }
}

TEST_CASE("discrete minimax gaps") {
    SECTION("bilinear coupling on two points: sup-inf 0, inf-sup 1, exactly") {
        const auto f = [](const Point& x, const Point& y) { return x[0] * y[0]; };
        const auto g = minimax_gap(f, two_point.samples, grid_1d(-1.0, 1.0, 201));
        CHECK(g.sup_inf == 0.0);
        CHECK(g.inf_sup == 1.0);
        CHECK(g.gap == 1.0);
    }

    SECTION("strictly convex-concave instance: gap collapses under refinement") {
        const auto f = [](const Point& x, const Point& y) { return x[0] * x[0] + x[0] * y[0]; };
        const auto coarse = minimax_gap(f, grid_1d(-2, 2, 401), grid_1d(0, 1, 101));
        const auto fine = minimax_gap(f, grid_1d(-2, 2, 801), grid_1d(0, 1, 201));
        CHECK(coarse.gap < 1e-2);
        CHECK(fine.gap <= coarse.gap + 1e-10);
    }

    SECTION("constant objective has zero gap") {
        const auto f = [](const Point&, const Point&) { return 4.25; };
        const auto g = minimax_gap(f, grid_1d(0, 1, 11), grid_1d(0, 1, 7));
        CHECK(g.gap == 0.0);
    }

    SECTION("weak duality on random matrices") {
        Rng rng(29);
        for (int inst = 0; inst < 200; ++inst) {
            const std::size_t m = 2 + rng.index(10);
            const std::size_t n = 2 + rng.index(10);
            std::vector<std::vector<double>> M(m, std::vector<double>(n));
            for (auto& row : M) {
                for (auto& v : row) v = rng.uniform(-5, 5);
            }
            const auto f = [&](const Point& x, const Point& y) {
                return M[static_cast<std::size_t>(x[0])][static_cast<std::size_t>(y[0])];
            };
            std::vector<Point> X, Y;
            for (std::size_t i = 0; i < m; ++i) X.push_back({static_cast<double>(i)});
            for (std::size_t j = 0; j < n; ++j) Y.push_back({static_cast<double>(j)});
            const auto g = minimax_gap(f, X, Y);
            CHECK(g.gap >= 0.0);
        }
    }
}

TEST_CASE("tilt search for two global minima") {
    const BoxLattice lattice{1, 2.0, 0.25};
    const double eps_v = Tolerances::value_eps(0.0);
    const double eps_s = Tolerances::separation_eps(2.0);

    SECTION("zero base objective needs the zero tilt") {
        const auto search = find_tilt_two_minima({0.0, 0.0}, two_point, two_point.samples, lattice, eps_v, eps_s);
        REQUIRE(search.witness.has_value());
        CHECK(search.witness->eta == Point{0.0});
        CHECK(search.witness->clusters.size() == 2);
    }

    SECTION("even base objective keeps the zero tilt by symmetry") {
        const auto search = find_tilt_two_minima({1.0, 1.0}, two_point, two_point.samples, lattice, eps_v, eps_s);
        REQUIRE(search.witness.has_value());
        CHECK(search.witness->eta == Point{0.0});
    }

    SECTION("linear base objective x is flattened by the tilt -1") {
        const auto search = find_tilt_two_minima({-1.0, 1.0}, two_point, two_point.samples, lattice, eps_v, eps_s);
        REQUIRE(search.witness.has_value());
        CHECK(search.witness->eta == Point{-1.0});
    }

    SECTION("convex image is rejected") {
        std::vector<double> ts(101);
        for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = static_cast<double>(i) / 100.0;
        const SetSpec segment =
            SetSpec::parametric(std::move(ts), [](double t) { return Point{2.0 * t - 1.0}; }, "segment");
        CHECK_THROWS_AS(
            find_tilt_two_minima(std::vector<double>(101, 0.0), segment, segment.samples, lattice, eps_v, eps_s),
            std::invalid_argument);
    }
}

TEST_CASE("minimax hypothesis validation") {
    SECTION("convex-in-x, linear-in-y instance passes") {
        const auto f = [](const Point& x, const Point& y) { return x[0] * x[0] + x[0] * y[0]; };
        const auto rep = validate_minimax_hypotheses(f, grid_1d(-2, 2, 201), grid_1d(0, 1, 51), 0.02);
        CHECK(rep.unique_min_per_y);
        CHECK(rep.quasiconcave_per_x);
    }

    SECTION("a dip in y is caught by the three-point test") {
        const auto f = [](const Point&, const Point& y) { return std::abs(y[0]); };
        const auto rep = validate_minimax_hypotheses(f, grid_1d(-1, 1, 11), grid_1d(-1, 1, 21), 0.2);
        CHECK_FALSE(rep.quasiconcave_per_x);
    }

    SECTION("a two-welled x-slice fails the unique-minimum proxy") {
        const auto f = [](const Point& x, const Point&) {
            const double s = x[0] * x[0] - 1.0;
            return s * s;
        };
        const auto rep = validate_minimax_hypotheses(f, grid_1d(-2, 2, 201), grid_1d(0, 1, 5), 0.02);
        CHECK_FALSE(rep.unique_min_per_y);
    }
}
