#pragma once

// Deterministic low-discrepancy sampling of balls and the shared
// supremum-over-ball estimator (Halton candidates + coordinate-descent
// refinement from the best few). Everything here is reproducible bit for bit:
// no random state, fixed refinement schedule.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "multimin/util.hpp"
#include "multimin/vec.hpp"

namespace multimin {

inline double halton(std::uint64_t index, std::uint64_t base) {
    double f = 1.0;
    double r = 0.0;
    while (index > 0) {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

inline const std::vector<std::uint64_t>& halton_bases() {
    static const std::vector<std::uint64_t> bases = {2, 3, 5, 7, 11, 13, 17, 19};
    return bases;
}

// `count` points of the open ball of radius r (Halton sequence in the cube,
// rejection to the unit ball, scaled to stay strictly inside).
inline std::vector<Point> ball_points(std::size_t dim, double r, std::size_t count) {
    if (dim == 0 || dim > halton_bases().size()) throw std::invalid_argument("ball_points: unsupported dimension");
    if (r <= 0.0) throw std::invalid_argument("ball_points: radius must be positive");
    std::vector<Point> pts;
    pts.reserve(count);
    const double r_eff = r * (1.0 - 1e-9);
    std::uint64_t idx = 1;
    const std::uint64_t max_tries = 200 * static_cast<std::uint64_t>(count) + 1000;
    while (pts.size() < count && idx < max_tries) {
        Point p(dim);
        for (std::size_t d = 0; d < dim; ++d) p[d] = 2.0 * halton(idx, halton_bases()[d]) - 1.0;
        ++idx;
        const double n2 = norm_sq(p);
        if (n2 > 1.0) continue;
        pts.push_back(scale(std::move(p), r_eff));
    }
    return pts;
}

struct SupParams {
    double budget_scale = 1.0;  // multiplies the candidate count
    int refine_starts = 5;
    int refine_iters = 100;
    double step_min = 1e-10;
    int threads = 1;
};

struct SupResult {
    double value = 0.0;
    Point argmax;
    std::size_t evals = 0;
};

// Lower estimate of sup over the open ball ||y|| < r of g(y). The center is
// always a candidate, so the estimate is >= g(0). Candidate density follows
// 64*dim points per unit of r; refinement is coordinate descent with step
// halving from the best refine_starts candidates.
inline SupResult sup_over_ball(const std::function<double(const Point&)>& g, std::size_t dim, double r,
                               const SupParams& params = {}) {
    if (r <= 0.0) throw std::invalid_argument("sup_over_ball: radius must be positive");
    const std::size_t base_count = static_cast<std::size_t>(std::ceil(64.0 * static_cast<double>(dim) * r));
    const std::size_t count =
        std::max<std::size_t>(32 * dim, static_cast<std::size_t>(std::ceil(static_cast<double>(base_count) * params.budget_scale)));

    std::vector<Point> cands = ball_points(dim, r, count);
    cands.insert(cands.begin(), zeros(dim));

    const std::function<double(std::size_t)> eval = [&](std::size_t i) { return g(cands[i]); };
    std::vector<double> vals = parallel_map<double>(cands.size(), params.threads, eval);

    SupResult res;
    res.evals = cands.size();
    std::vector<std::size_t> order(cands.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (vals[a] != vals[b]) return vals[a] > vals[b];
        return a < b;
    });

    res.value = vals[order[0]];
    res.argmax = cands[order[0]];

    const double r_eff = r * (1.0 - 1e-9);
    const int starts = std::min<int>(params.refine_starts, static_cast<int>(order.size()));
    for (int s = 0; s < starts; ++s) {
        Point y = cands[order[static_cast<std::size_t>(s)]];
        double best = vals[order[static_cast<std::size_t>(s)]];
        double step = r / 8.0;
        for (int it = 0; it < params.refine_iters && step >= params.step_min; ++it) {
            bool improved = false;
            for (std::size_t d = 0; d < dim; ++d) {
                for (double sgn : {1.0, -1.0}) {
                    Point trial = y;
                    trial[d] += sgn * step;
                    if (norm(trial) >= r_eff) continue;
                    const double v = g(trial);
                    ++res.evals;
                    if (v > best) {
                        best = v;
                        y = std::move(trial);
                        improved = true;
                    }
                }
            }
            if (!improved) step *= 0.5;
        }
        if (best > res.value) {
            res.value = best;
            res.argmax = y;
        }
    }
    return res;
}

// Integer lattice of spacing s inside the closed ball of radius
// (radius - spacing) around the center; points ordered by (norm^2, lex).
struct BallLattice {
    Point center;
    double radius = 1.0;
    double spacing = 0.125;

    std::vector<Point> points() const {
        if (spacing <= 0.0 || radius <= 0.0) throw std::invalid_argument("BallLattice: radius and spacing must be positive");
        const double r_eff = radius - spacing;
        std::vector<Point> pts;
        if (r_eff < 0.0) return pts;
        const std::size_t dim = center.size();
        const long kmax = static_cast<long>(std::floor(r_eff / spacing));
        std::vector<long> k(dim, -kmax);
        if (kmax >= 0) {
            while (true) {
                Point p(dim);
                double n2 = 0.0;
                for (std::size_t d = 0; d < dim; ++d) {
                    const double off = static_cast<double>(k[d]) * spacing;
                    n2 += off * off;
                    p[d] = center[d] + off;
                }
                if (std::sqrt(n2) <= r_eff + 1e-15) pts.push_back(std::move(p));
                std::size_t d = 0;
                for (; d < dim; ++d) {
                    if (k[d] < kmax) {
                        ++k[d];
                        for (std::size_t e = 0; e < d; ++e) k[e] = -kmax;
                        break;
                    }
                }
                if (d == dim) break;
            }
        }
        std::sort(pts.begin(), pts.end(), [&](const Point& a, const Point& b) {
            const double na = dist_sq(a, center);
            const double nb = dist_sq(b, center);
            if (na != nb) return na < nb;
            return lex_less(a, b);
        });
        return pts;
    }
};

// Axis-aligned box lattice [-bound, bound]^dim with the same deterministic
// (norm^2, lex) ordering.
struct BoxLattice {
    std::size_t dim = 1;
    double bound = 1.0;
    double spacing = 0.25;

    std::vector<Point> points() const {
        if (spacing <= 0.0 || bound < 0.0) throw std::invalid_argument("BoxLattice: invalid geometry");
        const long kmax = static_cast<long>(std::floor(bound / spacing + 1e-12));
        std::vector<Point> pts;
        std::vector<long> k(dim, -kmax);
        while (true) {
            Point p(dim);
            for (std::size_t d = 0; d < dim; ++d) p[d] = static_cast<double>(k[d]) * spacing;
            pts.push_back(std::move(p));
            std::size_t d = 0;
            for (; d < dim; ++d) {
                if (k[d] < kmax) {
                    ++k[d];
                    for (std::size_t e = 0; e < d; ++e) k[e] = -kmax;
                    break;
                }
            }
            if (d == dim) break;
        }
        std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
            const double na = norm_sq(a);
            const double nb = norm_sq(b);
            if (na != nb) return na < nb;
            return lex_less(a, b);
        });
        return pts;
    }
};

}  // namespace multimin
