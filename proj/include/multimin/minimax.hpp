#pragma once

// Minimax layer: the convex-hull sup-inf upper bound, the closed-form linear
// supremum over a ball, the oscillation-budget margin, exact discrete
// sup-inf / inf-sup gaps, and the search for a linear tilt giving the base
// objective two global minima.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "multimin/chebyshev.hpp"
#include "multimin/geometry.hpp"
#include "multimin/sampling.hpp"
#include "multimin/util.hpp"
#include "multimin/vec.hpp"

namespace multimin {

// Dual pairing with the dual identified with the space itself: eta applied to
// v is the coordinate inner product.
struct BilinearPairing {
    std::size_t dimension = 1;
    double operator()(const Point& eta, const Point& v) const {
        if (eta.size() != dimension || v.size() != dimension) {
            throw std::invalid_argument("BilinearPairing: dimension mismatch");
        }
        return dot(eta, v);
    }
};

// sup over the open ball ||eta|| < r of eta(v). Supremum, not maximum.
inline double linear_sup_over_ball(const Point& v, double r) {
    if (r <= 0.0) throw std::invalid_argument("linear_sup_over_ball: radius must be positive");
    return norm(v) * r;
}

struct HullBoundReport {
    double max_support_value = 0.0;   // max I(x_i) over the support
    double worst_inf = -std::numeric_limits<double>::infinity();
    double min_slack = std::numeric_limits<double>::infinity();  // max I(x_i) - inf over the tightest eta
    std::size_t violations = 0;
    Point tight_eta;
};

// For every sampled eta, the infimum over the grid of
// I(x) + eta(psi(x) - sum_i lambda_i psi(x_i)) must stay below
// max_i I(x_i) (up to eps_num). Reports the tightest case.
inline HullBoundReport check_supinf_hull_bound(const std::vector<double>& I_values, const std::vector<Point>& image,
                                               const std::vector<std::size_t>& support,
                                               const std::vector<double>& weights, const std::vector<Point>& etas,
                                               double eps_num = 0.0) {
    if (I_values.size() != image.size()) throw std::invalid_argument("check_supinf_hull_bound: size mismatch");
    if (support.empty() || support.size() != weights.size()) {
        throw std::invalid_argument("check_supinf_hull_bound: support/weight mismatch");
    }
    double wsum = 0.0;
    for (double w : weights) {
        if (w < -1e-15) throw std::invalid_argument("check_supinf_hull_bound: negative weight");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-12) throw std::invalid_argument("check_supinf_hull_bound: weights must sum to 1");

    const std::size_t dim = image.front().size();
    Point barycenter = zeros(dim);
    HullBoundReport rep;
    rep.max_support_value = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < support.size(); ++k) {
        const std::size_t i = support[k];
        if (i >= image.size()) throw std::invalid_argument("check_supinf_hull_bound: support index out of range");
        barycenter = add(std::move(barycenter), scale(image[i], weights[k]));
        rep.max_support_value = std::max(rep.max_support_value, I_values[i]);
    }

    const double scale_num = 1.0 + std::abs(rep.max_support_value);
    for (const Point& eta : etas) {
        double inf = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < image.size(); ++i) {
            inf = std::min(inf, I_values[i] + dot(eta, sub(image[i], barycenter)));
        }
        rep.worst_inf = std::max(rep.worst_inf, inf);
        const double slack = rep.max_support_value - inf;
        if (slack < rep.min_slack) {
            rep.min_slack = slack;
            rep.tight_eta = eta;
        }
        if (inf > rep.max_support_value + eps_num + 1e-10 * scale_num) ++rep.violations;
    }
    return rep;
}

// [inf over the grid of I(x) + ||psi(x)-u0|| r]
//   - [estimated sup over ||eta|| < r of inf over the grid of I(x) + <eta, psi(x)-u0>]
//   - osc(phi).
// Positive margin separates inf-sup from sup-inf by more than the
// perturbation budget on this discretization.
inline double duality_margin(const std::vector<double>& I_values, const std::vector<Point>& image,
                             const Perturbation& phi, const Point& u0, double r, const SupParams& params = {}) {
    if (I_values.size() != image.size() || phi.size() != image.size()) {
        throw std::invalid_argument("duality_margin: size mismatch");
    }
    if (r <= 0.0) throw std::invalid_argument("duality_margin: radius must be positive");
    double term1 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < image.size(); ++i) {
        term1 = std::min(term1, I_values[i] + dist(image[i], u0) * r);
    }
    const auto inner_inf = [&](const Point& eta) {
        double inf = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < image.size(); ++i) {
            inf = std::min(inf, I_values[i] + dot(eta, sub(image[i], u0)));
        }
        return inf;
    };
    const double term2 = sup_over_ball(inner_inf, u0.size(), r, params).value;
    return term1 - term2 - oscillation(phi);
}

struct GapEstimate {
    double sup_inf = 0.0;
    double inf_sup = 0.0;
    double gap = 0.0;  // inf_sup - sup_inf
    std::string grids;
};

// Exact discrete sup-inf and inf-sup over finite grids.
inline GapEstimate minimax_gap(const std::function<double(const Point&, const Point&)>& f,
                               const std::vector<Point>& X_grid, const std::vector<Point>& Y_grid,
                               std::string grids_note = {}) {
    if (X_grid.empty() || Y_grid.empty()) throw std::invalid_argument("minimax_gap: empty grid");
    GapEstimate g;
    g.grids = std::move(grids_note);
    g.sup_inf = -std::numeric_limits<double>::infinity();
    for (const Point& y : Y_grid) {
        double inf = std::numeric_limits<double>::infinity();
        for (const Point& x : X_grid) inf = std::min(inf, f(x, y));
        g.sup_inf = std::max(g.sup_inf, inf);
    }
    g.inf_sup = std::numeric_limits<double>::infinity();
    for (const Point& x : X_grid) {
        double sup = -std::numeric_limits<double>::infinity();
        for (const Point& y : Y_grid) sup = std::max(sup, f(x, y));
        g.inf_sup = std::min(g.inf_sup, sup);
    }
    g.gap = g.inf_sup - g.sup_inf;
    const double scale = 1.0 + std::abs(g.sup_inf) + std::abs(g.inf_sup);
    if (g.gap < -1e-10 * scale) throw std::logic_error("minimax_gap: weak duality violated beyond roundoff");
    return g;
}

struct TiltWitness {
    Point eta;
    std::vector<ArgminCluster> clusters;
    double objective_min = 0.0;
};

struct TiltSearch {
    std::optional<TiltWitness> witness;
    int best_multiplicity = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    Point best_candidate;
    std::size_t candidates = 0;
    bool bisection_used = false;
};

// Lattice search for a tilt eta maximizing the multiplicity of
// x -> I(x) + <eta, psi(x)>; same equalize-and-bisect refinement as the
// squared-distance search. Exhaustion is reported, not thrown.
inline TiltSearch find_tilt_two_minima(const std::vector<double>& I_values, const SetSpec& domain,
                                       const std::vector<Point>& image, const BoxLattice& lattice, double eps_v,
                                       double eps_s, int threads = 1, int bisect_iters = 200) {
    domain.validate();
    if (I_values.size() != domain.samples.size() || image.size() != domain.samples.size()) {
        throw std::invalid_argument("find_tilt_two_minima: size mismatch");
    }
    SetSpec image_set;
    image_set.kind = domain.kind;
    image_set.samples = image;
    image_set.params = domain.params;
    const auto noncvx = nonconvexity_certificate(image_set);
    if (!noncvx.nonconvex) throw std::invalid_argument("find_tilt_two_minima: image set not certified non-convex");

    TiltSearch out;
    const std::vector<Point> cands = lattice.points();
    out.candidates = cands.size();
    if (cands.empty()) return out;

    const auto objective = [&](const Point& eta) {
        std::vector<double> vals(image.size());
        for (std::size_t i = 0; i < image.size(); ++i) vals[i] = I_values[i] + dot(eta, image[i]);
        return vals;
    };
    const std::function<detail::CandidateScore(std::size_t)> score = [&](std::size_t i) {
        return detail::score_candidate(domain, objective(cands[i]), eps_v, eps_s);
    };
    const auto scores = parallel_map<detail::CandidateScore>(cands.size(), threads, score);

    std::size_t best_idx = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        const auto& s = scores[i];
        const auto& b = scores[best_idx];
        if (s.multiplicity > b.multiplicity || (s.multiplicity == b.multiplicity && s.gap < b.gap)) best_idx = i;
    }
    out.best_multiplicity = scores[best_idx].multiplicity;
    out.best_gap = scores[best_idx].gap;
    out.best_candidate = cands[best_idx];

    Point eta_final = cands[best_idx];
    if (scores[best_idx].multiplicity < 2 && scores[best_idx].has_runner_up) {
        const std::size_t c1 = scores[best_idx].argmin;
        const std::size_t c2 = scores[best_idx].runner_up;
        const auto signed_gap = [&](const Point& eta) {
            return (I_values[c2] + dot(eta, image[c2])) - (I_values[c1] + dot(eta, image[c1]));
        };
        std::size_t flip_idx = cands.size();
        double most_negative = 0.0;
        for (std::size_t i = 0; i < cands.size(); ++i) {
            const double s = signed_gap(cands[i]);
            if (s < most_negative) {
                most_negative = s;
                flip_idx = i;
            }
        }
        if (flip_idx < cands.size()) {
            out.bisection_used = true;
            Point a = cands[best_idx];
            Point b = cands[flip_idx];
            const double gap_tol = 1e-13 * (1.0 + std::abs(scores[best_idx].min_value));
            for (int it = 0; it < bisect_iters; ++it) {
                const Point mid = lerp(a, b, 0.5);
                const double s = signed_gap(mid);
                if (std::abs(s) <= gap_tol) {
                    a = mid;
                    break;
                }
                (s > 0.0 ? a : b) = mid;
            }
            eta_final = a;
        }
    }

    const auto final_values = objective(eta_final);
    const auto clusters = cluster_argmins(domain, final_values, eps_v, eps_s);
    if (clusters.size() >= 2) {
        TiltWitness w;
        w.eta = eta_final;
        w.clusters = clusters;
        w.objective_min = *std::min_element(final_values.begin(), final_values.end());
        out.witness = std::move(w);
        out.best_multiplicity = std::max(out.best_multiplicity, static_cast<int>(clusters.size()));
    }
    return out;
}

struct MinimaxHypotheses {
    bool unique_min_per_y = true;
    bool quasiconcave_per_x = true;
    std::size_t unique_min_failures = 0;
    std::size_t quasiconcavity_failures = 0;
};

// Sampled validation of the hypotheses under which the discrete gap is
// expected to vanish under refinement: per-y localized unique minimum (the
// eps-argmins form one cluster) and per-x quasi-concavity on random
// three-point tests f(x, t y1 + (1-t) y2) >= min(f(x,y1), f(x,y2)) - eps.
inline MinimaxHypotheses validate_minimax_hypotheses(const std::function<double(const Point&, const Point&)>& f,
                                                     const std::vector<Point>& X_grid, const std::vector<Point>& Y_grid,
                                                     double x_spacing, std::size_t triples = 1000,
                                                     std::uint64_t seed = 11) {
    MinimaxHypotheses rep;
    SetSpec domain = SetSpec::point_cloud(X_grid, "minimax X grid");
    const double sep = std::max(2.0 * x_spacing, 1e-12);
    for (const Point& y : Y_grid) {
        std::vector<double> vals(X_grid.size());
        double lo = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < X_grid.size(); ++i) {
            vals[i] = f(X_grid[i], y);
            lo = std::min(lo, vals[i]);
        }
        const auto clusters = cluster_argmins(domain, vals, Tolerances::value_eps(lo), sep);
        if (clusters.size() != 1) ++rep.unique_min_failures;
    }
    rep.unique_min_per_y = rep.unique_min_failures == 0;

    Rng rng(seed);
    for (std::size_t t = 0; t < triples; ++t) {
        const Point& x = X_grid[rng.index(X_grid.size())];
        const Point& y1 = Y_grid[rng.index(Y_grid.size())];
        const Point& y2 = Y_grid[rng.index(Y_grid.size())];
        const double lam = rng.uniform01();
        const double mid = f(x, lerp(y1, y2, lam));
        const double floor = std::min(f(x, y1), f(x, y2));
        const double eps = 1e-10 * (1.0 + std::abs(floor));
        if (mid < floor - eps) ++rep.quasiconcavity_failures;
    }
    rep.quasiconcave_per_x = rep.quasiconcavity_failures == 0;
    return rep;
}

}  // namespace multimin
