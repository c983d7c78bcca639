#pragma once

// Distance-excess supremum, admissible-radius certificates and the search
// for a center point whose perturbed squared-distance objective attains its
// global minimum on at least two separated clusters.
//
// Notation: delta = dist(u0, X); the excess at offset y is
// dist(u0 + y, X)^2 - ||y||^2, whose supremum over the open ball of radius r
// we estimate from below. The admissible-radius threshold is
// (excess_sup - delta^2 + osc phi) / (2 delta).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "multimin/geometry.hpp"
#include "multimin/sampling.hpp"
#include "multimin/util.hpp"
#include "multimin/vec.hpp"

namespace multimin {

struct RadiusCertificate {
    double r = 0.0;
    double delta = 0.0;
    double excess_sup = 0.0;  // lower estimate of sup over ||y|| < r
    double osc_phi = 0.0;
    double margin = 0.0;  // r - threshold()

    double threshold() const { return (excess_sup - delta * delta + osc_phi) / (2.0 * delta); }
    bool admissible() const { return margin > 0.0; }
};

// Lower estimate of sup over ||y|| < r of dist(u0+y, X)^2 - ||y||^2.
// Always >= the y = 0 value delta^2; bounded above by delta^2 + 2*delta*r
// (triangle inequality), both checked on every call.
inline double distance_excess_sup(const Point& u0, const SetSpec& X, double r, const SupParams& params = {}) {
    X.validate();
    check_same_dim(u0, X.samples.front(), "distance_excess_sup");
    if (r <= 0.0) throw std::invalid_argument("distance_excess_sup: radius must be positive");
    const double delta = dist_to_set(u0, X);
    const double scale = 1.0 + norm(u0) + set_diameter(X);
    if (delta <= 1e-12 * scale) {
        throw std::invalid_argument("distance_excess_sup: u0 lies on X (delta = 0 makes the bound undefined)");
    }
    const auto g = [&](const Point& y) {
        const double d = dist_to_set(add(y, u0), X);
        return d * d - norm_sq(y);
    };
    const SupResult sup = sup_over_ball(g, u0.size(), r, params);
    const double value = std::max(sup.value, delta * delta);
    const double upper = delta * delta + 2.0 * delta * r;
    if (value < delta * delta - 1e-9 * scale || value > upper + 1e-9 * (1.0 + upper)) {
        throw std::logic_error("distance_excess_sup: estimate escaped its analytic envelope");
    }
    return value;
}

// One certificate per radius; margin > 0 marks the admissible ones.
inline std::vector<RadiusCertificate> admissible_radius_scan(const Point& u0, const SetSpec& X, const Perturbation& phi,
                                                             const std::vector<double>& radii,
                                                             const SupParams& params = {}) {
    if (radii.empty()) throw std::invalid_argument("admissible_radius_scan: empty radius grid");
    if (phi.size() != X.samples.size()) {
        throw std::invalid_argument("admissible_radius_scan: perturbation/sample size mismatch");
    }
    const double delta = dist_to_set(u0, X);
    const double osc = oscillation(phi);
    std::vector<RadiusCertificate> certs;
    certs.reserve(radii.size());
    for (double r : radii) {
        RadiusCertificate c;
        c.r = r;
        c.delta = delta;
        c.excess_sup = distance_excess_sup(u0, X, r, params);
        c.osc_phi = osc;
        c.margin = r - c.threshold();
        certs.push_back(c);
    }
    return certs;
}

inline std::vector<double> geometric_radii(double r_min, double r_max, double factor) {
    if (r_min <= 0.0 || r_max < r_min || factor <= 1.0) throw std::invalid_argument("geometric_radii: bad grid");
    std::vector<double> rs;
    for (double r = r_min; r <= r_max * (1.0 + 1e-12); r *= factor) rs.push_back(r);
    return rs;
}

// Midpoint-membership certificate of non-convexity: a sampled midpoint of two
// image points whose distance to the image exceeds 3x the discretization
// chord (plus an absolute floor for exact point clouds).
struct NonconvexityCert {
    bool nonconvex = false;
    Point witness_midpoint;
    double gap = 0.0;        // distance of the midpoint to the set
    double threshold = 0.0;  // 3 * chord + floor
    std::size_t trials = 0;
};

inline NonconvexityCert nonconvexity_certificate(const SetSpec& image, std::size_t trials = 10000,
                                                 std::uint64_t seed = 7) {
    image.validate();
    NonconvexityCert cert;
    cert.trials = trials;
    cert.threshold = 3.0 * grid_chord(image) + 1e-12 * (1.0 + set_diameter(image));
    if (image.samples.size() < 2) return cert;
    Rng rng(seed);
    const std::size_t m = image.samples.size();
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t i = rng.index(m);
        const std::size_t j = rng.index(m);
        if (i == j) continue;
        const Point mid = lerp(image.samples[i], image.samples[j], 0.5);
        const double gap = dist_to_set(mid, image);
        if (gap > cert.gap) {
            cert.gap = gap;
            cert.witness_midpoint = mid;
        }
    }
    cert.nonconvex = cert.gap > cert.threshold;
    return cert;
}

struct DoubleMinWitness {
    Point y0;
    std::vector<ArgminCluster> clusters;  // >= 2 when reported
    double objective_min = 0.0;
    double ball_radius_used = 0.0;
};

struct DoubleMinSearch {
    std::optional<DoubleMinWitness> witness;
    int best_multiplicity = 0;
    double best_gap = std::numeric_limits<double>::infinity();  // value gap to the second cluster
    Point best_candidate;
    std::size_t candidates = 0;
    NonconvexityCert image_nonconvexity;
    bool bisection_used = false;
};

struct DoubleMinParams {
    double eps_v = 1e-8;
    double eps_s = 1e-3;
    double gap_tol_scale = 1e-13;  // bisection stops at gap <= scale*(1+|min F|)
    int bisect_iters = 200;
    int threads = 1;
};

namespace detail {

// Objective values of x -> ||psi(x) - y||^2 + phi(x) over the domain grid.
inline std::vector<double> squared_distance_objective(const std::vector<Point>& image, const Perturbation& phi,
                                                      const Point& y) {
    std::vector<double> vals(image.size());
    for (std::size_t i = 0; i < image.size(); ++i) vals[i] = dist_sq(image[i], y) + phi[i];
    return vals;
}

struct CandidateScore {
    int multiplicity = 0;
    double gap = std::numeric_limits<double>::infinity();
    double min_value = 0.0;
    std::size_t argmin = 0;
    std::size_t runner_up = 0;  // best sample separated from the argmin cluster
    bool has_runner_up = false;
};

inline CandidateScore score_candidate(const SetSpec& domain, const std::vector<double>& values, double eps_v,
                                      double eps_s) {
    CandidateScore s;
    const auto clusters = cluster_argmins(domain, values, eps_v, eps_s);
    s.multiplicity = static_cast<int>(clusters.size());
    s.min_value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < s.min_value) {
            s.min_value = values[i];
            s.argmin = i;
        }
    }
    // cheapest sample more than eps_s away from the whole argmin cluster
    const ArgminCluster* home = nullptr;
    for (const auto& c : clusters) {
        for (std::size_t m : c.members) {
            if (m == s.argmin) {
                home = &c;
                break;
            }
        }
        if (home) break;
    }
    double best_outside = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i) {
        double d = std::numeric_limits<double>::infinity();
        if (home) {
            for (std::size_t m : home->members) d = std::min(d, dist(domain.samples[i], domain.samples[m]));
        }
        if (d > eps_s && values[i] < best_outside) {
            best_outside = values[i];
            s.runner_up = i;
            s.has_runner_up = true;
        }
    }
    if (s.has_runner_up) s.gap = best_outside - s.min_value;
    return s;
}

}  // namespace detail

// Recomputes the full objective over the entire domain grid by brute force;
// the acceptance oracle for the lattice search below.
struct DoubleMinVerification {
    std::size_t cluster_count = 0;
    std::vector<ArgminCluster> clusters;
    double min_value = 0.0;
    double value_spread = 0.0;  // max - min over cluster values
    bool multiple() const { return cluster_count >= 2; }
};

inline DoubleMinVerification verify_double_minimum(const Point& y0, const SetSpec& domain,
                                                   const std::vector<Point>& image, const Perturbation& phi,
                                                   double eps_v, double eps_s) {
    domain.validate();
    if (image.size() != domain.samples.size()) throw std::invalid_argument("verify_double_minimum: image size mismatch");
    const std::vector<double> values = detail::squared_distance_objective(image, phi, y0);
    DoubleMinVerification rep;
    rep.clusters = cluster_argmins(domain, values, eps_v, eps_s);
    rep.cluster_count = rep.clusters.size();
    rep.min_value = *std::min_element(values.begin(), values.end());
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& c : rep.clusters) {
        lo = std::min(lo, c.value);
        hi = std::max(hi, c.value);
    }
    rep.value_spread = (rep.cluster_count > 0) ? hi - lo : 0.0;
    return rep;
}

// Lattice search for y0 in the admissible ball maximizing the detected
// multiplicity of x -> ||psi(x) - y0||^2 + phi(x). When no lattice point
// reaches two clusters, the two leading candidates are refined by bisection
// on the connecting segment, equalizing the two best cluster values. Search
// exhaustion is a reported outcome, not an error.
inline DoubleMinSearch find_double_minimum(const Point& u0, const SetSpec& domain, const std::vector<Point>& image,
                                           const Perturbation& phi, const RadiusCertificate& cert,
                                           const BallLattice& lattice, const DoubleMinParams& params = {}) {
    domain.validate();
    if (image.size() != domain.samples.size()) throw std::invalid_argument("find_double_minimum: image size mismatch");
    if (phi.size() != domain.samples.size()) throw std::invalid_argument("find_double_minimum: perturbation size mismatch");
    if (!cert.admissible()) throw std::invalid_argument("find_double_minimum: certificate is not admissible");

    DoubleMinSearch out;
    SetSpec image_set;
    image_set.kind = domain.kind;
    image_set.samples = image;
    image_set.params = domain.params;
    image_set.provenance = "image";
    out.image_nonconvexity = nonconvexity_certificate(image_set);
    if (!out.image_nonconvexity.nonconvex) {
        throw std::invalid_argument("find_double_minimum: image set not certified non-convex");
    }

    const std::vector<Point> cands = lattice.points();
    out.candidates = cands.size();
    if (cands.empty()) return out;

    const std::function<detail::CandidateScore(std::size_t)> score = [&](std::size_t i) {
        const auto values = detail::squared_distance_objective(image, phi, cands[i]);
        return detail::score_candidate(domain, values, params.eps_v, params.eps_s);
    };
    const auto scores = parallel_map<detail::CandidateScore>(cands.size(), params.threads, score);

    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const auto& s = scores[i];
        const auto& b = scores[best_idx];
        const bool better = (s.multiplicity > b.multiplicity) || (s.multiplicity == b.multiplicity && s.gap < b.gap);
        if (i > 0 && better) best_idx = i;
    }
    out.best_multiplicity = scores[best_idx].multiplicity;
    out.best_gap = scores[best_idx].gap;
    out.best_candidate = cands[best_idx];

    Point y_final = cands[best_idx];
    if (scores[best_idx].multiplicity < 2 && scores[best_idx].has_runner_up) {
        // Equalize the leading pair: s(y) = F(runner_up; y) - F(argmin; y)
        // is >= 0 at the best candidate; bisect toward a lattice point where
        // the leadership flips.
        const std::size_t c1 = scores[best_idx].argmin;
        const std::size_t c2 = scores[best_idx].runner_up;
        const auto signed_gap = [&](const Point& y) {
            return (dist_sq(image[c2], y) + phi[c2]) - (dist_sq(image[c1], y) + phi[c1]);
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
            const double gap_tol = params.gap_tol_scale * (1.0 + std::abs(scores[best_idx].min_value));
            for (int it = 0; it < params.bisect_iters; ++it) {
                const Point mid = lerp(a, b, 0.5);
                const double s = signed_gap(mid);
                if (std::abs(s) <= gap_tol) {
                    a = mid;
                    break;
                }
                if (s > 0.0) {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            y_final = a;
        }
    }

    const auto verification = verify_double_minimum(y_final, domain, image, phi, params.eps_v, params.eps_s);
    if (verification.multiple()) {
        DoubleMinWitness w;
        w.y0 = y_final;
        w.clusters = verification.clusters;
        w.objective_min = verification.min_value;
        w.ball_radius_used = cert.r;
        if (dist(w.y0, u0) < cert.r) out.witness = std::move(w);
        out.best_multiplicity = std::max(out.best_multiplicity, static_cast<int>(verification.cluster_count));
    }
    return out;
}

}  // namespace multimin
