#pragma once

// Finite-dimensional substrate: non-convex set specifications as sample
// grids, distance fields, epsilon-argmin extraction and single-linkage
// multiplicity clusters. All sup/inf over a set are exact extrema over its
// samples.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "multimin/vec.hpp"

namespace multimin {

enum class SetKind { PointCloud, ParametricCurve };

// A target set given as a finite sample grid. Point clouds are exact finite
// sets; parametric curves are reproducible discretizations of a stored
// parameter grid.
struct SetSpec {
    SetKind kind = SetKind::PointCloud;
    std::vector<Point> samples;
    std::vector<double> params;  // parametric curves only, aligned with samples
    std::string provenance;

    std::size_t size() const { return samples.size(); }

    std::size_t dimension() const {
        if (samples.empty()) throw std::invalid_argument("SetSpec: empty sample set");
        return samples.front().size();
    }

    void validate() const {
        if (samples.empty()) throw std::invalid_argument("SetSpec: empty sample set");
        const std::size_t dim = samples.front().size();
        if (dim == 0) throw std::invalid_argument("SetSpec: zero-dimensional samples");
        for (const Point& p : samples) {
            if (p.size() != dim) throw std::invalid_argument("SetSpec: inconsistent sample dimension");
            check_finite(p, "SetSpec");
        }
        if (kind == SetKind::ParametricCurve && params.size() != samples.size()) {
            throw std::invalid_argument("SetSpec: parametric curve requires one parameter per sample");
        }
    }

    static SetSpec point_cloud(std::vector<Point> pts, std::string provenance = {}) {
        SetSpec s;
        s.kind = SetKind::PointCloud;
        s.samples = std::move(pts);
        s.provenance = std::move(provenance);
        s.validate();
        return s;
    }

    static SetSpec parametric(std::vector<double> parameter_grid, const std::function<Point(double)>& curve,
                              std::string provenance = {}) {
        SetSpec s;
        s.kind = SetKind::ParametricCurve;
        s.params = std::move(parameter_grid);
        s.samples.reserve(s.params.size());
        for (double t : s.params) s.samples.push_back(curve(t));
        s.provenance = std::move(provenance);
        s.validate();
        return s;
    }
};

inline double set_diameter(const SetSpec& X) {
    X.validate();
    double d2 = 0.0;
    for (std::size_t i = 0; i < X.samples.size(); ++i) {
        for (std::size_t j = i + 1; j < X.samples.size(); ++j) {
            d2 = std::max(d2, dist_sq(X.samples[i], X.samples[j]));
        }
    }
    return std::sqrt(d2);
}

// Discretization chord. Curves: max distance between consecutive samples.
// Point clouds are exact sets, chord 0.
inline double grid_chord(const SetSpec& X) {
    X.validate();
    if (X.kind != SetKind::ParametricCurve || X.samples.size() < 2) return 0.0;
    double c = 0.0;
    for (std::size_t i = 0; i + 1 < X.samples.size(); ++i) c = std::max(c, dist(X.samples[i], X.samples[i + 1]));
    return c;
}

// min over samples of ||p - x||; exactly 0 when p is a sample.
inline double dist_to_set(const Point& p, const SetSpec& X) {
    X.validate();
    check_same_dim(p, X.samples.front(), "dist_to_set");
    double best = std::numeric_limits<double>::infinity();
    for (const Point& x : X.samples) best = std::min(best, dist_sq(p, x));
    return std::sqrt(best);
}

inline std::size_t nearest_index(const Point& p, const SetSpec& X) {
    X.validate();
    check_same_dim(p, X.samples.front(), "nearest_index");
    std::size_t arg = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < X.samples.size(); ++i) {
        const double d = dist_sq(p, X.samples[i]);
        if (d < best) {
            best = d;
            arg = i;
        }
    }
    return arg;
}

// A bounded perturbation on the sample grid with certified extrema.
struct Perturbation {
    std::vector<double> values;
    double lo = 0.0;
    double hi = 0.0;

    static Perturbation from_values(std::vector<double> vals) {
        if (vals.empty()) throw std::invalid_argument("Perturbation: empty value list");
        Perturbation p;
        p.lo = *std::min_element(vals.begin(), vals.end());
        p.hi = *std::max_element(vals.begin(), vals.end());
        p.values = std::move(vals);
        for (double v : p.values) {
            if (!std::isfinite(v)) throw std::invalid_argument("Perturbation: non-finite value");
        }
        return p;
    }

    static Perturbation from_function(const std::function<double(const Point&)>& phi, const SetSpec& X) {
        std::vector<double> vals;
        vals.reserve(X.samples.size());
        for (const Point& x : X.samples) vals.push_back(phi(x));
        return from_values(std::move(vals));
    }

    static Perturbation zero(std::size_t count) { return from_values(std::vector<double>(count, 0.0)); }

    double operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }
};

inline double oscillation(const Perturbation& phi) { return phi.hi - phi.lo; }

// Indices i with F(i) <= min F + eps_v, in sample order. Ties are kept.
inline std::vector<std::size_t> eps_argmin(const std::vector<double>& values, double eps_v) {
    if (eps_v <= 0.0) throw std::invalid_argument("eps_argmin: eps_v must be positive");
    if (values.empty()) throw std::invalid_argument("eps_argmin: empty objective");
    double lo = std::numeric_limits<double>::infinity();
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("eps_argmin: non-finite objective value");
        lo = std::min(lo, v);
    }
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] <= lo + eps_v) idx.push_back(i);
    }
    return idx;
}

inline std::vector<std::size_t> eps_argmin(const std::function<double(std::size_t)>& F, const SetSpec& X, double eps_v) {
    std::vector<double> values(X.samples.size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = F(i);
    return eps_argmin(values, eps_v);
}

struct ArgminCluster {
    std::vector<std::size_t> members;  // sample indices, ascending
    Point representative;
    double value = 0.0;  // cluster-min objective value
};

namespace detail {

// Single-linkage grouping at threshold eps_s over the given points;
// deterministic in input order. Group ids are assigned by first appearance.
inline std::vector<std::vector<std::size_t>> single_linkage(const std::vector<Point>& pts, double eps_s) {
    if (eps_s <= 0.0) throw std::invalid_argument("cluster: eps_s must be positive");
    const std::size_t n = pts.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    };
    const double eps2 = eps_s * eps_s;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dist_sq(pts[i], pts[j]) <= eps2) {
                const std::size_t ra = find(i);
                const std::size_t rb = find(j);
                if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
            }
        }
    }
    std::vector<std::vector<std::size_t>> groups;
    std::vector<long> group_of(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        if (group_of[r] < 0) {
            group_of[r] = static_cast<long>(groups.size());
            groups.emplace_back();
        }
        groups[static_cast<std::size_t>(group_of[r])].push_back(i);
    }
    return groups;
}

}  // namespace detail

// Single-linkage clustering at threshold eps_s. Distinct clusters are
// separated by more than eps_s in minimum linkage; representatives are the
// first members in input order.
inline std::vector<ArgminCluster> cluster_points(const std::vector<Point>& pts, double eps_s) {
    if (pts.empty()) return {};
    for (const Point& p : pts) check_same_dim(p, pts.front(), "cluster_points");
    std::vector<ArgminCluster> out;
    for (auto& g : detail::single_linkage(pts, eps_s)) {
        ArgminCluster c;
        c.members = std::move(g);
        c.representative = pts[c.members.front()];
        out.push_back(std::move(c));
    }
    return out;
}

// eps-argmin of the objective followed by spatial clustering; every cluster
// carries its minimum objective value and the attaining sample as
// representative.
inline std::vector<ArgminCluster> cluster_argmins(const SetSpec& X, const std::vector<double>& values, double eps_v,
                                                  double eps_s) {
    if (values.size() != X.samples.size()) throw std::invalid_argument("cluster_argmins: objective/sample size mismatch");
    const std::vector<std::size_t> idx = eps_argmin(values, eps_v);
    std::vector<Point> pts;
    pts.reserve(idx.size());
    for (std::size_t i : idx) pts.push_back(X.samples[i]);
    std::vector<ArgminCluster> out;
    for (auto& g : detail::single_linkage(pts, eps_s)) {
        ArgminCluster c;
        c.value = std::numeric_limits<double>::infinity();
        std::size_t best = idx[g.front()];
        for (std::size_t local : g) {
            const std::size_t sample = idx[local];
            c.members.push_back(sample);
            if (values[sample] < c.value) {
                c.value = values[sample];
                best = sample;
            }
        }
        c.representative = X.samples[best];
        out.push_back(std::move(c));
    }
    return out;
}

// Scale-aware default tolerances.
struct Tolerances {
    // value closeness for near-global minima
    static double value_eps(double min_value) { return 1e-8 * (1.0 + std::abs(min_value)); }
    // spatial separation between distinct minimizers
    static double separation_eps(double diameter) { return 1e-3 * diameter; }
};

}  // namespace multimin
