#pragma once

// Multi-solution root machinery: the explicit admissible-radius constant for
// graph sets {(x, J(x))}, deflated damped-Newton root enumeration, a
// bracketing bisection oracle for scalar equations, and the lattice search
// for (y0, mu0) making x + I'(x) + mu0 J'(x) = y0 have three solutions.

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
#include "multimin/functions.hpp"
#include "multimin/geometry.hpp"
#include "multimin/sampling.hpp"
#include "multimin/vec.hpp"

namespace multimin {

using FieldFn = std::function<double(const Point&)>;
using VectorField = std::function<Point(const Point&)>;

// Central-difference gradient with step 1e-6 * (1 + |x_i|) per component.
inline Point fd_gradient(const FieldFn& f, const Point& x) {
    Point g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = 1e-6 * (1.0 + std::abs(x[i]));
        Point xp = x;
        Point xm = x;
        xp[i] += h;
        xm[i] -= h;
        g[i] = (f(xp) - f(xm)) / (2.0 * h);
    }
    return g;
}

struct GraphPoint {
    Point x;
    double lam = 0.0;  // J(x) up to evaluation tolerance

    Point flat() const {
        Point p = x;
        p.push_back(lam);
        return p;
    }
};

inline GraphPoint graph_point(const FieldFn& J, Point x) {
    GraphPoint g;
    g.lam = J(x);
    g.x = std::move(x);
    return g;
}

struct GraphGridParams {
    double step = 1e-3;       // aligned grid step (dimension 1)
    double r_cut = 0.0;       // 0 = automatic 3 (||x_hat|| + sup |J|)
    std::size_t sample_budget = 20000;  // Halton budget for dimension >= 2
    std::size_t ball_samples = 256;     // for the excess-sup proxy check
};

struct GraphRadiusReport {
    bool hypotheses_ok = false;
    std::string failure;
    double bound = 0.0;       // right-hand side of the radius inequality
    double delta = 0.0;       // inf sqrt(||x||^2 + J(x)^2)
    double graph_min = 0.0;   // inf (||x||^2 + J(x)^2)
    double hat_value = 0.0;   // ||x_hat||^2 + J(x_hat)^2
    double sup_2I_minus_J2 = 0.0;
    double inf_2I_minus_J2 = 0.0;
    double r_cut = 0.0;
    double r_cut_sensitivity = 0.0;  // |bound(r_cut) - bound(2 r_cut)|
    double excess_sup_sample = 0.0;  // sampled distance-excess proxy
    bool excess_bound_ok = false;    // proxy <= hat_value
};

namespace detail {

// Aligned evaluation grid: multiples of `step` with |x| <= cut, so enlarging
// the cut only appends nodes and interior extrema are reproduced exactly.
inline std::vector<double> aligned_grid(double step, double cut) {
    const long kmax = static_cast<long>(std::floor(cut / step));
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(2 * kmax + 1));
    for (long k = -kmax; k <= kmax; ++k) xs.push_back(static_cast<double>(k) * step);
    return xs;
}

struct GraphExtrema {
    double graph_min = std::numeric_limits<double>::infinity();      // inf ||x||^2 + J^2
    double sup_w = -std::numeric_limits<double>::infinity();         // sup 2I - J^2
    double inf_w = std::numeric_limits<double>::infinity();          // inf 2I - J^2
};

inline GraphExtrema graph_extrema_1d(const FieldFn& I, const FieldFn& J, double step, double cut) {
    GraphExtrema e;
    for (double x : aligned_grid(step, cut)) {
        const Point p = {x};
        const double j = J(p);
        const double w = 2.0 * I(p) - j * j;
        if (!std::isfinite(j) || !std::isfinite(w)) {
            throw std::invalid_argument("graph_radius_bound: non-finite field value on the grid");
        }
        e.graph_min = std::min(e.graph_min, x * x + j * j);
        e.sup_w = std::max(e.sup_w, w);
        e.inf_w = std::min(e.inf_w, w);
    }
    return e;
}

inline GraphExtrema graph_extrema_nd(const FieldFn& I, const FieldFn& J, std::size_t dim, double cut,
                                     std::size_t budget) {
    GraphExtrema e;
    // Halton box samples plus the origin; deterministic.
    std::vector<Point> pts = ball_points(dim, cut * std::sqrt(static_cast<double>(dim)), budget);
    pts.push_back(zeros(dim));
    for (const Point& p : pts) {
        const double j = J(p);
        const double w = 2.0 * I(p) - j * j;
        if (!std::isfinite(j) || !std::isfinite(w)) {
            throw std::invalid_argument("graph_radius_bound: non-finite field value on the grid");
        }
        e.graph_min = std::min(e.graph_min, norm_sq(p) + j * j);
        e.sup_w = std::max(e.sup_w, w);
        e.inf_w = std::min(e.inf_w, w);
    }
    return e;
}

}  // namespace detail

// Right-hand side of the admissible-radius inequality for the graph set of J
// with origin center: [hat_value - inf(||x||^2+J^2) + osc(2I-J^2)] /
// [2 inf sqrt(||x||^2+J^2)], all extrema over a coercivity-truncated grid.
// Hypothesis gates: J(0) != 0 and J(-x_hat) = -J(x_hat).
inline GraphRadiusReport graph_radius_bound(const FieldFn& I, const FieldFn& J, const Point& x_hat,
                                            const GraphGridParams& params = {}) {
    GraphRadiusReport rep;
    const std::size_t dim = x_hat.size();
    const double j0 = J(zeros(dim));
    const double j_hat = J(x_hat);
    const double j_hat_neg = J(scale(x_hat, -1.0));
    if (std::abs(j0) <= 1e-12 * (1.0 + std::abs(j_hat))) {
        rep.failure = "J(0) = 0";
        return rep;
    }
    if (std::abs(j_hat_neg + j_hat) > 1e-9 * (1.0 + std::abs(j_hat))) {
        rep.failure = "J(-x_hat) != -J(x_hat)";
        return rep;
    }

    // probe sup |J| for the automatic truncation radius
    double sup_abs_j = std::abs(j0);
    {
        const double probe = norm(x_hat) + 10.0;
        if (dim == 1) {
            for (double x : detail::aligned_grid(std::max(params.step, probe / 4000.0), probe)) {
                sup_abs_j = std::max(sup_abs_j, std::abs(J({x})));
            }
        } else {
            for (const Point& p : ball_points(dim, probe, 4000)) sup_abs_j = std::max(sup_abs_j, std::abs(J(p)));
        }
    }
    rep.r_cut = (params.r_cut > 0.0) ? params.r_cut : 3.0 * (norm(x_hat) + sup_abs_j);

    const auto extrema = [&](double cut) {
        return (dim == 1) ? detail::graph_extrema_1d(I, J, params.step, cut)
                          : detail::graph_extrema_nd(I, J, dim, cut, params.sample_budget);
    };
    const auto e1 = extrema(rep.r_cut);
    const auto e2 = extrema(2.0 * rep.r_cut);

    rep.hat_value = norm_sq(x_hat) + j_hat * j_hat;
    rep.graph_min = e1.graph_min;
    rep.sup_2I_minus_J2 = e1.sup_w;
    rep.inf_2I_minus_J2 = e1.inf_w;
    rep.delta = std::sqrt(e1.graph_min);
    if (rep.delta <= 0.0) {
        rep.failure = "graph passes through the origin";
        return rep;
    }
    const auto bound_from = [&](const detail::GraphExtrema& e) {
        return (rep.hat_value - e.graph_min + (e.sup_w - e.inf_w)) / (2.0 * std::sqrt(e.graph_min));
    };
    rep.bound = bound_from(e1);
    rep.r_cut_sensitivity = std::abs(rep.bound - bound_from(e2));

    // Sampled distance-excess proxy at r = bound: the hull bound keeps it
    // below hat_value.
    {
        const double r = std::max(rep.bound, 1e-6);
        std::vector<Point> ball = ball_points(dim + 1, r, params.ball_samples);
        ball.push_back(zeros(dim + 1));
        double excess = -std::numeric_limits<double>::infinity();
        const std::vector<double> coarse =
            (dim == 1) ? detail::aligned_grid(std::max(params.step * 10.0, 1e-3), rep.r_cut) : std::vector<double>{};
        for (const Point& v : ball) {
            double inf = std::numeric_limits<double>::infinity();
            if (dim == 1) {
                for (double x : coarse) {
                    const double j = J({x});
                    inf = std::min(inf, x * x + j * j - 2.0 * (x * v[0] + j * v[1]));
                }
            } else {
                for (const Point& p : ball_points(dim, rep.r_cut, 2000)) {
                    const double j = J(p);
                    double ip = j * v[dim];
                    for (std::size_t d = 0; d < dim; ++d) ip += p[d] * v[d];
                    inf = std::min(inf, norm_sq(p) + j * j - 2.0 * ip);
                }
            }
            excess = std::max(excess, inf);
        }
        rep.excess_sup_sample = excess;
        rep.excess_bound_ok = excess <= rep.hat_value + 1e-6 * (1.0 + std::abs(rep.hat_value));
    }

    rep.hypotheses_ok = true;
    return rep;
}

// Graph set {(x, J(x))} over an aligned 1-D grid, as a parametric curve.
inline SetSpec graph_set(const FieldFn& J, double step, double cut) {
    std::vector<double> xs = detail::aligned_grid(step, cut);
    return SetSpec::parametric(
        std::move(xs), [&](double x) { return graph_point(J, {x}).flat(); }, "graph of J");
}

struct DeflatedStats {
    std::size_t starts = 0;
    std::size_t converged = 0;
    std::size_t jacobian_breakdowns = 0;
    std::size_t stalled = 0;
};

namespace detail {

// Dense Gaussian elimination with partial pivoting; dimensions here are <= 4.
inline bool solve_dense(std::vector<std::vector<double>> A, Point b, Point& out) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t row = col + 1; row < n; ++row) {
            if (std::abs(A[row][col]) > std::abs(A[piv][col])) piv = row;
        }
        if (std::abs(A[piv][col]) < 1e-300) return false;
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t row = col + 1; row < n; ++row) {
            const double m = A[row][col] / A[col][col];
            for (std::size_t k = col; k < n; ++k) A[row][k] -= m * A[col][k];
            b[row] -= m * b[col];
        }
    }
    out.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= A[i][k] * out[k];
        out[i] = s / A[i][i];
    }
    return true;
}

inline double deflation_multiplier(const Point& x, const std::vector<Point>& roots) {
    double m = 1.0;
    for (const Point& r : roots) {
        const double d2 = dist_sq(x, r);
        if (d2 < 1e-300) return std::numeric_limits<double>::infinity();
        m *= 1.0 / d2 + 1.0;
    }
    return m;
}

}  // namespace detail

// Damped Newton (finite-difference Jacobian) from each start; found roots
// deflate subsequent searches through the shifted-inverse-square multiplier
// prod_j (1/||x - x_j||^2 + 1). Returned roots satisfy ||F(root)|| < tol_root
// re-evaluated post hoc, are pairwise eps_s-separated and sorted
// lexicographically.
inline std::vector<Point> solve_deflated(const VectorField& F, const std::vector<Point>& starts, double tol_root,
                                         double eps_s, DeflatedStats* stats = nullptr, int max_iters = 120) {
    if (tol_root <= 0.0 || eps_s <= 0.0) throw std::invalid_argument("solve_deflated: tolerances must be positive");
    std::vector<Point> roots;
    DeflatedStats local;
    local.starts = starts.size();

    const auto deflated = [&](const Point& x) {
        Point v = F(x);
        const double m = detail::deflation_multiplier(x, roots);
        for (double& c : v) c *= m;
        return v;
    };
    const auto sup_norm = [](const Point& v) {
        double s = 0.0;
        for (double c : v) s = std::max(s, std::abs(c));
        return s;
    };

    for (const Point& start : starts) {
        Point x = start;
        if (!std::isfinite(detail::deflation_multiplier(x, roots))) {
            ++local.stalled;  // start sits on an already-found root
            continue;
        }
        bool converged = false;
        bool breakdown = false;
        const std::size_t n = x.size();
        for (int it = 0; it < max_iters; ++it) {
            const Point g = deflated(x);
            const double gn = sup_norm(g);
            if (sup_norm(F(x)) < tol_root) {
                converged = true;
                break;
            }
            // FD Jacobian of the deflated field
            std::vector<std::vector<double>> Jm(n, std::vector<double>(n, 0.0));
            bool finite = true;
            for (std::size_t jcol = 0; jcol < n; ++jcol) {
                const double h = 1e-7 * (1.0 + std::abs(x[jcol]));
                Point xp = x;
                Point xm = x;
                xp[jcol] += h;
                xm[jcol] -= h;
                const Point fp = deflated(xp);
                const Point fm = deflated(xm);
                for (std::size_t irow = 0; irow < n; ++irow) {
                    Jm[irow][jcol] = (fp[irow] - fm[irow]) / (2.0 * h);
                    if (!std::isfinite(Jm[irow][jcol])) finite = false;
                }
            }
            Point step;
            Point rhs = g;
            for (double& c : rhs) c = -c;
            if (!finite || !detail::solve_dense(std::move(Jm), std::move(rhs), step)) {
                breakdown = true;
                break;
            }
            // backtracking on the deflated residual
            double t = 1.0;
            bool accepted = false;
            for (int half = 0; half < 60; ++half) {
                Point xt = x;
                for (std::size_t d = 0; d < n; ++d) xt[d] += t * step[d];
                const double gt = sup_norm(deflated(xt));
                if (std::isfinite(gt) && gt < (1.0 - 1e-4 * t) * gn) {
                    x = std::move(xt);
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if (!accepted) break;  // stall
        }
        if (!converged && !breakdown && sup_norm(F(x)) < tol_root) converged = true;
        if (converged && sup_norm(F(x)) < tol_root) {
            bool fresh = true;
            for (const Point& r : roots) {
                if (dist(x, r) <= eps_s) {
                    fresh = false;
                    break;
                }
            }
            if (fresh) {
                roots.push_back(x);
                ++local.converged;
            }
        } else if (breakdown) {
            ++local.jacobian_breakdowns;
        } else {
            ++local.stalled;
        }
    }
    std::sort(roots.begin(), roots.end(), lex_less);
    if (stats) *stats = local;
    return roots;
}

struct ScalarRootScan {
    std::vector<double> roots;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t brackets = 0;
};

// All roots of g on [lo, hi] by bisection on every sign-change bracket over
// n_brackets subintervals. Exact zeros at nodes are kept.
inline ScalarRootScan bracketed_roots(const std::function<double(double)>& g, double lo, double hi,
                                      std::size_t n_brackets, double tol = 1e-13) {
    if (!(hi > lo) || n_brackets == 0) throw std::invalid_argument("bracketed_roots: bad interval");
    ScalarRootScan out;
    out.lo = lo;
    out.hi = hi;
    out.brackets = n_brackets;
    const double width = (hi - lo) / static_cast<double>(n_brackets);
    double a = lo;
    double ga = g(a);
    for (std::size_t k = 0; k < n_brackets; ++k) {
        const double b = (k + 1 == n_brackets) ? hi : lo + width * static_cast<double>(k + 1);
        const double gb = g(b);
        if (ga == 0.0) out.roots.push_back(a);
        if (ga * gb < 0.0) {
            double l = a;
            double r = b;
            double gl = ga;
            for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (l + r);
                const double gm = g(m);
                if (gm == 0.0 || (r - l) < tol * (1.0 + std::abs(m))) {
                    l = m;
                    break;
                }
                if (gl * gm < 0.0) {
                    r = m;
                } else {
                    l = m;
                    gl = gm;
                }
            }
            out.roots.push_back(0.5 * (l + r));
        }
        a = b;
        ga = gb;
    }
    if (ga == 0.0) out.roots.push_back(hi);
    // merge duplicates from node-exact zeros
    std::sort(out.roots.begin(), out.roots.end());
    std::vector<double> merged;
    for (double r : out.roots) {
        if (merged.empty() || std::abs(r - merged.back()) > 1e-10 * (1.0 + std::abs(r))) merged.push_back(r);
    }
    out.roots = std::move(merged);
    return out;
}

// The scalar station field x + a J'(x) - b with the derivative taken from the
// registered closed form when present, central differences otherwise.
inline std::function<double(double)> scalar_station_field(const ScalarFunction& J, double a, double b) {
    if (J.derivative) {
        const auto dJ = J.derivative;
        return [dJ, a, b](double x) { return x + a * dJ(x) - b; };
    }
    const auto f = J.f;
    return [f, a, b](double x) { return x + a * central_derivative(f, x) - b; };
}

// Interval guaranteed to contain every root of x + a J'(x) = b:
// |x| <= |b| + |a| sup|J'|, with sup|J'| sampled and the user hint honored.
inline std::pair<double, double> enclosing_interval(const ScalarFunction& J, double a, double b, double hint_lo,
                                                    double hint_hi) {
    const double probe = std::max({std::abs(hint_lo), std::abs(hint_hi), std::abs(b) + std::abs(a) + 1.0});
    double sup_dj = 0.0;
    const std::size_t m = 4001;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = -probe + 2.0 * probe * static_cast<double>(i) / static_cast<double>(m - 1);
        const double dj = J.derivative ? J.derivative(x) : central_derivative(J.f, x);
        sup_dj = std::max(sup_dj, std::abs(dj));
    }
    const double radius = std::abs(b) + std::abs(a) * sup_dj * (1.0 + 1e-9) + 1e-9;
    return {std::min(hint_lo, -radius), std::max(hint_hi, radius)};
}

// 1-D oracle for the deflated solver: bisection root scan of x + a J'(x) = b
// on an interval enforced to contain all roots.
inline ScalarRootScan scalar_root_scan(const ScalarFunction& J, double a, double b, double hint_lo, double hint_hi,
                                       std::size_t n_brackets) {
    const auto [lo, hi] = enclosing_interval(J, a, b, hint_lo, hint_hi);
    return bracketed_roots(scalar_station_field(J, a, b), lo, hi, n_brackets);
}

struct ThreeSolutionWitness {
    Point y0;
    double mu0 = 0.0;
    std::vector<Point> roots;        // >= 3, pairwise eps_s-separated, lex order
    std::vector<double> residuals;   // ||F(root)|| re-evaluated post hoc
    double radius_used = 0.0;
};

struct ThreeSolutionSearch {
    std::optional<ThreeSolutionWitness> witness;
    std::size_t candidates_tried = 0;
    int max_roots_seen = 0;
    bool user_radius_override = false;
    DeflatedStats last_stats;
};

struct ThreeSolutionParams {
    double lattice_spacing = 0.1;
    double tol_root = 1e-12;
    double eps_s = 1e-4;
    std::size_t starts_per_axis = 21;
    int threads = 1;
};

// Candidate field F(x) = x + grad I(x) + mu0 grad J(x) - y0 with
// central-difference gradients.
inline VectorField station_field(const FieldFn& I, const FieldFn& J, const Point& y0, double mu0) {
    return [&I, &J, y0, mu0](const Point& x) {
        Point v = x;
        const Point gi = fd_gradient(I, x);
        const Point gj = fd_gradient(J, x);
        for (std::size_t d = 0; d < x.size(); ++d) v[d] += gi[d] + mu0 * gj[d] - y0[d];
        return v;
    };
}

// Scans lattice points (y0, mu0) with ||y0||^2 + mu0^2 < r^2 in (norm, lex)
// order, runs the deflated solver on each and returns the first candidate
// with >= 3 roots. Exhaustion is a reported outcome.
inline ThreeSolutionSearch find_three_solutions(const FieldFn& I, const FieldFn& J, std::size_t dim, double r,
                                                const ThreeSolutionParams& params = {}, bool user_override = false) {
    if (r <= 0.0) throw std::invalid_argument("find_three_solutions: radius must be positive");
    ThreeSolutionSearch out;
    out.user_radius_override = user_override;

    BallLattice lattice;
    lattice.center = zeros(dim + 1);
    lattice.radius = r;
    lattice.spacing = params.lattice_spacing;
    const std::vector<Point> cands = lattice.points();

    // start box large enough to contain all roots of the station equation
    double sup_grad = 0.0;
    for (const Point& p : ball_points(dim, 10.0, 2000)) {
        sup_grad = std::max(sup_grad, norm(fd_gradient(I, p)) + norm(fd_gradient(J, p)));
    }

    struct CandidateResult {
        std::vector<Point> roots;
        DeflatedStats stats;
    };
    const auto solve_candidate = [&](const Point& cand) {
        Point y0(cand.begin(), cand.begin() + static_cast<long>(dim));
        const double mu0 = cand[dim];
        const double start_radius = norm(y0) + (1.0 + std::abs(mu0)) * sup_grad + 1.0;

        std::vector<Point> starts;
        if (dim == 1) {
            for (std::size_t i = 0; i < params.starts_per_axis; ++i) {
                const double t = -start_radius + 2.0 * start_radius * static_cast<double>(i) /
                                                     static_cast<double>(params.starts_per_axis - 1);
                starts.push_back({t});
            }
        } else {
            starts = ball_points(dim, start_radius, params.starts_per_axis * dim * 3);
            starts.push_back(zeros(dim));
        }

        CandidateResult res;
        const VectorField F = station_field(I, J, y0, mu0);
        res.roots = solve_deflated(F, starts, params.tol_root, params.eps_s, &res.stats);
        return res;
    };

    // candidates are evaluated in chunks; the commit walks each chunk in
    // lattice order, so the selected witness is the first regardless of the
    // thread count
    const std::size_t chunk = std::max<std::size_t>(8, static_cast<std::size_t>(params.threads) * 4);
    for (std::size_t base = 0; base < cands.size() && !out.witness; base += chunk) {
        const std::size_t count = std::min(chunk, cands.size() - base);
        const std::function<CandidateResult(std::size_t)> eval = [&](std::size_t i) {
            return solve_candidate(cands[base + i]);
        };
        const auto block = parallel_map<CandidateResult>(count, params.threads, eval);
        for (std::size_t i = 0; i < count; ++i) {
            ++out.candidates_tried;
            const Point& cand = cands[base + i];
            const auto& res = block[i];
            out.max_roots_seen = std::max(out.max_roots_seen, static_cast<int>(res.roots.size()));
            out.last_stats = res.stats;
            if (res.roots.size() >= 3) {
                ThreeSolutionWitness w;
                w.y0 = Point(cand.begin(), cand.begin() + static_cast<long>(dim));
                w.mu0 = cand[dim];
                w.radius_used = r;
                const VectorField F = station_field(I, J, w.y0, w.mu0);
                for (const Point& root : res.roots) {
                    w.residuals.push_back(norm(F(root)));
                    w.roots.push_back(root);
                }
                out.witness = std::move(w);
                break;
            }
        }
    }
    return out;
}

}  // namespace multimin
