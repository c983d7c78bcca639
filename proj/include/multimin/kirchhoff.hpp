#pragma once

// Nonlocal two-point boundary value problem
//   -omega(int |u'|^2) u'' = beta(t) f(u) + alpha(t),  u(0) = u(1) = 0,
//   int |u'|^2 < rho,
// discretized on a uniform interior grid with second-order central
// differences and the exact piecewise-linear Dirichlet energy. Critical
// points of the discrete energy are enumerated by a multi-start
// descent-then-Newton solver whose Jacobian is tridiagonal plus rank one.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "multimin/functions.hpp"
#include "multimin/util.hpp"

namespace multimin::kirchhoff {

struct KirchhoffProblem {
    ScalarFunction f;      // reaction
    ScalarFunction omega;  // nonlocal coefficient on [0, rho)
    double rho = 1.0;      // energy budget
    std::size_t n = 100;   // interior grid size
    double margin = 1e-3;  // fraction of rho reserved below the constraint

    double h() const { return 1.0 / static_cast<double>(n + 1); }
    double q_cap() const { return rho * (1.0 - margin); }
    double node(std::size_t i) const { return static_cast<double>(i + 1) * h(); }  // t_{i+1}, i in [0, n)

    double omega_at(double q) const {
        if (!(q >= 0.0 && q <= q_cap())) throw std::invalid_argument("KirchhoffProblem: q outside [0, rho(1-margin)]");
        return omega.f(q);
    }
    double omega_tilde(double q) const {
        if (!(q >= 0.0 && q <= q_cap())) throw std::invalid_argument("KirchhoffProblem: q outside [0, rho(1-margin)]");
        return antiderivative_smooth(omega, q);
    }
    double omega_prime(double q) const {
        if (omega.derivative) return omega.derivative(q);
        const double h_fd = 1e-6 * (1.0 + q);
        const double lo = std::max(0.0, q - h_fd);
        const double hi = std::min(q_cap(), q + h_fd);
        return (omega.f(hi) - omega.f(lo)) / (hi - lo);
    }
};

// Forcing pair (alpha, beta) from the trig family
// c0 + sum_k (c_{2k-1} cos(pi k t) + c_{2k} sin(pi k t)), dense in C0([0,1])
// as the degree grows, with nodal values cached on the interior grid.
struct Forcing {
    std::vector<double> alpha_coeff;  // layout [a0, a1c, a1s, a2c, a2s, ...]
    std::vector<double> beta_coeff;
    std::vector<double> alpha;  // nodal values
    std::vector<double> beta;

    static double eval_basis(const std::vector<double>& c, double t) {
        if (c.empty()) return 0.0;
        double v = c[0];
        const double pi = 3.14159265358979323846;
        for (std::size_t k = 1; 2 * k - 1 < c.size(); ++k) {
            v += c[2 * k - 1] * std::cos(pi * static_cast<double>(k) * t);
            if (2 * k < c.size()) v += c[2 * k] * std::sin(pi * static_cast<double>(k) * t);
        }
        return v;
    }

    static Forcing from_coefficients(std::vector<double> ac, std::vector<double> bc, const KirchhoffProblem& prob) {
        Forcing f;
        f.alpha_coeff = std::move(ac);
        f.beta_coeff = std::move(bc);
        f.alpha.resize(prob.n);
        f.beta.resize(prob.n);
        for (std::size_t i = 0; i < prob.n; ++i) {
            const double t = prob.node(i);
            f.alpha[i] = eval_basis(f.alpha_coeff, t);
            f.beta[i] = eval_basis(f.beta_coeff, t);
        }
        return f;
    }

    static Forcing constant(double a, double b, const KirchhoffProblem& prob) {
        return from_coefficients({a}, {b}, prob);
    }

    double sup_norm() const {
        double s = 0.0;
        for (double v : alpha) s = std::max(s, std::abs(v));
        for (double v : beta) s = std::max(s, std::abs(v));
        return s;
    }
};

// Exact Dirichlet energy of the piecewise-linear interpolant with zero
// boundary values.
inline double dirichlet_energy(const std::vector<double>& u, double h) {
    double q = 0.0;
    double prev = 0.0;
    for (double ui : u) {
        const double d = ui - prev;
        q += d * d;
        prev = ui;
    }
    q += prev * prev;  // last segment down to u(1) = 0
    return q / h;
}

struct DiscreteState {
    std::vector<double> u;  // interior nodal values
    double q = 0.0;         // cached int |u'|^2

    static DiscreteState from_nodal(std::vector<double> nodal, const KirchhoffProblem& prob, bool enforce_cap = true) {
        DiscreteState s;
        s.q = dirichlet_energy(nodal, prob.h());
        s.u = std::move(nodal);
        if (s.u.size() != prob.n) throw std::invalid_argument("DiscreteState: nodal size mismatch");
        if (enforce_cap && s.q >= prob.q_cap()) {
            throw std::invalid_argument("DiscreteState: Dirichlet energy exceeds rho(1-margin)");
        }
        return s;
    }

    double sup_norm() const {
        double s = 0.0;
        for (double v : u) s = std::max(s, std::abs(v));
        return s;
    }
};

// L2 distance of nodal interpolants, used to separate distinct states.
inline double state_distance(const DiscreteState& a, const DiscreteState& b, double h) {
    if (a.u.size() != b.u.size()) throw std::invalid_argument("state_distance: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.u.size(); ++i) {
        const double d = a.u[i] - b.u[i];
        s += d * d;
    }
    return std::sqrt(h * s);
}

// (1/2) omega_tilde(q) - sum_i h (beta_i ftilde(u_i) + alpha_i u_i);
// nodal quadrature is trapezoid-consistent since u vanishes at both ends.
inline double energy(const DiscreteState& state, const KirchhoffProblem& prob, const Forcing& forcing) {
    if (state.u.size() != prob.n) throw std::invalid_argument("energy: state/grid mismatch");
    const double h = prob.h();
    double load = 0.0;
    for (std::size_t i = 0; i < prob.n; ++i) {
        load += forcing.beta[i] * antiderivative_smooth(prob.f, state.u[i]) + forcing.alpha[i] * state.u[i];
    }
    return 0.5 * prob.omega_tilde(state.q) - h * load;
}

// Exact partial derivatives of the discrete energy:
// omega(q) (2u_i - u_{i-1} - u_{i+1}) / h - h (beta_i f(u_i) + alpha_i).
inline std::vector<double> energy_gradient(const DiscreteState& state, const KirchhoffProblem& prob,
                                           const Forcing& forcing) {
    if (state.u.size() != prob.n) throw std::invalid_argument("energy_gradient: state/grid mismatch");
    const double h = prob.h();
    const double w = prob.omega_at(state.q);
    std::vector<double> g(prob.n);
    for (std::size_t i = 0; i < prob.n; ++i) {
        const double left = (i == 0) ? 0.0 : state.u[i - 1];
        const double right = (i + 1 == prob.n) ? 0.0 : state.u[i + 1];
        g[i] = w * (2.0 * state.u[i] - left - right) / h - h * (forcing.beta[i] * prob.f.f(state.u[i]) + forcing.alpha[i]);
    }
    return g;
}

struct ResidualReport {
    double sup_residual = 0.0;  // max_i |-omega(q) u''_i - beta_i f(u_i) - alpha_i|
    double q_margin = 0.0;      // rho - q
};

inline ResidualReport residual_check(const DiscreteState& state, const KirchhoffProblem& prob, const Forcing& forcing) {
    const double h = prob.h();
    const double w = prob.omega_at(state.q);
    ResidualReport rep;
    rep.q_margin = prob.rho - state.q;
    for (std::size_t i = 0; i < prob.n; ++i) {
        const double left = (i == 0) ? 0.0 : state.u[i - 1];
        const double right = (i + 1 == prob.n) ? 0.0 : state.u[i + 1];
        const double r =
            w * (2.0 * state.u[i] - left - right) / (h * h) - forcing.beta[i] * prob.f.f(state.u[i]) - forcing.alpha[i];
        rep.sup_residual = std::max(rep.sup_residual, std::abs(r));
    }
    return rep;
}

// max |u| <= (1/2) sqrt(int |u'|^2), exact for the piecewise-linear
// interpolant whose Dirichlet energy q is.
inline bool embedding_check(const DiscreteState& state) {
    const double bound = 0.5 * std::sqrt(state.q);
    return state.sup_norm() <= bound * (1.0 + 1e-12) + 1e-15;
}

struct MultistartParams {
    std::size_t starts = 50;
    std::uint64_t seed = 1;
    double tol_grad = 1e-11;
    double eps_s = 1e-3;       // L2 separation between distinct states
    int descent_iters = 300;
    int newton_iters = 80;
    int threads = 1;
};

struct SolveStats {
    std::size_t starts = 0;
    std::size_t converged = 0;
    std::size_t nonconverged = 0;
    bool energy_monotone = true;  // along accepted descent steps
};

namespace detail {

// Thomas solve of (diag(d) + off-diagonal -c) s = rhs where the matrix is the
// symmetric tridiagonal with diagonal d_i and identical off-diagonals off_i
// (here constant); no pivoting, guarded by the caller's Levenberg shift.
inline bool thomas_solve(std::vector<double> diag, double off, std::vector<double> rhs, std::vector<double>& out) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs(diag[i - 1]) < 1e-300) return false;
        const double m = off / diag[i - 1];
        diag[i] -= m * off;
        rhs[i] -= m * rhs[i - 1];
    }
    if (std::abs(diag[n - 1]) < 1e-300) return false;
    out.assign(n, 0.0);
    out[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) out[i] = (rhs[i] - off * out[i + 1]) / diag[i];
    return true;
}

inline double sup_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double c : v) s = std::max(s, std::abs(c));
    return s;
}

// Newton step through Sherman-Morrison: H = B + c a a^T with B tridiagonal
// (omega(q)/h T - h diag(beta f'(u)) + tau I) and a_i = 2u_i - u_{i-1} - u_{i+1}.
inline bool newton_step(const DiscreteState& state, const KirchhoffProblem& prob, const Forcing& forcing,
                        const std::vector<double>& grad, double tau, std::vector<double>& step) {
    const std::size_t n = prob.n;
    const double h = prob.h();
    const double w = prob.omega_at(state.q);
    const double wp = prob.omega_prime(state.q);
    std::vector<double> a(n);
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double left = (i == 0) ? 0.0 : state.u[i - 1];
        const double right = (i + 1 == n) ? 0.0 : state.u[i + 1];
        a[i] = 2.0 * state.u[i] - left - right;
        const double fp = prob.f.derivative ? prob.f.derivative(state.u[i])
                                            : central_derivative(prob.f.f, state.u[i]);
        diag[i] = 2.0 * w / h - h * forcing.beta[i] * fp + tau;
    }
    const double off = -w / h;
    const double c = 2.0 * wp / (h * h);

    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = -grad[i];
    std::vector<double> y;
    std::vector<double> z;
    if (!thomas_solve(diag, off, rhs, y)) return false;
    if (!thomas_solve(diag, off, a, z)) return false;
    double ay = 0.0;
    double az = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ay += a[i] * y[i];
        az += a[i] * z[i];
    }
    const double denom = 1.0 + c * az;
    if (std::abs(denom) < 1e-14) return false;
    const double gamma = c * ay / denom;
    step.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        step[i] = y[i] - gamma * z[i];
        if (!std::isfinite(step[i])) return false;
    }
    return true;
}

struct SolveOutcome {
    bool converged = false;
    bool monotone = true;
    DiscreteState state;
};

inline SolveOutcome solve_from(DiscreteState state, const KirchhoffProblem& prob, const Forcing& forcing,
                               const MultistartParams& params) {
    SolveOutcome out;
    const double cap = prob.q_cap();
    const double h = prob.h();

    double e = energy(state, prob, forcing);
    std::vector<double> grad = energy_gradient(state, prob, forcing);
    const double switch_tol = 1e-2 * (1.0 + forcing.sup_norm());

    // Phase 1: Armijo gradient descent with an adaptive step; accepted steps
    // never increase the energy and never violate the q cap.
    double alpha = 0.25 * h;  // safe against the h-stiff quadratic term
    for (int it = 0; it < params.descent_iters; ++it) {
        const double gn = sup_norm(grad);
        if (gn < switch_tol) break;
        double g2 = 0.0;
        for (double gi : grad) g2 += gi * gi;
        bool accepted = false;
        for (int half = 0; half < 40; ++half) {
            std::vector<double> trial(prob.n);
            for (std::size_t i = 0; i < prob.n; ++i) trial[i] = state.u[i] - alpha * grad[i];
            const double q_trial = dirichlet_energy(trial, h);
            if (q_trial < cap) {
                DiscreteState cand;
                cand.u = std::move(trial);
                cand.q = q_trial;
                const double e_trial = energy(cand, prob, forcing);
                if (e_trial <= e - 1e-4 * alpha * g2) {
                    if (e_trial > e) out.monotone = false;
                    state = std::move(cand);
                    e = e_trial;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if (!accepted) break;
        grad = energy_gradient(state, prob, forcing);
        alpha *= 1.6;
    }

    // Phase 2: damped Newton on the gradient with a Levenberg shift; accepts
    // steps that reduce the gradient norm, so saddle points are reachable.
    double tau = 0.0;
    for (int it = 0; it < params.newton_iters; ++it) {
        const double gn = sup_norm(grad);
        if (gn < params.tol_grad) {
            out.converged = true;
            break;
        }
        std::vector<double> step;
        bool ok = newton_step(state, prob, forcing, grad, tau, step);
        double t = 1.0;
        bool accepted = false;
        for (int attempt = 0; ok && attempt < 25; ++attempt) {
            std::vector<double> trial(prob.n);
            for (std::size_t i = 0; i < prob.n; ++i) trial[i] = state.u[i] + t * step[i];
            const double q_trial = dirichlet_energy(trial, h);
            if (q_trial < cap) {
                DiscreteState cand;
                cand.u = std::move(trial);
                cand.q = q_trial;
                const std::vector<double> g_trial = energy_gradient(cand, prob, forcing);
                if (sup_norm(g_trial) < gn) {
                    state = std::move(cand);
                    grad = g_trial;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if (accepted) {
            tau = std::max(0.0, tau / 8.0);
        } else {
            tau = (tau == 0.0) ? 1e-8 * (1.0 + sup_norm(grad)) : tau * 10.0;
            if (tau > 1e12) break;
        }
    }
    if (!out.converged && sup_norm(grad) < params.tol_grad) out.converged = true;
    out.state = std::move(state);
    return out;
}

}  // namespace detail

// Deterministic multistart seeds: zero, +-c sin(k pi t) for k = 1..4 on a
// small amplitude grid, then seeded random low-mode combinations scaled to
// admissible Dirichlet energy.
inline std::vector<DiscreteState> default_starts(const KirchhoffProblem& prob, std::size_t count, std::uint64_t seed) {
    std::vector<DiscreteState> starts;
    starts.reserve(count);
    const double pi = 3.14159265358979323846;
    const auto push_nodal = [&](const std::function<double(double)>& fn) {
        if (starts.size() >= count) return;
        std::vector<double> u(prob.n);
        for (std::size_t i = 0; i < prob.n; ++i) u[i] = fn(prob.node(i));
        const double q = dirichlet_energy(u, prob.h());
        if (q >= prob.q_cap()) return;
        DiscreteState s;
        s.u = std::move(u);
        s.q = q;
        starts.push_back(std::move(s));
    };

    push_nodal([](double) { return 0.0; });
    for (int k = 1; k <= 4 && starts.size() < count; ++k) {
        for (double c : {0.05, 0.15, 0.3}) {
            for (double sgn : {1.0, -1.0}) {
                push_nodal([&](double t) { return sgn * c * std::sin(pi * k * t); });
            }
        }
    }
    Rng rng(seed);
    while (starts.size() < count) {
        std::vector<double> coeff(6);
        for (std::size_t k = 0; k < coeff.size(); ++k) {
            coeff[k] = rng.normal() / static_cast<double>((k + 1) * (k + 1));
        }
        std::vector<double> u(prob.n, 0.0);
        for (std::size_t i = 0; i < prob.n; ++i) {
            const double t = prob.node(i);
            for (std::size_t k = 0; k < coeff.size(); ++k) {
                u[i] += coeff[k] * std::sin(pi * static_cast<double>(k + 1) * t);
            }
        }
        const double q_now = dirichlet_energy(u, prob.h());
        const double q_target = rng.uniform(0.05, 0.6) * prob.q_cap();
        if (q_now > 0.0) {
            const double s = std::sqrt(q_target / q_now);
            for (double& v : u) v *= s;
        }
        DiscreteState st;
        st.q = dirichlet_energy(u, prob.h());
        st.u = std::move(u);
        if (st.q < prob.q_cap()) starts.push_back(std::move(st));
    }
    return starts;
}

// Runs the two-phase solver from every start, keeps eps_s-distinct converged
// states with gradient norm below tol_grad, sorted by energy. Non-convergent
// starts are counted, not fatal.
inline std::vector<DiscreteState> solve_multistart(const KirchhoffProblem& prob, const Forcing& forcing,
                                                   const std::vector<DiscreteState>& starts,
                                                   const MultistartParams& params, SolveStats* stats = nullptr) {
    SolveStats local;
    local.starts = starts.size();
    const std::function<detail::SolveOutcome(std::size_t)> run = [&](std::size_t i) {
        return detail::solve_from(starts[i], prob, forcing, params);
    };
    const auto outcomes = parallel_map<detail::SolveOutcome>(starts.size(), params.threads, run);

    std::vector<DiscreteState> states;
    const double h = prob.h();
    for (const auto& oc : outcomes) {
        if (!oc.monotone) local.energy_monotone = false;
        if (!oc.converged) {
            ++local.nonconverged;
            continue;
        }
        ++local.converged;
        bool fresh = true;
        for (const auto& s : states) {
            if (state_distance(s, oc.state, h) <= params.eps_s) {
                fresh = false;
                break;
            }
        }
        if (fresh) states.push_back(oc.state);
    }
    std::sort(states.begin(), states.end(), [&](const DiscreteState& a, const DiscreteState& b) {
        const double ea = energy(a, prob, forcing);
        const double eb = energy(b, prob, forcing);
        if (ea != eb) return ea < eb;
        return a.u < b.u;
    });
    if (stats) *stats = local;
    return states;
}

struct NonconstancyReport {
    bool nonconstant = false;
    double x1 = 0.0, x2 = 0.0;  // witnessing abscissae (max deviation pair)
    double f1 = 0.0, f2 = 0.0;
};

// Samples f on [-sqrt(rho)/2, sqrt(rho)/2]; true iff two samples differ by
// more than 1e-12 * scale.
inline NonconstancyReport nonconstancy_check(const ScalarFunction& f, double rho, std::size_t n_samples = 1001) {
    if (n_samples < 2) throw std::invalid_argument("nonconstancy_check: need at least two samples");
    const double half = 0.5 * std::sqrt(rho);
    NonconstancyReport rep;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    double x_lo = -half, x_hi = -half;
    double max_abs = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double x = -half + 2.0 * half * static_cast<double>(i) / static_cast<double>(n_samples - 1);
        const double v = f.f(x);
        max_abs = std::max(max_abs, std::abs(v));
        if (v < lo) {
            lo = v;
            x_lo = x;
        }
        if (v > hi) {
            hi = v;
            x_hi = x;
        }
    }
    if (hi - lo > 1e-12 * (1.0 + max_abs)) {
        rep.nonconstant = true;
        rep.x1 = x_lo;
        rep.x2 = x_hi;
        rep.f1 = lo;
        rep.f2 = hi;
    }
    return rep;
}

struct SolutionPair {
    std::vector<DiscreteState> states;  // >= 2 verified
    Forcing forcing;
    std::vector<double> residuals;
    double separation = 0.0;  // min pairwise L2 distance
};

struct ForcingFamily {
    int degree = 0;
    double lattice_step = 1.0;
    double coeff_bound = 1.0;
};

struct ForcingSearch {
    std::optional<SolutionPair> witness;
    std::size_t forcings_tried = 0;
    std::size_t best_multiplicity = 0;
    std::vector<double> best_alpha_coeff, best_beta_coeff;
    bool gated_nonconstancy = false;  // search refused: f constant on the window
    int degree_used = 0;
    bool budget_exhausted = false;
};

namespace detail {

// Integer coefficient vectors ordered by (L1 level, lex), capped by budget.
inline std::vector<std::vector<long>> level_ordered_indices(std::size_t dims, long kmax, std::size_t budget) {
    std::vector<std::vector<long>> out;
    for (long level = 0; static_cast<std::size_t>(out.size()) < budget && level <= kmax * static_cast<long>(dims);
         ++level) {
        std::vector<long> v(dims, 0);
        const std::function<void(std::size_t, long)> emit = [&](std::size_t pos, long remaining) {
            if (out.size() >= budget) return;
            if (pos + 1 == dims) {
                for (long last : {-remaining, remaining}) {
                    if (std::abs(last) <= kmax) {
                        v[pos] = last;
                        out.push_back(v);
                        if (last == 0) break;  // avoid duplicate zero
                    }
                    if (out.size() >= budget) return;
                }
                v[pos] = 0;
                return;
            }
            for (long val = -std::min<long>(kmax, remaining); val <= std::min<long>(kmax, remaining); ++val) {
                v[pos] = val;
                emit(pos + 1, remaining - std::abs(val));
                if (out.size() >= budget) return;
            }
            v[pos] = 0;
        };
        emit(0, level);
    }
    return out;
}

}  // namespace detail

// Verifies states against the problem/forcing: gradient norm, residual,
// q cap and the embedding inequality.
inline bool verify_state(const DiscreteState& s, const KirchhoffProblem& prob, const Forcing& forcing, double tol_grad,
                         double tol_res) {
    const auto grad = energy_gradient(s, prob, forcing);
    double gn = 0.0;
    for (double g : grad) gn = std::max(gn, std::abs(g));
    if (gn >= tol_grad * 10.0) return false;
    const auto res = residual_check(s, prob, forcing);
    if (res.sup_residual >= tol_res * (1.0 + forcing.sup_norm())) return false;
    if (!(s.q < prob.q_cap() + 1e-15)) return false;
    return embedding_check(s);
}

// Iterates lattice forcings of the truncated trig family in (L1 level, lex)
// order and returns the first forcing whose multistart yields >= 2 verified
// states. Requires the nonconstancy gate; exhaustion reports the best
// candidate seen.
inline ForcingSearch search_forcing_pair(const KirchhoffProblem& prob, const ForcingFamily& family, std::size_t budget,
                                         const MultistartParams& msparams, double tol_res = 1e-3) {
    ForcingSearch out;
    out.degree_used = family.degree;
    if (!nonconstancy_check(prob.f, prob.rho).nonconstant) {
        out.gated_nonconstancy = true;
        return out;
    }
    const std::size_t per_side = 2 * static_cast<std::size_t>(family.degree) + 1;
    const std::size_t dims = 2 * per_side;
    const long kmax = static_cast<long>(std::floor(family.coeff_bound / family.lattice_step + 1e-12));
    const auto indices = detail::level_ordered_indices(dims, kmax, budget);
    out.budget_exhausted = indices.size() >= budget;

    const auto starts = default_starts(prob, msparams.starts, msparams.seed);
    for (const auto& k : indices) {
        ++out.forcings_tried;
        std::vector<double> ac(per_side), bc(per_side);
        for (std::size_t i = 0; i < per_side; ++i) {
            ac[i] = static_cast<double>(k[i]) * family.lattice_step;
            bc[i] = static_cast<double>(k[per_side + i]) * family.lattice_step;
        }
        const Forcing forcing = Forcing::from_coefficients(ac, bc, prob);
        const auto states = solve_multistart(prob, forcing, starts, msparams);
        std::vector<DiscreteState> verified;
        for (const auto& s : states) {
            if (verify_state(s, prob, forcing, msparams.tol_grad, tol_res)) verified.push_back(s);
        }
        if (verified.size() > out.best_multiplicity) {
            out.best_multiplicity = verified.size();
            out.best_alpha_coeff = ac;
            out.best_beta_coeff = bc;
        }
        if (verified.size() >= 2) {
            SolutionPair pair;
            pair.states = std::move(verified);
            pair.forcing = forcing;
            double sep = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < pair.states.size(); ++i) {
                pair.residuals.push_back(residual_check(pair.states[i], prob, forcing).sup_residual);
                for (std::size_t j = i + 1; j < pair.states.size(); ++j) {
                    sep = std::min(sep, state_distance(pair.states[i], pair.states[j], prob.h()));
                }
            }
            pair.separation = sep;
            out.witness = std::move(pair);
            break;
        }
    }
    return out;
}

struct UniquenessReport {
    std::size_t forcings = 0;
    std::size_t violations = 0;       // forcings with more than one state cluster
    std::size_t max_clusters = 0;
    double max_spread = 0.0;          // largest intra-cluster L2 spread observed
    bool unique_everywhere() const { return violations == 0; }
};

// For constant f the discrete energy is strictly convex; every multistart
// must collapse to a single eps_s-cluster. A violation would falsify the
// discretization, not the statement it realizes.
inline UniquenessReport uniqueness_probe(const KirchhoffProblem& prob, const std::vector<Forcing>& forcings,
                                         const MultistartParams& msparams) {
    const double probe_lo = prob.f.f(-0.25 * std::sqrt(prob.rho));
    const double probe_hi = prob.f.f(0.25 * std::sqrt(prob.rho));
    if (std::abs(probe_hi - probe_lo) > 1e-10 * (1.0 + std::abs(probe_lo))) {
        throw std::invalid_argument("uniqueness_probe: f must be constant");
    }
    UniquenessReport rep;
    rep.forcings = forcings.size();
    const auto starts = default_starts(prob, msparams.starts, msparams.seed);
    for (const auto& forcing : forcings) {
        const std::function<detail::SolveOutcome(std::size_t)> run = [&](std::size_t i) {
            return detail::solve_from(starts[i], prob, forcing, msparams);
        };
        const auto outcomes = parallel_map<detail::SolveOutcome>(starts.size(), msparams.threads, run);
        std::vector<const DiscreteState*> converged;
        for (const auto& oc : outcomes) {
            if (oc.converged) converged.push_back(&oc.state);
        }
        if (converged.empty()) {
            ++rep.violations;
            continue;
        }
        std::vector<const DiscreteState*> reps;
        for (const auto* s : converged) {
            bool near = false;
            for (const auto* r : reps) {
                if (state_distance(*s, *r, prob.h()) <= msparams.eps_s) {
                    near = true;
                    break;
                }
            }
            if (!near) reps.push_back(s);
        }
        rep.max_clusters = std::max(rep.max_clusters, reps.size());
        if (reps.size() != 1) {
            ++rep.violations;
            continue;
        }
        double spread = 0.0;
        for (const auto* s : converged) spread = std::max(spread, state_distance(*s, *reps.front(), prob.h()));
        rep.max_spread = std::max(rep.max_spread, spread);
    }
    return rep;
}

struct ProblemValidation {
    bool omega_nonnegative = false;
    bool omega_nondecreasing = false;
    bool divergence_ok = false;  // decade-increment growth of omega_tilde toward rho
    bool coercive_ok = false;    // xi -> omega_tilde(xi^2)/2 grows toward sqrt(rho)
    double tilde_at_half = 0.0;
    double tilde_near_rho = 0.0;  // at rho(1 - 1e-8)
    bool all_ok() const { return omega_nonnegative && omega_nondecreasing && divergence_ok && coercive_ok; }
};

// Hypothesis validation: omega nonnegative and nondecreasing on a 10^4-point
// grid of [0, rho(1-1e-6)], divergence of omega_tilde as a decade-increment
// growth test at rho(1-10^-k), and coercivity of xi -> omega_tilde(xi^2)/2.
inline ProblemValidation validate_problem(const KirchhoffProblem& prob, std::size_t grid_points = 10000) {
    ProblemValidation rep;
    const double top = prob.rho * (1.0 - 1e-6);
    rep.omega_nonnegative = true;
    rep.omega_nondecreasing = true;
    double prev = prob.omega.f(0.0);
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double x = top * static_cast<double>(i) / static_cast<double>(grid_points - 1);
        const double w = prob.omega.f(x);
        if (!(w >= -1e-12)) rep.omega_nonnegative = false;
        if (w < prev - 1e-12 * (1.0 + std::abs(prev))) rep.omega_nondecreasing = false;
        prev = w;
    }

    const auto tilde = [&](double xi) { return antiderivative(prob.omega, std::min(xi, prob.omega.domain_max)); };
    rep.tilde_at_half = tilde(0.5 * prob.rho);
    rep.tilde_near_rho = tilde(prob.rho * (1.0 - 1e-8));

    // increments over the decades rho(1-10^-2) ... rho(1-10^-8): a divergent
    // antiderivative keeps them from collapsing, a bounded one cannot
    const double t2 = tilde(prob.rho * (1.0 - 1e-2));
    const double t4 = tilde(prob.rho * (1.0 - 1e-4));
    const double t6 = tilde(prob.rho * (1.0 - 1e-6));
    const double t8 = rep.tilde_near_rho;
    const double inc1 = t4 - t2;
    const double inc2 = t6 - t4;
    const double inc3 = t8 - t6;
    rep.divergence_ok = inc1 > 0.0 && inc2 >= 0.5 * inc1 && inc3 >= 0.5 * inc2;

    // gamma(xi) = omega_tilde(xi^2)/2 must keep growing toward sqrt(rho)
    const double sq = std::sqrt(prob.rho);
    double prev_gamma = -std::numeric_limits<double>::infinity();
    bool growing = true;
    for (double frac : {0.5, 0.9, 0.99, 0.999, 0.9999}) {
        const double xi = sq * frac;
        const double gamma = 0.5 * tilde(xi * xi);
        if (gamma < prev_gamma - 1e-12) growing = false;
        prev_gamma = gamma;
    }
    rep.coercive_ok = growing && rep.divergence_ok;
    return rep;
}

}  // namespace multimin::kirchhoff
