#pragma once

// Adaptive Simpson quadrature (for the antiderivative operation and oracle
// cross-checks) and a fixed-panel Gauss-Legendre rule whose value is smooth
// in the endpoint (used where antiderivatives feed finite differences).

#include <cmath>
#include <functional>
#include <stdexcept>

namespace multimin {

namespace detail {

inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                                   double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Integral of f over [a, b] to relative tolerance rel_tol (absolute floor
// abs_floor protects near-zero integrals).
inline double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-10,
                                 double abs_floor = 1e-14, int max_depth = 48) {
    if (a == b) return 0.0;
    const double sign = (b >= a) ? 1.0 : -1.0;
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    const double fa = f(lo);
    const double fb = f(hi);
    const double fm = f(0.5 * (lo + hi));
    if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm)) {
        throw std::invalid_argument("integrate_adaptive: non-finite integrand");
    }
    const double whole = detail::simpson(lo, hi, fa, fm, fb);
    const double tol = std::max(abs_floor, rel_tol * std::abs(whole));
    const double value = detail::adaptive_simpson_rec(f, lo, hi, fa, fm, fb, whole, tol, max_depth);
    return sign * value;
}

// Composite 7-point Gauss-Legendre with a fixed panel count. Unlike the
// adaptive rule, the result depends smoothly on the endpoint, so central
// differences through it are well behaved.
inline double integrate_fixed(const std::function<double(double)>& f, double a, double b, int panels = 16) {
    static const double nodes[7] = {-0.9491079123427585, -0.7415311855993945, -0.4058451513773972, 0.0,
                                    0.4058451513773972,  0.7415311855993945,  0.9491079123427585};
    static const double weights[7] = {0.1294849661688697, 0.2797053914892766, 0.3818300505051189, 0.4179591836734694,
                                      0.3818300505051189, 0.2797053914892766, 0.1294849661688697};
    if (a == b) return 0.0;
    const double hpanel = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * hpanel;
        const double mid = lo + 0.5 * hpanel;
        const double half = 0.5 * hpanel;
        double acc = 0.0;
        for (int k = 0; k < 7; ++k) acc += weights[k] * f(mid + half * nodes[k]);
        total += acc * half;
    }
    return total;
}

}  // namespace multimin
