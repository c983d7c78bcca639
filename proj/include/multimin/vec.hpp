#pragma once

// Small dense-vector helpers for points of the ambient inner-product space.
// Points are plain std::vector<double>; all operations are value-semantic.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace multimin {

using Point = std::vector<double>;

inline void check_same_dim(const Point& a, const Point& b, const char* where) {
    if (a.size() != b.size()) {
        throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                    std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
    }
}

inline void check_finite(const Point& a, const char* where) {
    for (double c : a) {
        if (!std::isfinite(c)) throw std::invalid_argument(std::string(where) + ": non-finite coordinate");
    }
}

inline double dot(const Point& a, const Point& b) {
    check_same_dim(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm_sq(const Point& a) {
    double s = 0.0;
    for (double c : a) s += c * c;
    return s;
}

inline double norm(const Point& a) { return std::sqrt(norm_sq(a)); }

inline double dist_sq(const Point& a, const Point& b) {
    check_same_dim(a, b, "dist_sq");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline double dist(const Point& a, const Point& b) { return std::sqrt(dist_sq(a, b)); }

inline Point add(Point a, const Point& b) {
    check_same_dim(a, b, "add");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

inline Point sub(Point a, const Point& b) {
    check_same_dim(a, b, "sub");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

inline Point scale(Point a, double c) {
    for (double& x : a) x *= c;
    return a;
}

// a + t*(b - a)
inline Point lerp(const Point& a, const Point& b, double t) {
    check_same_dim(a, b, "lerp");
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + t * (b[i] - a[i]);
    return r;
}

inline Point zeros(std::size_t n) { return Point(n, 0.0); }

// Lexicographic comparison, used for deterministic orderings.
inline bool lex_less(const Point& a, const Point& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return a.size() < b.size();
}

}  // namespace multimin
