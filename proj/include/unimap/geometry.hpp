#pragma once

#include <algorithm>
#include <cmath>

namespace unimap {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point operator+(Point p, Point q) { return {p.x + q.x, p.y + q.y}; }
    friend constexpr Point operator-(Point p, Point q) { return {p.x - q.x, p.y - q.y}; }
    friend constexpr Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
    friend constexpr bool operator==(Point, Point) = default;
};

inline double norm_inf(Point p) { return std::max(std::abs(p.x), std::abs(p.y)); }
inline double norm2(Point p) { return std::hypot(p.x, p.y); }

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double t) const { return lo <= t && t <= hi; }
};

/// Closed axis-aligned rectangle [x_lo, x_hi] x [y_lo, y_hi].
struct Rect {
    double x_lo = 0.0;
    double x_hi = 0.0;
    double y_lo = 0.0;
    double y_hi = 0.0;

    static Rect square(double lo, double hi) { return {lo, hi, lo, hi}; }

    bool has_interior() const { return x_lo < x_hi && y_lo < y_hi; }
    bool contains(Point p) const {
        return x_lo <= p.x && p.x <= x_hi && y_lo <= p.y && p.y <= y_hi;
    }
    Interval x_range() const { return {x_lo, x_hi}; }
    Interval y_range() const { return {y_lo, y_hi}; }
};

/// Point (i, j) of an n x n grid spanning the rectangle, endpoints included.
inline Point grid_point(const Rect& r, int n, int i, int j) {
    auto lerp = [n](double lo, double hi, int k) {
        return n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * k / (n - 1);
    };
    return {lerp(r.x_lo, r.x_hi, i), lerp(r.y_lo, r.y_hi, j)};
}

}  // namespace unimap
