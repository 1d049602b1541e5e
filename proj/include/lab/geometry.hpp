#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace lab {

/// A position in the plane. Most of the lab lives in the closed first
/// quadrant; reflected copies across the axes are derived on demand.
struct Point {
    double x1 = 0.0;
    double x2 = 0.0;

    Point() = default;
    Point(double a, double b) : x1(a), x2(b) {}

    Point reflect_x1() const { return {-x1, x2}; }   // x tilde
    Point reflect_x2() const { return {x1, -x2}; }   // x bar
    Point negate() const { return {-x1, -x2}; }

    double norm2() const { return x1 * x1 + x2 * x2; }
    double norm() const { return std::hypot(x1, x2); }

    Point operator+(const Point& o) const { return {x1 + o.x1, x2 + o.x2}; }
    Point operator-(const Point& o) const { return {x1 - o.x1, x2 - o.x2}; }
    Point operator*(double c) const { return {c * x1, c * x2}; }
    bool operator==(const Point& o) const { return x1 == o.x1 && x2 == o.x2; }
};

inline Point operator*(double c, const Point& p) { return p * c; }
inline double dot(const Point& a, const Point& b) { return a.x1 * b.x1 + a.x2 * b.x2; }
inline double cross(const Point& a, const Point& b) { return a.x1 * b.x2 - a.x2 * b.x1; }

bool point_finite(const Point& p);

/// Shoelace area, positive for counterclockwise orientation.
double signed_area(const std::vector<Point>& poly);

/// Strict interior test (boundary points count as outside), crossing rule.
bool point_in_polygon(const std::vector<Point>& poly, const Point& p);

/// Distance from p to the polygon boundary.
double distance_to_boundary(const std::vector<Point>& poly, const Point& p);

/// Proper or improper intersection of closed segments [a,b] and [c,d],
/// excluding shared endpoints.
bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d);

/// No two non-adjacent edges intersect and no edge has zero length.
bool polygon_is_simple(const std::vector<Point>& poly);

/// Radial cross-sections: intervals of rho where the ray
/// {rho*(cos theta, sin theta) : rho > 0} lies inside the polygon.
/// Intervals are returned sorted, as (rho_in, rho_out) pairs.
std::vector<std::pair<double, double>> radial_sections(const std::vector<Point>& poly,
                                                       double theta);

struct BBox {
    double lo1, lo2, hi1, hi2;
};
BBox bounding_box(const std::vector<Point>& poly);

}  // namespace lab
