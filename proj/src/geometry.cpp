#include "lab/geometry.hpp"

#include <algorithm>
#include <limits>

namespace lab {

bool point_finite(const Point& p) {
    return std::isfinite(p.x1) && std::isfinite(p.x2);
}

double signed_area(const std::vector<Point>& poly) {
    const size_t n = poly.size();
    double a = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const Point& p = poly[i];
        const Point& q = poly[(i + 1) % n];
        a += cross(p, q);
    }
    return 0.5 * a;
}

bool point_in_polygon(const std::vector<Point>& poly, const Point& p) {
    const size_t n = poly.size();
    bool inside = false;
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point& a = poly[i];
        const Point& b = poly[j];
        const bool straddles = (a.x2 > p.x2) != (b.x2 > p.x2);
        if (straddles) {
            const double xint = a.x1 + (p.x2 - a.x2) / (b.x2 - a.x2) * (b.x1 - a.x1);
            if (p.x1 < xint) inside = !inside;
        }
    }
    return inside;
}

static double dist_point_segment(const Point& p, const Point& a, const Point& b) {
    const Point e = b - a;
    const double l2 = e.norm2();
    if (l2 == 0.0) return (p - a).norm();
    double t = dot(p - a, e) / l2;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + e * t)).norm();
}

double distance_to_boundary(const std::vector<Point>& poly, const Point& p) {
    const size_t n = poly.size();
    double d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i)
        d = std::min(d, dist_point_segment(p, poly[i], poly[(i + 1) % n]));
    return d;
}

static int orient(const Point& a, const Point& b, const Point& c) {
    const double v = cross(b - a, c - a);
    // scale-aware zero test
    const double scale = std::abs(b.x1 - a.x1) + std::abs(b.x2 - a.x2) +
                         std::abs(c.x1 - a.x1) + std::abs(c.x2 - a.x2);
    if (std::abs(v) <= 1e-16 * scale * scale) return 0;
    return v > 0 ? 1 : -1;
}

static bool on_segment(const Point& a, const Point& b, const Point& p) {
    return std::min(a.x1, b.x1) - 1e-300 <= p.x1 && p.x1 <= std::max(a.x1, b.x1) + 1e-300 &&
           std::min(a.x2, b.x2) - 1e-300 <= p.x2 && p.x2 <= std::max(a.x2, b.x2) + 1e-300;
}

bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d) {
    const int o1 = orient(a, b, c);
    const int o2 = orient(a, b, d);
    const int o3 = orient(c, d, a);
    const int o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

bool polygon_is_simple(const std::vector<Point>& poly) {
    const size_t n = poly.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % n];
        if (a == b) return false;
        for (size_t j = i + 1; j < n; ++j) {
            // skip adjacent edges (they share an endpoint)
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            const Point& c = poly[j];
            const Point& d = poly[(j + 1) % n];
            if (segments_intersect(a, b, c, d)) return false;
        }
    }
    return true;
}

std::vector<std::pair<double, double>> radial_sections(const std::vector<Point>& poly,
                                                       double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    const size_t n = poly.size();
    std::vector<double> hits;
    for (size_t i = 0; i < n; ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % n];
        // solve rho*(c,s) = a + t*(b-a)
        const Point e = b - a;
        const double det = c * (-e.x2) - s * (-e.x1);  // |(c,s) ; -(e)|
        if (det == 0.0) continue;                      // ray parallel to edge
        const double rho = (a.x1 * (-e.x2) - a.x2 * (-e.x1)) / det;
        const double t = (c * a.x2 - s * a.x1) / det;
        if (rho > 0.0 && t >= 0.0 && t < 1.0) hits.push_back(rho);
    }
    std::sort(hits.begin(), hits.end());
    std::vector<std::pair<double, double>> sections;
    if (hits.empty()) return sections;
    // parity can be upset by vertex grazing; classify each gap by its midpoint
    double prev = 0.0;
    bool prev_inside = false;  // rho -> 0: origin assumed outside patches (open quadrant)
    for (size_t k = 0; k <= hits.size(); ++k) {
        const double cur = (k < hits.size()) ? hits[k] : hits.back() * 2.0 + 1.0;
        const double mid = 0.5 * (prev + cur);
        const bool inside = point_in_polygon(poly, {mid * c, mid * s});
        if (inside && !prev_inside) sections.emplace_back(prev, cur);
        else if (inside && prev_inside && !sections.empty()) sections.back().second = cur;
        prev_inside = inside;
        prev = cur;
    }
    return sections;
}

BBox bounding_box(const std::vector<Point>& poly) {
    BBox b{poly[0].x1, poly[0].x2, poly[0].x1, poly[0].x2};
    for (const Point& p : poly) {
        b.lo1 = std::min(b.lo1, p.x1);
        b.lo2 = std::min(b.lo2, p.x2);
        b.hi1 = std::max(b.hi1, p.x1);
        b.hi2 = std::max(b.hi2, p.x2);
    }
    return b;
}

}  // namespace lab
