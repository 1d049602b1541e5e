#include "lab/quadrature.hpp"

#include <algorithm>

namespace lab {

using detail::kGl3w;
using detail::kGl3x;
using detail::kGlw;
using detail::kGlx;

namespace {

double gl7(const std::function<double(double)>& f, double a, double b, long& evals) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 7; ++i) s += kGlw[i] * f(c + h * kGlx[i]);
    evals += 7;
    return s * h;
}

void adapt_1d(const std::function<double(double)>& f, double a, double b, double q_whole,
              double tol, int depth, const QuadratureSpec& spec, QuadResult& out) {
    const double m = 0.5 * (a + b);
    const double q_lo = gl7(f, a, m, out.evals);
    const double q_hi = gl7(f, m, b, out.evals);
    const double q2 = q_lo + q_hi;
    const double err = std::abs(q2 - q_whole);
    if (err <= tol || depth >= spec.max_depth) {
        out.value += q2;
        out.error += err / 63.0;  // two-level Richardson estimate for GL7
        if (err > tol) out.converged = false;
        return;
    }
    adapt_1d(f, a, m, q_lo, 0.5 * tol, depth + 1, spec, out);
    adapt_1d(f, m, b, q_hi, 0.5 * tol, depth + 1, spec, out);
}

}  // namespace

QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        const QuadratureSpec& spec) {
    return integrate_1d(f, std::vector<double>{a, b}, spec);
}

QuadResult integrate_1d(const std::function<double(double)>& f, std::vector<double> points,
                        const QuadratureSpec& spec) {
    spec.validate();
    if (points.size() < 2) throw std::invalid_argument("integrate_1d: need at least [a,b]");
    std::sort(points.begin(), points.end());
    QuadResult out;
    // first pass for a magnitude estimate used by the relative tolerance
    double rough = 0.0;
    std::vector<double> panel(points.size() - 1);
    for (size_t i = 0; i + 1 < points.size(); ++i) {
        panel[i] = gl7(f, points[i], points[i + 1], out.evals);
        rough += std::abs(panel[i]);
    }
    const double tol_total = std::max(spec.abs_tol, spec.rel_tol * rough);
    for (size_t i = 0; i + 1 < points.size(); ++i) {
        const double share = rough > 0.0 ? std::abs(panel[i]) / rough : 1.0 / panel.size();
        adapt_1d(f, points[i], points[i + 1], panel[i],
                 std::max(tol_total * std::max(share, 0.05), 0.02 * spec.abs_tol), 0, spec, out);
    }
    return out;
}

namespace {

double gl3x3(const std::function<double(double, double)>& f, double a1, double b1, double a2,
             double b2, long& evals) {
    const double c1 = 0.5 * (a1 + b1), h1 = 0.5 * (b1 - a1);
    const double c2 = 0.5 * (a2 + b2), h2 = 0.5 * (b2 - a2);
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            s += kGl3w[i] * kGl3w[j] * f(c1 + h1 * kGl3x[i], c2 + h2 * kGl3x[j]);
    evals += 9;
    return s * h1 * h2;
}

void adapt_rect(const std::function<double(double, double)>& f, double a1, double b1, double a2,
                double b2, double q_whole, double tol, int depth, const QuadratureSpec& spec,
                QuadResult& out) {
    const double m1 = 0.5 * (a1 + b1), m2 = 0.5 * (a2 + b2);
    double q[4];
    q[0] = gl3x3(f, a1, m1, a2, m2, out.evals);
    q[1] = gl3x3(f, m1, b1, a2, m2, out.evals);
    q[2] = gl3x3(f, a1, m1, m2, b2, out.evals);
    q[3] = gl3x3(f, m1, b1, m2, b2, out.evals);
    const double q2 = q[0] + q[1] + q[2] + q[3];
    const double err = std::abs(q2 - q_whole);
    if (err <= tol || depth >= spec.max_depth) {
        out.value += q2;
        out.error += err / 15.0;
        if (err > tol) out.converged = false;
        return;
    }
    const double ct = 0.25 * tol;
    adapt_rect(f, a1, m1, a2, m2, q[0], ct, depth + 1, spec, out);
    adapt_rect(f, m1, b1, a2, m2, q[1], ct, depth + 1, spec, out);
    adapt_rect(f, a1, m1, m2, b2, q[2], ct, depth + 1, spec, out);
    adapt_rect(f, m1, b1, m2, b2, q[3], ct, depth + 1, spec, out);
}

}  // namespace

QuadResult integrate_rect(const std::function<double(double, double)>& f, double a1, double b1,
                          double a2, double b2, const QuadratureSpec& spec) {
    spec.validate();
    QuadResult out;
    const double rough = gl3x3(f, a1, b1, a2, b2, out.evals);
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(rough));
    adapt_rect(f, a1, b1, a2, b2, rough, tol, 0, spec, out);
    return out;
}

namespace {

struct Accum2 {
    Point value;
    double error = 0.0;
    long evals = 0;
    bool converged = true;
};

// One trapezoid between the segment (a -> b) and the line x2 = ref,
// mapped onto the unit square: y1 = a.x1 + u*(b.x1-a.x1),
// y2 = ref + v*(height(y1) - ref-part). Signed by the x1 direction.
struct Trapezoid {
    Point a, b;
    double ref;

    Point map(double u, double v, double& jac) const {
        const double y1 = a.x1 + u * (b.x1 - a.x1);
        const double top = a.x2 + u * (b.x2 - a.x2);
        const double y2 = ref + v * (top - ref);
        jac = (b.x1 - a.x1) * (top - ref);
        return {y1, y2};
    }
};

Point gl3x3_trap(const Trapezoid& t, const std::function<Point(const Point&)>& f, double u0,
                 double u1, double v0, double v1, long& evals) {
    const double cu = 0.5 * (u0 + u1), hu = 0.5 * (u1 - u0);
    const double cv = 0.5 * (v0 + v1), hv = 0.5 * (v1 - v0);
    Point s;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double jac;
            const Point y = t.map(cu + hu * kGl3x[i], cv + hv * kGl3x[j], jac);
            s = s + f(y) * (kGl3w[i] * kGl3w[j] * jac);
        }
    evals += 9;
    return s * (hu * hv);
}

void adapt_trap(const Trapezoid& t, const std::function<Point(const Point&)>& f, double u0,
                double u1, double v0, double v1, const Point& q_whole, double tol, int depth,
                const QuadratureSpec& spec, Accum2& out) {
    const double mu = 0.5 * (u0 + u1), mv = 0.5 * (v0 + v1);
    Point q[4];
    q[0] = gl3x3_trap(t, f, u0, mu, v0, mv, out.evals);
    q[1] = gl3x3_trap(t, f, mu, u1, v0, mv, out.evals);
    q[2] = gl3x3_trap(t, f, u0, mu, mv, v1, out.evals);
    q[3] = gl3x3_trap(t, f, mu, u1, mv, v1, out.evals);
    const Point q2 = q[0] + q[1] + q[2] + q[3];
    const double err =
        std::max(std::abs(q2.x1 - q_whole.x1), std::abs(q2.x2 - q_whole.x2));
    if (err <= tol || depth >= spec.max_depth) {
        out.value = out.value + q2;
        out.error += err / 15.0;
        if (err > tol) out.converged = false;
        return;
    }
    const double ct = 0.25 * tol;
    adapt_trap(t, f, u0, mu, v0, mv, q[0], ct, depth + 1, spec, out);
    adapt_trap(t, f, mu, u1, v0, mv, q[1], ct, depth + 1, spec, out);
    adapt_trap(t, f, u0, mu, mv, v1, q[2], ct, depth + 1, spec, out);
    adapt_trap(t, f, mu, u1, mv, v1, q[3], ct, depth + 1, spec, out);
}

}  // namespace

QuadResult2 integrate_polygon(const std::vector<Point>& poly,
                              const std::function<Point(const Point&)>& f, double ref_line,
                              const QuadratureSpec& spec) {
    spec.validate();
    const size_t n = poly.size();
    Accum2 acc;
    std::vector<Trapezoid> traps;
    std::vector<Point> rough(n);
    double mag = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % n];
        if (a.x1 == b.x1) continue;  // vertical edge spans no trapezoid
        Trapezoid t{a, b, ref_line};
        rough[traps.size()] = gl3x3_trap(t, f, 0, 1, 0, 1, acc.evals);
        mag += std::max(std::abs(rough[traps.size()].x1), std::abs(rough[traps.size()].x2));
        traps.push_back(t);
    }
    const double tol_total = std::max(spec.abs_tol, spec.rel_tol * mag);
    for (size_t k = 0; k < traps.size(); ++k) {
        const double m = std::max(std::abs(rough[k].x1), std::abs(rough[k].x2));
        const double share = mag > 0.0 ? m / mag : 1.0 / traps.size();
        adapt_trap(traps[k], f, 0, 1, 0, 1, rough[k],
                   std::max(tol_total * std::max(share, 0.02), 0.02 * spec.abs_tol), 0, spec, acc);
    }
    QuadResult2 out;
    // Green's theorem: the signed trapezoid sum equals minus the area integral
    // for a counterclockwise contour.
    out.value = acc.value * -1.0;
    out.error = acc.error;
    out.evals = acc.evals;
    out.converged = acc.converged;
    return out;
}

}  // namespace lab
