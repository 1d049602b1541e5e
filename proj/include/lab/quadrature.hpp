#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "lab/geometry.hpp"

namespace lab {

/// Tolerances and controls for the adaptive integrators.
struct QuadratureSpec {
    double rel_tol = 1e-6;
    double abs_tol = 1e-10;
    int max_depth = 28;
    /// Radius of the polar-subtraction disc around a singular evaluation
    /// point; 0 lets the integrator pick one from the local clearance.
    double singularity_radius = 0.0;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw std::domain_error("QuadratureSpec: tolerances must be positive");
        if (max_depth < 1) throw std::domain_error("QuadratureSpec: max_depth >= 1");
        if (singularity_radius < 0.0)
            throw std::domain_error("QuadratureSpec: singularity_radius >= 0");
    }

    QuadratureSpec tightened(double factor) const {
        QuadratureSpec q = *this;
        q.rel_tol /= factor;
        q.abs_tol /= factor;
        q.max_depth += 6;
        return q;
    }
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // accumulated local error estimate
    long evals = 0;
    bool converged = true;
};

struct QuadResult2 {
    Point value;
    double error = 0.0;
    long evals = 0;
    bool converged = true;
};

namespace detail {
// 7-point Gauss-Legendre on [-1,1]
inline constexpr std::array<double, 7> kGlx = {
    -0.9491079123427585, -0.7415311855993945, -0.4058451513773972, 0.0,
    0.4058451513773972,  0.7415311855993945,  0.9491079123427585};
inline constexpr std::array<double, 7> kGlw = {
    0.1294849661688697, 0.2797053914892766, 0.3818300505051189, 0.4179591836734694,
    0.3818300505051189, 0.2797053914892766, 0.1294849661688697};

// 3-point Gauss-Legendre on [-1,1], tensorized for cells
inline constexpr std::array<double, 3> kGl3x = {-0.7745966692414834, 0.0, 0.7745966692414834};
inline constexpr std::array<double, 3> kGl3w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
}  // namespace detail

/// Adaptive 1D integration of f over [a, b].
QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        const QuadratureSpec& spec);

/// Adaptive 1D integration with interior breakpoints (panels split there first).
QuadResult integrate_1d(const std::function<double(double)>& f, std::vector<double> points,
                        const QuadratureSpec& spec);

/// Adaptive 2D integration of f over the rectangle [a1,b1] x [a2,b2].
QuadResult integrate_rect(const std::function<double(double, double)>& f, double a1, double b1,
                          double a2, double b2, const QuadratureSpec& spec);

/// Adaptive 2D integration of a vector integrand over a simple polygon,
/// decomposed into signed trapezoids against the line x2 = ref_line.
/// A singular point of the integrand may sit on that line; Gauss nodes
/// never land on cell boundaries so it is not sampled.
QuadResult2 integrate_polygon(const std::vector<Point>& poly,
                              const std::function<Point(const Point&)>& f, double ref_line,
                              const QuadratureSpec& spec);

}  // namespace lab
