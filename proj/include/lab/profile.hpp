#pragma once

#include <string>
#include <vector>

#include "lab/geometry.hpp"
#include "lab/quadrature.hpp"

namespace lab {

/// Profile functions g, g', f, the regions Omega_eps / Q(r) / D_s built from
/// them, and the derived constants. Everything here is a pure function.

inline constexpr double kEinv = 0.36787944117144233;        // e^-1
inline constexpr double kEm4 = 0.018315638888734179;        // e^-4

/// g(s) = s * exp(|ln s|^(1/2)) on (0, e^-1].
double eval_g(double s);

/// g'(s) = exp(|ln s|^(1/2)) * (1 - 1/(2 |ln s|^(1/2))) on (0, e^-1].
double eval_g_prime(double s);

/// f(s) = 2 + |ln s|^(1/2) on (0, 1).
double eval_f(double s);

/// Omega_eps = { x in (0,inf)^2 : eps < x1 < e^-1, x2 < g(x1) }, open.
bool omega_region_contains(double eps, const Point& p);

/// Q(r) = (0,inf)^2 minus the closed ball of radius r.
bool q_region_contains(double r, const Point& p);

/// D_s = Omega_0 ∩ Q(sqrt(s^2+g(s)^2)) ∩ B_{e^-1}(0), for s in (0, e^-4].
bool d_region_contains(double s, const Point& p);

/// Radius at which the ray at angle theta crosses the graph x2 = g(x1),
/// on the branch with x1 < 1. +inf when the ray stays under the graph
/// (theta <= pi/4) or the crossing lies beyond x1 = 1.
double graph_crossing_radius(double theta);

struct HResult {
    double h = 0.0;        // the normalized value: (4/pi) integral / |ln s|
    double error = 0.0;    // error estimate on h
    bool converged = true;
    long evals = 0;
};

/// h(s) |ln s| = (4/pi) * integral over D_s of y1 y2 / |y|^4 dy.
/// Radial direction integrated analytically (the integrand is
/// cos(t) sin(t) / rho in polar coordinates), angle adaptively.
HResult compute_h(double s, const QuadratureSpec& quad);

/// The paper's constants in one validated record.
struct ProfileConstants {
    double C = 1.0;        // Lemma-type velocity decomposition constant, >= 1
    double s0 = kEm4;      // threshold scale, in (0, e^-4]
    double rho0 = 0.0;     // s0 / (2 |ln s0|^(1/2))
    double Cprime = 0.0;   // C * (g(s0)/s0) * (1 + ln((s0+g(s0))/s0))
    double I = 1.0;        // L1 mass bound, >= 1
    double CI = 0.0;       // (1/4)(4 ln 2 + 4 ln(10 sqrt I) + (2C+16) pi)
    double fitted_C_raw = 0.0;  // provenance: empirical fit before safety factor

    /// Checks the arithmetic identities and, on a sampled grid below s0,
    /// the defining inequality h(s)|ln s| >= C f(s).
    void validate(const QuadratureSpec& quad) const;
};

/// Largest grid value s0 such that h(s)|ln s| >= C f(s) holds at every grid
/// point <= s0. The grid must be decreasing, inside (0, e^-4].
/// Throws std::runtime_error("no admissible s0 on grid") when none qualifies.
double find_s0(double C, const QuadratureSpec& quad, const std::vector<double>& grid);

/// Log-spaced decreasing grid with the given points per decade.
std::vector<double> s0_search_grid(double s_min, int per_decade = 32);

/// Fills rho0, Cprime, CI from their defining formulas.
ProfileConstants derive_constants(double C, double I, double s0);

/// Closed counterclockwise polyline tracing the boundary of Omega_eps with
/// exactly n vertices, spacing graded geometrically toward the inner corner
/// (eps, g(eps)).
std::vector<Point> sample_omega_boundary(double eps, int n);

/// |Omega_eps| by 1D quadrature of g over (eps, e^-1).
QuadResult omega_region_area(double eps, const QuadratureSpec& quad);

}  // namespace lab
