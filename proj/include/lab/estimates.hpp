#pragma once

#include <vector>

#include "lab/geometry.hpp"
#include "lab/quadrature.hpp"

namespace lab {

/// Two-point approach kernel |y1 y2| / (|y - (eps,0)|^2 |y + (eps,0)|^2).
double approach_kernel(double eps, const Point& y);

struct ExtremalResult {
    double eps = 0.0;
    double I = 1.0;
    double a_threshold = 0.0;    // level with |L_eps(a)| = I
    double area = 0.0;           // achieved measure (all four quadrants)
    double area_error = 0.0;     // measure uncertainty from undecided cells
    double approach_velocity = 0.0;
    double velocity_error = 0.0;
};

/// Bisection on the level a until the super-level set has measure I within
/// tol*I. The set must stay inside B_{10 sqrt(I)}(0); if the analytic ring
/// test fails the operation throws ("containment ball exceeded").
ExtremalResult superlevel_threshold(double eps, double I, double tol);

/// Adds the approach velocity: (8 eps / pi) * integral of the kernel over
/// the first-quadrant part of the super-level set.
ExtremalResult approach_velocity_extremal(double eps, double I, const QuadratureSpec& quad);

/// The section-2 display chain: upper bound for the extremal approach
/// velocity, -4 eps ln(eps)/pi + (4 ln(10 sqrt I) + 2 C pi)/pi * eps.
double approach_chain_bound(double eps, double I, double C);

/// (2 min{-ln delta, -ln m} + CI) / pi * delta.
double rate_bound(double delta, double m, double CI);

struct GrowthBoundParams {
    double CI = 0.0;
    double grad0 = 0.0;  // initial gradient sup norm, != 1
};

/// Closed-form double-exponential upper bound for the gradient sup norm.
/// Overflows to +inf for large t; use gradient_upper_bound_lnln instead.
double gradient_upper_bound(double t, const GrowthBoundParams& params);

/// ln ln of the same bound, safe for all t.
double gradient_upper_bound_lnln(double t, const GrowthBoundParams& params);

struct GrowthCheckReport {
    bool pass = true;
    double worst_margin = 0.0;   // min over intervals of ln(allowed) - ln(observed)
    long first_violation = -1;   // sample index, -1 if none
    long checked = 0;
};

/// For each consecutive pair of history samples, integrates the growth
/// differential inequality exactly and verifies the observed factor stays
/// below it with the given slack (default 10%).
GrowthCheckReport check_growth_inequality(const std::vector<std::pair<double, double>>& history,
                                          double CI, double slack = 0.10);

}  // namespace lab
