#include "lab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lab {

double approach_kernel(double eps, const Point& y) {
    const double dm = (y.x1 - eps) * (y.x1 - eps) + y.x2 * y.x2;
    const double dp = (y.x1 + eps) * (y.x1 + eps) + y.x2 * y.x2;
    return std::abs(y.x1 * y.x2) / (dm * dp);
}

namespace {

struct Cell {
    double l1, l2, u1, u2;
    double area() const { return (u1 - l1) * (u2 - l2); }
};

// min/max of |y - (px,0)|^2 over the cell (first quadrant cells)
double cell_dist2_min(const Cell& c, double px) {
    const double d1 = px < c.l1 ? c.l1 - px : (px > c.u1 ? px - c.u1 : 0.0);
    const double d2 = 0.0 < c.l2 ? c.l2 : 0.0;
    return d1 * d1 + d2 * d2;
}
double cell_dist2_max(const Cell& c, double px) {
    const double d1 = std::max(std::abs(c.l1 - px), std::abs(c.u1 - px));
    const double d2 = std::max(std::abs(c.l2), std::abs(c.u2));
    return d1 * d1 + d2 * d2;
}

double kernel_upper(const Cell& c, double eps) {
    const double dm = cell_dist2_min(c, eps), dp = cell_dist2_min(c, -eps);
    if (dm == 0.0 || dp == 0.0) return std::numeric_limits<double>::infinity();
    return (c.u1 * c.u2) / (dm * dp);
}
double kernel_lower(const Cell& c, double eps) {
    const double dm = cell_dist2_max(c, eps), dp = cell_dist2_max(c, -eps);
    return (c.l1 * c.l2) / (dm * dp);
}

// first-quadrant measure of {K >= a} inside [0,R]^2
struct AreaAccum {
    double inside = 0.0;
    double undecided = 0.0;
};

void measure_cells(const Cell& c, double eps, double a, int depth, double area_floor,
                   AreaAccum& acc) {
    if (kernel_lower(c, eps) >= a) {
        acc.inside += c.area();
        return;
    }
    if (kernel_upper(c, eps) < a) return;
    if (depth <= 0 || c.area() < area_floor) {
        acc.undecided += c.area();
        return;
    }
    const double m1 = 0.5 * (c.l1 + c.u1), m2 = 0.5 * (c.l2 + c.u2);
    measure_cells({c.l1, c.l2, m1, m2}, eps, a, depth - 1, area_floor, acc);
    measure_cells({m1, c.l2, c.u1, m2}, eps, a, depth - 1, area_floor, acc);
    measure_cells({c.l1, m2, m1, c.u2}, eps, a, depth - 1, area_floor, acc);
    measure_cells({m1, m2, c.u1, c.u2}, eps, a, depth - 1, area_floor, acc);
}

AreaAccum superlevel_area_fq(double eps, double I, double a, double abs_tol) {
    const double R = 10.0 * std::sqrt(I);
    AreaAccum acc;
    // resolve until the undecided rim is below the tolerance; the rim is a
    // 1D curve so the floor scales with tolerance squared-ish; depth capped
    const double floor = std::max(1e-30, abs_tol * abs_tol / (R * R) * 0.01);
    measure_cells({0.0, 0.0, R, R}, eps, a, 48, floor, acc);
    return acc;
}

}  // namespace

ExtremalResult superlevel_threshold(double eps, double I, double tol) {
    if (!(eps > 0.0) || !(I >= 1.0) || !(tol > 0.0))
        throw std::domain_error("superlevel_threshold: eps > 0, I >= 1, tol > 0 required");
    const double R = 10.0 * std::sqrt(I);

    ExtremalResult res;
    res.eps = eps;
    res.I = I;

    const double abs_tol = 0.25 * tol * I;
    auto area_at = [&](double a) {
        const AreaAccum acc = superlevel_area_fq(eps, I, a, abs_tol);
        res.area_error = 4.0 * 0.5 * acc.undecided;
        return 4.0 * (acc.inside + 0.5 * acc.undecided);
    };

    // containment ring test: sup of K on |y| = R (and beyond) must be < a;
    // on and outside the ring K <= (rho^2/2) / (rho - eps)^4 decreasing in rho
    auto ring_ok = [&](double a) { return (R * R / 2.0) / std::pow(R - eps, 4) < a; };

    double a_lo = 1.0, a_hi = 1.0;
    double area_lo = area_at(a_lo);
    int guard = 0;
    while (area_lo <= I) {  // bracket low end adjusts automatically
        a_lo /= 16.0;
        area_lo = area_at(a_lo);
        if (++guard > 60) throw std::runtime_error("superlevel_threshold: bracket failure");
    }
    double area_hi = area_at(a_hi);
    guard = 0;
    while (area_hi > I) {
        a_hi *= 16.0;
        area_hi = area_at(a_hi);
        if (++guard > 60) throw std::runtime_error("superlevel_threshold: bracket failure");
    }

    double prev_area = -1.0;
    (void)prev_area;
    for (int it = 0; it < 200; ++it) {
        const double a_mid = std::sqrt(a_lo * a_hi);
        const double area_mid = area_at(a_mid);
        // bisection validity: measure is nonincreasing in the level
        if (!(area_mid <= area_lo + res.area_error + abs_tol) ||
            !(area_mid >= area_hi - res.area_error - abs_tol))
            throw std::runtime_error("superlevel_threshold: non-monotone area");
        if (std::abs(area_mid - I) <= tol * I) {
            res.a_threshold = a_mid;
            res.area = area_mid;
            if (!ring_ok(a_mid))
                throw std::runtime_error(
                    "superlevel_threshold: containment ball exceeded (eps too large)");
            return res;
        }
        if (area_mid > I) {
            a_lo = a_mid;
            area_lo = area_mid;
        } else {
            a_hi = a_mid;
            area_hi = area_mid;
        }
    }
    throw std::runtime_error("superlevel_threshold: bisection did not converge");
}

namespace {

// ray exit radius from a cell, rays started at (px, 0) on the bottom edge
double ray_exit(const Cell& c, double px, double phi) {
    const double dx = std::cos(phi), dy = std::sin(phi);
    double r = std::numeric_limits<double>::infinity();
    if (dx > 0.0) r = std::min(r, (c.u1 - px) / dx);
    if (dx < 0.0) r = std::min(r, (c.l1 - px) / dx);
    if (dy > 0.0) r = std::min(r, c.u2 / dy);
    return r;
}

struct VelAccum {
    double value = 0.0;
    double error = 0.0;
    long evals = 0;
};

void velocity_cells(const Cell& c, double eps, double a, int depth, const QuadratureSpec& spec,
                    double cell_tol, VelAccum& acc) {
    const double ku = kernel_upper(c, eps);
    if (ku < a) return;
    const bool singular = (c.l1 <= eps && eps <= c.u1 && c.l2 == 0.0);
    if (singular && (c.u1 - c.l1) <= 0.5 * eps) {
        // polar cell around (eps, 0): K * rho is bounded there
        auto f = [&](double phi, double t) {
            const double R = ray_exit(c, eps, phi);
            const double rho = t * R;
            const Point y{eps + rho * std::cos(phi), rho * std::sin(phi)};
            if (y.x1 < c.l1 || y.x1 > c.u1 || y.x2 < 0.0 || y.x2 > c.u2) return 0.0;
            const double K = approach_kernel(eps, y);
            if (K < a) return 0.0;
            return K * rho * R;
        };
        const QuadResult q = integrate_rect(f, 0.0, M_PI, 0.0, 1.0, spec);
        acc.value += q.value;
        acc.error += q.error;
        acc.evals += q.evals;
        return;
    }
    const double kl = kernel_lower(c, eps);
    if (!singular && kl >= a) {
        // fully inside the set and away from the singular point: smooth
        QuadratureSpec local = spec;
        local.abs_tol = cell_tol;
        auto f = [&](double y1, double y2) { return approach_kernel(eps, {y1, y2}); };
        const QuadResult q = integrate_rect(f, c.l1, c.u1, c.l2, c.u2, local);
        acc.value += q.value;
        acc.error += q.error;
        acc.evals += q.evals;
        return;
    }
    if (depth <= 0) {
        // undecided sliver: bound by the midpoint value times area
        const Point mid{0.5 * (c.l1 + c.u1), 0.5 * (c.l2 + c.u2)};
        const double K = approach_kernel(eps, mid);
        const double contrib = (K >= a ? K : 0.0) * c.area();
        acc.value += contrib;
        acc.error += std::min(ku, 2.0 * std::max(K, a)) * c.area();
        return;
    }
    const double m1 = 0.5 * (c.l1 + c.u1), m2 = 0.5 * (c.l2 + c.u2);
    velocity_cells({c.l1, c.l2, m1, m2}, eps, a, depth - 1, spec, 0.25 * cell_tol, acc);
    velocity_cells({m1, c.l2, c.u1, m2}, eps, a, depth - 1, spec, 0.25 * cell_tol, acc);
    velocity_cells({c.l1, m2, m1, c.u2}, eps, a, depth - 1, spec, 0.25 * cell_tol, acc);
    velocity_cells({m1, m2, c.u1, c.u2}, eps, a, depth - 1, spec, 0.25 * cell_tol, acc);
}

}  // namespace

ExtremalResult approach_velocity_extremal(double eps, double I, const QuadratureSpec& quad) {
    quad.validate();
    ExtremalResult res = superlevel_threshold(eps, I, 1e-3);
    const double R = 10.0 * std::sqrt(I);
    VelAccum acc;
    velocity_cells({0.0, 0.0, R, R}, eps, res.a_threshold, 40, quad, quad.abs_tol, acc);
    res.approach_velocity = 8.0 * eps / M_PI * acc.value;
    res.velocity_error = 8.0 * eps / M_PI * acc.error;
    return res;
}

double approach_chain_bound(double eps, double I, double C) {
    return -4.0 * eps * std::log(eps) / M_PI +
           (4.0 * std::log(10.0 * std::sqrt(I)) + 2.0 * C * M_PI) / M_PI * eps;
}

double rate_bound(double delta, double m, double CI) {
    if (!(delta > 0.0)) throw std::domain_error("rate_bound: delta > 0");
    if (!(m > 0.0 && m <= 1.0)) throw std::domain_error("rate_bound: m in (0, 1]");
    if (!(CI > 0.0)) throw std::domain_error("rate_bound: CI > 0");
    const double mn = std::min(-std::log(delta), -std::log(m));
    return (2.0 * mn + CI) / M_PI * delta;
}

double gradient_upper_bound_lnln(double t, const GrowthBoundParams& params) {
    if (!(t >= 0.0)) throw std::domain_error("gradient bound: t >= 0");
    if (!(params.grad0 > 0.0) || params.grad0 == 1.0)
        throw std::domain_error("gradient bound: grad0 > 0 and != 1 (perturb grad0 = 1)");
    if (!(params.CI > 0.0)) throw std::domain_error("gradient bound: CI > 0");
    const double l = std::abs(std::log(params.grad0));
    const double X = 2.0 * t / M_PI + params.CI * (1.0 - std::exp(-2.0 * t / M_PI)) / l;
    return std::log(l) + X;
}

double gradient_upper_bound(double t, const GrowthBoundParams& params) {
    const double lnln = gradient_upper_bound_lnln(t, params);
    // exp(exp(lnln)); saturates to +inf harmlessly
    return std::exp(std::exp(lnln));
}

GrowthCheckReport check_growth_inequality(const std::vector<std::pair<double, double>>& history,
                                          double CI, double slack) {
    if (!(CI > 0.0)) throw std::domain_error("check_growth_inequality: CI > 0");
    GrowthCheckReport rep;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < history.size(); ++i) {
        const auto [t0, p0] = history[i];
        const auto [t1, p1] = history[i + 1];
        if (!(t1 > t0)) throw std::domain_error("check_growth_inequality: times not increasing");
        if (!(p0 > 0.0 && p1 > 0.0))
            throw std::domain_error("check_growth_inequality: proxies must be positive");
        // integrate y' = (2/pi)(ln max{y,1} + CI) y exactly from (t0, p0)
        double lp = std::log(p0);
        double dt = t1 - t0;
        if (lp < 0.0) {
            const double t_hit = -lp * M_PI / (2.0 * CI);  // time to grow to 1
            if (t_hit >= dt) {
                lp += 2.0 * CI / M_PI * dt;
                dt = 0.0;
            } else {
                lp = 0.0;
                dt -= t_hit;
            }
        }
        if (dt > 0.0) lp = (lp + CI) * std::exp(2.0 * dt / M_PI) - CI;
        const double allowed = lp + std::log1p(slack);
        const double margin = allowed - std::log(p1);
        ++rep.checked;
        if (margin < rep.worst_margin) rep.worst_margin = margin;
        if (margin < 0.0 && rep.pass) {
            rep.pass = false;
            rep.first_violation = (long)i + 1;
        }
    }
    if (rep.checked == 0) rep.worst_margin = 0.0;
    return rep;
}

}  // namespace lab
