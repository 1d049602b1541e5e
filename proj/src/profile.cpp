#include "lab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lab {

namespace {
void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}
}  // namespace

double eval_g(double s) {
    require(s > 0.0 && s <= kEinv && std::isfinite(s), "eval_g: s must lie in (0, e^-1]");
    return s * std::exp(std::sqrt(-std::log(s)));
}

double eval_g_prime(double s) {
    require(s > 0.0 && s <= kEinv && std::isfinite(s), "eval_g_prime: s must lie in (0, e^-1]");
    const double root = std::sqrt(-std::log(s));
    return std::exp(root) * (1.0 - 0.5 / root);
}

double eval_f(double s) {
    require(s > 0.0 && s < 1.0 && std::isfinite(s), "eval_f: s must lie in (0, 1)");
    return 2.0 + std::sqrt(-std::log(s));
}

bool omega_region_contains(double eps, const Point& p) {
    require(eps >= 0.0 && eps <= kEinv && std::isfinite(eps),
            "omega_region_contains: eps must lie in [0, e^-1]");
    if (!(p.x1 > eps && p.x1 < kEinv)) return false;
    if (!(p.x2 > 0.0)) return false;
    return p.x2 < eval_g(p.x1);
}

bool q_region_contains(double r, const Point& p) {
    require(r > 0.0 && std::isfinite(r), "q_region_contains: r must be positive");
    return p.x1 > 0.0 && p.x2 > 0.0 && p.norm2() > r * r;
}

bool d_region_contains(double s, const Point& p) {
    require(s > 0.0 && s <= kEm4, "d_region_contains: s must lie in (0, e^-4]");
    const double g = eval_g(s);
    const double r = std::hypot(s, g);
    if (!omega_region_contains(0.0, p)) return false;
    if (!q_region_contains(r, p)) return false;
    return p.norm2() < kEinv * kEinv;
}

double graph_crossing_radius(double theta) {
    // On the ray, x2 < g(x1) iff tan(theta) < exp(|ln(rho cos theta)|^{1/2}),
    // and the right side is strictly decreasing in rho while x1 < 1.
    const double t = std::tan(theta);
    if (!(t > 1.0)) return std::numeric_limits<double>::infinity();
    const double lt = std::log(t);
    const double s_cross = std::exp(-lt * lt);  // x1 at the crossing
    return s_cross / std::cos(theta);
}

HResult compute_h(double s, const QuadratureSpec& quad) {
    require(s > 0.0 && s <= kEm4, "compute_h: s must lie in (0, e^-4]");
    quad.validate();
    const double g = eval_g(s);
    const double r = std::hypot(s, g);
    const double L = -std::log(s);

    auto integrand = [r](double theta) {
        const double hi = std::min(kEinv, graph_crossing_radius(theta));
        if (hi <= r) return 0.0;
        return std::cos(theta) * std::sin(theta) * std::log(hi / r);
    };

    // Panel breaks: pi/4 (graph constraint switches on), the angle where the
    // crossing radius drops below e^-1, and the inner-corner angle where the
    // cross-section empties.
    std::vector<double> pts = {0.0, 0.25 * M_PI, std::atan2(g, s), 0.5 * M_PI};
    {
        double lo = 0.25 * M_PI + 1e-12, hi = std::atan2(g, s);
        if (std::min(kEinv, graph_crossing_radius(hi)) < kEinv) {
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (graph_crossing_radius(mid) > kEinv) lo = mid;
                else hi = mid;
            }
            pts.push_back(0.5 * (lo + hi));
        }
    }
    const QuadResult q = integrate_1d(integrand, pts, quad);

    HResult out;
    out.h = 4.0 / M_PI * q.value / L;
    out.error = 4.0 / M_PI * q.error / L;
    out.converged = q.converged;
    out.evals = q.evals;
    return out;
}

std::vector<double> s0_search_grid(double s_min, int per_decade) {
    require(s_min > 0.0 && s_min < kEm4, "s0_search_grid: s_min must lie in (0, e^-4)");
    require(per_decade >= 1, "s0_search_grid: per_decade >= 1");
    std::vector<double> grid;
    const double step = std::pow(10.0, -1.0 / per_decade);
    for (double s = kEm4; s >= s_min; s *= step) grid.push_back(s);
    return grid;
}

double find_s0(double C, const QuadratureSpec& quad, const std::vector<double>& grid) {
    require(C >= 1.0, "find_s0: C must be >= 1");
    if (grid.empty()) throw std::invalid_argument("find_s0: empty grid");
    for (size_t i = 0; i + 1 < grid.size(); ++i)
        if (!(grid[i] > grid[i + 1]))
            throw std::invalid_argument("find_s0: grid must be strictly decreasing");
    if (!(grid.front() <= kEm4 && grid.back() > 0.0))
        throw std::invalid_argument("find_s0: grid must lie in (0, e^-4]");

    // condition holds at index i; find the largest i0 with the condition
    // true for all i >= i0 (all grid points <= s0)
    std::vector<char> ok(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        const HResult h = compute_h(grid[i], quad);
        ok[i] = (h.h * -std::log(grid[i]) >= C * eval_f(grid[i])) ? 1 : 0;
    }
    size_t i0 = grid.size();
    for (size_t i = grid.size(); i-- > 0;) {
        if (!ok[i]) break;
        i0 = i;
    }
    if (i0 == grid.size()) throw std::runtime_error("no admissible s0 on grid");
    return grid[i0];
}

ProfileConstants derive_constants(double C, double I, double s0) {
    require(C >= 1.0 && std::isfinite(C), "derive_constants: C must be >= 1");
    require(I >= 1.0 && std::isfinite(I), "derive_constants: I must be >= 1");
    require(s0 > 0.0 && s0 <= kEm4, "derive_constants: s0 must lie in (0, e^-4]");
    ProfileConstants pc;
    pc.C = C;
    pc.I = I;
    pc.s0 = s0;
    const double L0 = -std::log(s0);
    pc.rho0 = s0 / (2.0 * std::sqrt(L0));
    const double gs0 = eval_g(s0);
    pc.Cprime = C * (gs0 / s0) * (1.0 + std::log((s0 + gs0) / s0));
    pc.CI = 0.25 * (4.0 * std::log(2.0) + 4.0 * std::log(10.0 * std::sqrt(I)) +
                    (2.0 * C + 16.0) * M_PI);
    return pc;
}

void ProfileConstants::validate(const QuadratureSpec& quad) const {
    require(C >= 1.0, "ProfileConstants: C >= 1");
    require(I >= 1.0, "ProfileConstants: I >= 1");
    require(s0 > 0.0 && s0 <= kEm4, "ProfileConstants: s0 in (0, e^-4]");
    require(rho0 > 0.0, "ProfileConstants: rho0 > 0");
    require(Cprime > 0.0 && CI > 0.0, "ProfileConstants: Cprime, CI > 0");
    const ProfileConstants ref = derive_constants(C, I, s0);
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::abs(b); };
    require(close(rho0, ref.rho0), "ProfileConstants: rho0 formula violated");
    require(close(Cprime, ref.Cprime), "ProfileConstants: Cprime formula violated");
    require(close(CI, ref.CI), "ProfileConstants: CI formula violated");
    // defining property of s0 on a sampled grid two decades below s0
    for (int k = 0; k <= 16; ++k) {
        const double s = s0 * std::pow(10.0, -2.0 * k / 16.0);
        const HResult h = compute_h(s, quad);
        require(h.h * -std::log(s) >= C * eval_f(s) - h.error,
                "ProfileConstants: h(s)|ln s| >= C f(s) fails below s0");
    }
}

namespace {

// n gaps spanning T > 0: geometric refinement (the given ratio) over a
// bounded zone at the fine end, uniform elsewhere.
std::vector<double> graded_gaps(double T, int n, double ratio) {
    const int k = std::min(n - 1, 24);
    double geo = 0.0;
    for (int j = 1; j <= k; ++j) geo += std::pow(ratio, -j);
    const double du = T / ((n - k) + geo);
    std::vector<double> gaps(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const int j = k - i;  // distance from the fine end
        gaps[i] = j > 0 ? du * std::pow(ratio, -(double)j) : du;
        sum += gaps[i];
    }
    for (double& v : gaps) v *= T / sum;  // exact span
    return gaps;
}

// n points on [a,b] excluding b, spacing graded geometrically from the fine
// end (a when fine_at_start, else b)
void grade_segment(std::vector<double>& out, double a, double b, int n, bool fine_at_start,
                   double ratio) {
    if (n == 1) {
        out.push_back(a);
        return;
    }
    std::vector<double> gaps = graded_gaps(std::abs(b - a), n, ratio);
    if (!fine_at_start) std::reverse(gaps.begin(), gaps.end());
    const double dir = b > a ? 1.0 : -1.0;
    double acc = a;
    for (int i = 0; i < n; ++i) {
        out.push_back(acc);
        acc += dir * gaps[i];
    }
}

}  // namespace

std::vector<Point> sample_omega_boundary(double eps, int n) {
    require(eps > 0.0 && eps <= kEm4, "sample_omega_boundary: eps must lie in (0, e^-4]");
    require(n >= 8, "sample_omega_boundary: n >= 8");
    const double geps = eval_g(eps);
    constexpr double kRatio = 1.15;  // grading toward the corner (eps, g(eps))

    // Node budget per piece; graph gets the most (it carries the curvature).
    int n_graph = std::max(3, (int)std::lround(0.45 * n));
    int n_bottom = std::max(2, (int)std::lround(0.30 * n));
    int n_right = std::max(1, (int)std::lround(0.10 * n));
    int n_left = n - n_graph - n_bottom - n_right;
    if (n_left < 1) {
        n_graph -= (1 - n_left);
        n_left = 1;
    }

    std::vector<Point> poly;
    poly.reserve(n);

    // bottom (eps,0) -> (e^-1,0), log-spaced in x1, fine near eps
    {
        std::vector<double> xs;
        grade_segment(xs, std::log(eps), std::log(kEinv), n_bottom, true, kRatio);
        for (double x : xs) poly.push_back({std::exp(x), 0.0});
        poly[0].x1 = eps;  // exact corner
    }
    // right (e^-1,0) -> (e^-1,1), uniform
    {
        std::vector<double> ys;
        grade_segment(ys, 0.0, 1.0, n_right, false, 1.0);
        for (double y : ys) poly.push_back({kEinv, y});
    }
    // graph (e^-1,1) -> (eps,g(eps)): log-spaced in s, fine toward eps
    {
        std::vector<double> ls;
        grade_segment(ls, std::log(kEinv), std::log(eps), n_graph, false, kRatio);
        for (double l : ls) {
            const double s = std::min(std::exp(l), kEinv);
            poly.push_back({s, eval_g(s)});
        }
        poly[n_bottom + n_right] = {kEinv, 1.0};  // exact corner
    }
    // left (eps,g(eps)) -> (eps,0): fine near the corner at the top
    {
        std::vector<double> ys;
        grade_segment(ys, geps, 0.0, n_left, true, kRatio);
        for (double y : ys) poly.push_back({eps, y});
    }
    return poly;
}

QuadResult omega_region_area(double eps, const QuadratureSpec& quad) {
    require(eps >= 0.0 && eps < kEinv, "omega_region_area: eps in [0, e^-1)");
    return integrate_1d([](double s) { return eval_g(s); }, eps, kEinv, quad);
}

}  // namespace lab
