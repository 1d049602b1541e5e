#include "lab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "lab/parallel.hpp"

namespace lab {

void Patch::validate() const {
    if (contour.size() < 3) throw std::invalid_argument("Patch: need >= 3 vertices");
    for (const Point& p : contour)
        if (!point_finite(p)) throw std::invalid_argument("Patch: non-finite vertex");
    for (size_t i = 0; i < contour.size(); ++i)
        if (contour[i] == contour[(i + 1) % contour.size()])
            throw std::invalid_argument("Patch: repeated vertex");
    if (!(std::abs(strength) <= 1.0)) throw std::invalid_argument("Patch: |strength| <= 1");
    if (signed_area(contour) <= 0.0)
        throw std::invalid_argument("Patch: contour must be counterclockwise");
    if (!polygon_is_simple(contour)) throw std::invalid_argument("Patch: contour not simple");
    if (odd_x1 && odd_x2)
        for (const Point& p : contour)
            if (p.x1 < 0.0 || p.x2 < 0.0)
                throw std::invalid_argument("Patch: vertices must lie in the closed quadrant");
}

std::vector<ImageMap> image_maps(const Patch& p) {
    std::vector<ImageMap> maps = {{1.0, 1.0}};
    if (p.odd_x1) maps.push_back({-1.0, 1.0});
    if (p.odd_x2) maps.push_back({1.0, -1.0});
    if (p.odd_x1 && p.odd_x2) maps.push_back({-1.0, -1.0});
    return maps;
}

static int image_count(const Patch& p) { return 1 + p.odd_x1 + p.odd_x2 + (p.odd_x1 && p.odd_x2); }

VorticityField VorticityField::make(std::vector<Patch> patches) {
    VorticityField f;
    f.patches = std::move(patches);
    f.total_l1 = 0.0;
    for (const Patch& p : f.patches)
        f.total_l1 += std::abs(p.strength) * p.area() * image_count(p);
    f.validate();
    return f;
}

void VorticityField::validate() const {
    double l1 = 0.0;
    for (const Patch& p : patches) {
        p.validate();
        l1 += std::abs(p.strength) * p.area() * image_count(p);
    }
    if (std::abs(l1 - total_l1) > 1e-10 * std::max(1.0, std::abs(l1)))
        throw std::invalid_argument("VorticityField: stale total_l1 cache");
    // pairwise interior disjointness
    for (size_t i = 0; i < patches.size(); ++i)
        for (size_t j = i + 1; j < patches.size(); ++j) {
            const auto& a = patches[i].contour;
            const auto& b = patches[j].contour;
            const BBox ba = bounding_box(a), bb = bounding_box(b);
            if (ba.hi1 <= bb.lo1 || bb.hi1 <= ba.lo1 || ba.hi2 <= bb.lo2 || bb.hi2 <= ba.lo2)
                continue;
            for (const Point& p : a)
                if (point_in_polygon(b, p))
                    throw std::invalid_argument("VorticityField: overlapping patches");
            for (const Point& p : b)
                if (point_in_polygon(a, p))
                    throw std::invalid_argument("VorticityField: overlapping patches");
            for (size_t u = 0; u < a.size(); ++u)
                for (size_t v = 0; v < b.size(); ++v)
                    if (segments_intersect(a[u], a[(u + 1) % a.size()], b[v],
                                           b[(v + 1) % b.size()]))
                        throw std::invalid_argument("VorticityField: crossing patch contours");
        }
}

namespace {

// integral of ln|x - y(t)| for y(t) = a + t (b - a), t in [0,1]
double segment_log_integral(const Point& x, const Point& a, const Point& b) {
    const Point e = b - a;
    const double L2 = e.norm2();
    const Point c = x - a;
    const double tstar = dot(c, e) / L2;
    const double h2 = std::max(0.0, c.norm2() - tstar * tstar * L2);
    const double h = std::sqrt(h2);
    const double L = std::sqrt(L2);
    auto F = [&](double s) {
        double v = -2.0 * s;
        if (s != 0.0) v += s * std::log(L2 * s * s + h2);
        if (h > 0.0) v += (2.0 * h / L) * std::atan(L * s / h);
        return v;
    };
    return 0.5 * (F(1.0 - tstar) - F(-tstar));
}

}  // namespace

Point velocity_contour(const VorticityField& field, const Point& x, ContourDiagnostics* diag) {
    Point u;
    for (const Patch& patch : field.patches) {
        if (patch.strength == 0.0) continue;
        const double coef = patch.strength / (2.0 * M_PI);
        const size_t n = patch.contour.size();
        for (const ImageMap& m : image_maps(patch)) {
            for (size_t i = 0; i < n; ++i) {
                const Point a = m.apply(patch.contour[i]);
                const Point b = m.apply(patch.contour[(i + 1) % n]);
                const Point e = b - a;
                if (e.norm2() == 0.0) {
                    if (diag) ++diag->degenerate_segments;
                    continue;
                }
                const double J = segment_log_integral(x, a, b);
                u = u + e * (coef * J);
            }
        }
    }
    return u;
}

std::vector<Point> velocity_batch(const VorticityField& field, const std::vector<Point>& points) {
    std::vector<Point> out(points.size());
    parallel_for(points.size(), [&](size_t i) { out[i] = velocity_contour(field, points[i]); });
    return out;
}

VelocityResult velocity_direct(const VorticityField& field, const Point& x,
                               const QuadratureSpec& quad) {
    quad.validate();
    VelocityResult res;
    for (const Patch& patch : field.patches) {
        for (const Point& v : patch.contour)
            if (v == x)
                throw std::domain_error(
                    "velocity_direct: x coincides with a contour vertex; perturb it");
        if (patch.strength == 0.0) continue;
        for (const ImageMap& m : image_maps(patch)) {
            // area integral over the reflected polygon, counterclockwise;
            // single reflections carry the opposite vorticity sign
            const double coef = patch.strength * m.m1 * m.m2 / (2.0 * M_PI);
            std::vector<Point> poly(patch.contour.size());
            for (size_t i = 0; i < poly.size(); ++i) poly[i] = m.apply(patch.contour[i]);
            if (m.m1 * m.m2 < 0.0) std::reverse(poly.begin(), poly.end());

            double mask_r = 0.0;
            if (point_in_polygon(poly, x)) {
                const double clearance = distance_to_boundary(poly, x);
                mask_r = 0.9 * clearance;
                if (quad.singularity_radius > 0.0)
                    mask_r = std::min(mask_r, quad.singularity_radius);
            }
            // Inside the patch the kernel is weighted by a smooth radial ramp
            // vanishing near y = x. The kernel is odd, so it integrates to
            // zero over every complete circle inside the patch and the ramp
            // changes nothing except regularity.
            auto f = [&x, coef, mask_r](const Point& y) -> Point {
                const Point d{x.x1 - y.x1, x.x2 - y.x2};
                const double r2 = d.norm2();
                if (r2 == 0.0) return {0.0, 0.0};
                double w = 1.0;
                if (mask_r > 0.0) {
                    const double r = std::sqrt(r2);
                    if (r <= 0.5 * mask_r) return {0.0, 0.0};
                    if (r < mask_r) {
                        const double t = (r - 0.5 * mask_r) / (0.5 * mask_r);
                        w = t * t * (3.0 - 2.0 * t);
                    }
                }
                return Point{d.x2, -d.x1} * (coef * w / r2);
            };
            const QuadResult2 q = integrate_polygon(poly, f, x.x2, quad);
            res.u = res.u + q.value;
            res.error += q.error;
            res.evals += q.evals;
            res.converged = res.converged && q.converged;
        }
    }
    return res;
}

QuadResult main_term(const VorticityField& field, const Point& x, const QuadratureSpec& quad) {
    if (x.x1 == 0.0 && x.x2 == 0.0)
        throw std::domain_error("main_term: x must differ from the origin");
    return main_term_radius(field, x.norm(), quad);
}

QuadResult main_term_radius(const VorticityField& field, double r, const QuadratureSpec& quad) {
    if (!(r > 0.0)) throw std::domain_error("main_term_radius: r > 0");
    QuadResult total;
    for (const Patch& patch : field.patches) {
        if (patch.strength == 0.0) continue;
        // theta panels split at vertex angles: the section radii are smooth
        // between them
        std::vector<double> pts = {0.0, 0.5 * M_PI};
        for (const Point& v : patch.contour) {
            const double th = std::atan2(v.x2, v.x1);
            if (th > 1e-14 && th < 0.5 * M_PI - 1e-14) pts.push_back(th);
        }
        auto integrand = [&](double theta) {
            double sum = 0.0;
            for (const auto& [rin, rout] : radial_sections(patch.contour, theta)) {
                const double lo = std::max(rin, r);
                if (rout > lo) sum += std::log(rout / lo);
            }
            return std::cos(theta) * std::sin(theta) * sum;
        };
        const QuadResult q = integrate_1d(integrand, pts, quad);
        total.value += 4.0 / M_PI * patch.strength * q.value;
        total.error += 4.0 / M_PI * std::abs(patch.strength) * q.error;
        total.evals += q.evals;
        total.converged = total.converged && q.converged;
    }
    return total;
}

BPair extract_b(const VorticityField& field, const Point& x, const QuadratureSpec& quad) {
    if (!(x.x1 > 0.0 && x.x2 > 0.0))
        throw std::domain_error("extract_b: x must lie in the open quadrant");
    BPair out;
    out.u = velocity_contour(field, x);
    out.main = main_term(field, x, quad).value;
    out.b1 = -out.u.x1 / x.x1 - out.main;
    out.b2 = out.u.x2 / x.x2 - out.main;
    return out;
}

FitResult fit_lemma_constant(const std::vector<VorticityField>& battery,
                             const QuadratureSpec& quad, int grid_n) {
    FitResult fit;
    std::vector<Point> grid;
    for (int i = 0; i < grid_n; ++i)
        for (int j = 0; j < grid_n; ++j) {
            // log grid over (0, 1/2)^2, from 1e-3 up to just below 1/2
            const double x1 = 1e-3 * std::pow(0.4999 / 1e-3, i / (grid_n - 1.0));
            const double x2 = 1e-3 * std::pow(0.4999 / 1e-3, j / (grid_n - 1.0));
            grid.push_back({x1, x2});
        }
    for (size_t fi = 0; fi < battery.size(); ++fi) {
        double winf = 0.0;
        for (const Patch& p : battery[fi].patches) winf = std::max(winf, std::abs(p.strength));
        if (winf == 0.0) continue;
        std::vector<FitSample> rows(grid.size());
        parallel_for(grid.size(), [&](size_t k) {
            const Point& x = grid[k];
            const BPair b = extract_b(battery[fi], x, quad);
            const double bound1 = 1.0 + std::log((x.x1 + x.x2) / x.x1);
            const double bound2 = 1.0 + std::log((x.x1 + x.x2) / x.x2);
            FitSample s;
            s.x = x;
            s.field_index = (int)fi;
            s.b1 = b.b1;
            s.b2 = b.b2;
            s.ratio = std::max(std::abs(b.b1) / (winf * bound1), std::abs(b.b2) / (winf * bound2));
            rows[k] = s;
        });
        for (const FitSample& s : rows) {
            fit.samples.push_back(s);
            fit.C_raw = std::max(fit.C_raw, s.ratio);
        }
    }
    fit.C_safe = 1.5 * fit.C_raw;
    return fit;
}

std::vector<VorticityField> standard_battery() {
    auto rect = [](double a1, double b1, double a2, double b2, double s) {
        Patch p;
        p.contour = {{a1, a2}, {b1, a2}, {b1, b2}, {a1, b2}};
        p.strength = s;
        return p;
    };
    std::vector<VorticityField> battery;
    // 1. unit square away from the axes
    battery.push_back(VorticityField::make({rect(1.0, 2.0, 1.0, 2.0, 1.0)}));
    // 2. square close to the origin
    battery.push_back(VorticityField::make({rect(0.25, 0.75, 0.25, 0.75, 1.0)}));
    // 3. thin rectangle touching the x1-axis
    battery.push_back(VorticityField::make({rect(0.05, 1.0, 0.0, 0.3, 1.0)}));
    // 4. nonconvex L-shape, negative strength
    {
        Patch p;
        p.contour = {{0.2, 0.2}, {1.2, 0.2}, {1.2, 0.6}, {0.6, 0.6}, {0.6, 1.4}, {0.2, 1.4}};
        p.strength = -1.0;
        battery.push_back(VorticityField::make({p}));
    }
    // 5. two disjoint patches of mixed sign
    battery.push_back(
        VorticityField::make({rect(0.05, 0.15, 0.05, 0.15, 1.0), rect(0.5, 1.5, 0.2, 0.8, -0.5)}));
    return battery;
}

void save_patches(std::ostream& os, const std::vector<Patch>& patches) {
    bool first = true;
    os.precision(17);
    for (const Patch& p : patches) {
        if (!first) os << "\n";
        first = false;
        os << p.strength << " " << (p.odd_x1 ? 1 : 0) << " " << (p.odd_x2 ? 1 : 0) << "\n";
        for (const Point& v : p.contour) os << v.x1 << " " << v.x2 << "\n";
    }
}

std::vector<Patch> load_patches(std::istream& is) {
    std::vector<Patch> patches;
    std::string line;
    Patch cur;
    bool have_header = false;
    auto flush = [&] {
        if (have_header) {
            cur.validate();
            patches.push_back(cur);
            cur = Patch{};
            have_header = false;
        }
    };
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            flush();
            continue;
        }
        if (!have_header) {
            int o1 = 0, o2 = 0;
            if (!(ls >> cur.strength >> o1 >> o2))
                throw std::runtime_error("load_patches: bad header line: " + line);
            cur.odd_x1 = o1 != 0;
            cur.odd_x2 = o2 != 0;
            cur.contour.clear();
            have_header = true;
        } else {
            Point v;
            if (!(ls >> v.x1 >> v.x2))
                throw std::runtime_error("load_patches: bad vertex line: " + line);
            cur.contour.push_back(v);
        }
    }
    flush();
    return patches;
}

}  // namespace lab
