#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lab/geometry.hpp"
#include "lab/quadrature.hpp"

namespace lab {

/// A constant-vorticity region bounded by an oriented closed contour.
/// When the symmetry flags are set the patch implicitly carries
/// sign-reflected images across the respective axes; the images are
/// generated on the fly during evaluation and never stored.
struct Patch {
    std::vector<Point> contour;  // counterclockwise, simple, >= 3 vertices
    double strength = 1.0;       // |strength| <= 1
    bool odd_x1 = true;
    bool odd_x2 = true;

    double area() const { return signed_area(contour); }
    void validate() const;
};

struct VorticityField {
    std::vector<Patch> patches;
    double total_l1 = 0.0;  // sum of |strength| * area over all images

    static VorticityField make(std::vector<Patch> patches);
    void validate() const;
};

/// Reflection images carried by a patch: linear map applied to the base
/// contour. Strength sign and traversal orientation both flip under a
/// single reflection, so every image enters the contour integral with the
/// base strength.
struct ImageMap {
    double m1 = 1.0;  // y1 scale (+-1)
    double m2 = 1.0;  // y2 scale (+-1)
    Point apply(const Point& p) const { return {m1 * p.x1, m2 * p.x2}; }
};
std::vector<ImageMap> image_maps(const Patch& p);

struct ContourDiagnostics {
    long degenerate_segments = 0;
};

/// Velocity at x from the exact per-segment antiderivative of the
/// logarithmic contour kernel. Valid anywhere, including on the contour.
Point velocity_contour(const VorticityField& field, const Point& x,
                       ContourDiagnostics* diag = nullptr);

/// Elementwise velocity_contour, fanned out across workers with a
/// deterministic by-index gather.
std::vector<Point> velocity_batch(const VorticityField& field,
                                  const std::vector<Point>& points);

/// Velocity by adaptive area quadrature of the Biot-Savart kernel over each
/// patch (and its images). The singularity at y = x is removed by zeroing a
/// disc around x whenever one fits inside the patch: the kernel is odd, so
/// the disc contributes nothing.
struct VelocityResult {
    Point u;
    double error = 0.0;
    long evals = 0;
    bool converged = true;
};
VelocityResult velocity_direct(const VorticityField& field, const Point& x,
                               const QuadratureSpec& quad);

/// (4/pi) * integral over Q(|x|) of y1 y2 / |y|^4 * omega(y) dy, the
/// rotation-invariant leading term of the velocity decomposition.
QuadResult main_term(const VorticityField& field, const Point& x, const QuadratureSpec& quad);

/// Same integral over Q(r); main_term(x) equals main_term_radius(|x|).
QuadResult main_term_radius(const VorticityField& field, double r, const QuadratureSpec& quad);

/// Remainders b_j = (-1)^j u_j(x)/x_j - main_term, x in the open quadrant.
struct BPair {
    double b1 = 0.0;
    double b2 = 0.0;
    double main = 0.0;
    Point u;
};
BPair extract_b(const VorticityField& field, const Point& x, const QuadratureSpec& quad);

/// Fit of the decomposition constant over an evaluation grid and a battery
/// of fields: C_raw = max |b_j| / (||w||_inf (1 + ln((x1+x2)/x_j))).
struct FitSample {
    Point x;
    int field_index = 0;
    double b1 = 0.0, b2 = 0.0;
    double ratio = 0.0;
};
struct FitResult {
    double C_raw = 0.0;
    double C_safe = 0.0;  // 1.5 x C_raw
    std::vector<FitSample> samples;
};
FitResult fit_lemma_constant(const std::vector<VorticityField>& battery,
                             const QuadratureSpec& quad, int grid_n = 20);

/// The standard five-field evaluation battery.
std::vector<VorticityField> standard_battery();

/// Plain-text geometry files: header "strength odd_x1 odd_x2", one vertex
/// per line "x1 x2", patches separated by blank lines.
void save_patches(std::ostream& os, const std::vector<Patch>& patches);
std::vector<Patch> load_patches(std::istream& is);

}  // namespace lab
