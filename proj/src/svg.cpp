#include "lab/svg.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace lab {

namespace {

struct View {
    double x0, y0, scale, height;
    double px(double x) const { return (x - x0) * scale + 40.0; }
    double py(double y) const { return height - ((y - y0) * scale + 60.0); }
};

void polyline(std::ofstream& os, const std::vector<Point>& pts, const View& v,
              const char* color, bool closed) {
    os << "<path d=\"";
    for (size_t i = 0; i < pts.size(); ++i)
        os << (i == 0 ? "M" : "L") << v.px(pts[i].x1) << " " << v.py(pts[i].x2) << " ";
    if (closed) os << "Z";
    os << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\"/>\n";
}

}  // namespace

void write_svg_snapshot(const std::string& path, const SimState& state,
                        const BarrierState& barrier, double window) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("svg: cannot write " + path);
    const BBox bb = bounding_box(state.nodes());
    const double w = 760.0, h = 560.0;
    const double span1 = std::max(bb.hi1 - std::min(0.0, bb.lo1), 1e-9);
    const double span2 = std::max(bb.hi2, 1e-9);
    View v{std::min(0.0, bb.lo1), 0.0, std::min((w - 80.0) / span1, (h - 120.0) / span2), h};

    os.precision(10);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w
       << "\" height=\"" << h << "\">\n";
    os << "<text x=\"40\" y=\"24\" font-size=\"13\" font-family=\"monospace\">t=" << state.t
       << "  nodes=" << state.nodes().size() << "  ln(alpha)=" << barrier.log_alpha
       << "  ln(eps)=" << barrier.log_eps << "</text>\n";

    // axes
    os << "<line x1=\"" << v.px(0) << "\" y1=\"" << v.py(0) << "\" x2=\"" << v.px(bb.hi1 * 1.02)
       << "\" y2=\"" << v.py(0) << "\" stroke=\"#999\" stroke-width=\"0.7\"/>\n";
    os << "<line x1=\"" << v.px(0) << "\" y1=\"" << v.py(0) << "\" x2=\"" << v.px(0)
       << "\" y2=\"" << v.py(span2 * 1.02) << "\" stroke=\"#999\" stroke-width=\"0.7\"/>\n";

    polyline(os, state.nodes(), v, "#0044cc", true);

    // barrier outline when it still fits in double range
    const double alpha = barrier.alpha();
    const double eps_b = barrier.eps();
    if (alpha > 1e-290 && eps_b < kEm4 * (1.0 + 1e-12)) {
        std::vector<Point> outline = sample_omega_boundary(std::min(eps_b, kEm4), 160);
        for (Point& p : outline) p = p * alpha;
        polyline(os, outline, v, "#cc2200", true);
    }

    // proxy window circle
    os << "<circle cx=\"" << v.px(0) << "\" cy=\"" << v.py(0) << "\" r=\"" << window * v.scale
       << "\" fill=\"none\" stroke=\"#00aa55\" stroke-dasharray=\"4 3\" stroke-width=\"0.8\"/>\n";

    // logarithmic distance ruler: ticks at x1 = 10^{-k}
    const double ry = h - 18.0;
    os << "<text x=\"40\" y=\"" << ry - 10 << "\" font-size=\"11\" font-family=\"monospace\">"
       << "log distance to the x2-axis</text>\n";
    for (int k = 0; k <= 14; ++k) {
        const double x = std::pow(10.0, -k);
        if (x > bb.hi1 * 1.05) continue;
        const double sx = 40.0 + (14 - k) * (w - 80.0) / 14.0;
        os << "<line x1=\"" << sx << "\" y1=\"" << ry - 6 << "\" x2=\"" << sx << "\" y2=\"" << ry
           << "\" stroke=\"#444\" stroke-width=\"0.8\"/>\n";
        os << "<text x=\"" << sx - 14 << "\" y=\"" << ry + 12
           << "\" font-size=\"9\" font-family=\"monospace\">1e-" << k << "</text>\n";
    }

    os << "</svg>\n";
}

}  // namespace lab
