#pragma once

#include <string>

#include "lab/simulator.hpp"

namespace lab {

/// SVG 1.1 snapshot: patch contour, the barrier outline alpha * Omega_eps
/// (when it is representable), the proxy-window circle and a logarithmic
/// distance ruler along the bottom edge.
void write_svg_snapshot(const std::string& path, const SimState& state,
                        const BarrierState& barrier, double window);

}  // namespace lab
