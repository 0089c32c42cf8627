#pragma once

#include <string>

#include "rlink/projection.hpp"

namespace rlink {

/// Renders the plane projection of a diagram as a standalone SVG document:
/// the image curve as a sampled polyline, each crossing drawn with a break in
/// the under-strand, a tick mark at each real flex, and a filled dot at each
/// solitary double point.  Output is deterministic for a given diagram.
std::string render_diagram_svg(const Diagram& diagram, int theta_samples = 1024);

}  // namespace rlink
