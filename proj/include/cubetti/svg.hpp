#pragma once

#include <string>

#include "cubetti/betti.hpp"

namespace cubetti {

// SVG 1.1 chart: one median polyline and one translucent band polygon per
// class, x-axis in unscaled [0, 255] units, legend with class names.
std::string betti_svg_string(const BandCurves& curves);

void emit_betti_svg(const BandCurves& curves, const std::string& path);

}  // namespace cubetti
