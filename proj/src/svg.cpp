#include "cubetti/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cubetti {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kMarginLeft = 64, kMarginRight = 24, kMarginTop = 28, kMarginBottom = 48;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string fmt(double v) {
  std::ostringstream ss;
  ss << (std::abs(v) < 1e-9 ? 0.0 : v);
  return ss.str();
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// A tick step of the form {1,2,5}*10^k giving 4..8 ticks.
double nice_step(double span) {
  if (span <= 0) return 1;
  double raw = span / 5.0;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * mult >= raw) return mag * mult;
  }
  return mag * 10.0;
}

}  // namespace

std::string betti_svg_string(const BandCurves& curves) {
  const std::size_t n_classes = curves.class_names.size();
  if (n_classes == 0) throw std::invalid_argument("betti_svg_string: no classes to plot");
  const std::size_t n = curves.thresholds.size();
  if (n < 2) throw std::invalid_argument("betti_svg_string: need at least two thresholds");

  double y_max = 1.0;
  for (const auto& curve : curves.upper)
    for (double v : curve) y_max = std::max(y_max, v);
  y_max *= 1.05;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto sx = [&](double t_scaled) { return kMarginLeft + plot_w * (t_scaled / double(kMaxScaledValue)); };
  auto sy = [&](double v) { return kMarginTop + plot_h * (1.0 - v / y_max); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  svg << "  <rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";

  // Axes.
  svg << "  <g stroke=\"#333\" stroke-width=\"1\">\n";
  svg << "    <line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
      << kMarginLeft + plot_w << "\" y2=\"" << kMarginTop + plot_h << "\"/>\n";
  svg << "    <line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\"" << kMarginLeft
      << "\" y2=\"" << kMarginTop + plot_h << "\"/>\n";
  svg << "  </g>\n";

  // X ticks in unscaled [0, 255] units.
  svg << "  <g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\" text-anchor=\"middle\">\n";
  for (int t = 0; t <= 255; t += 50) {
    double x = sx(t * double(kScale));
    svg << "    <line x1=\"" << fmt(x) << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\"" << fmt(x)
        << "\" y2=\"" << kMarginTop + plot_h + 4 << "\" stroke=\"#333\"/>\n";
    svg << "    <text x=\"" << fmt(x) << "\" y=\"" << kMarginTop + plot_h + 17 << "\">" << t
        << "</text>\n";
  }
  svg << "    <text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 10
      << "\">threshold</text>\n";
  svg << "  </g>\n";

  // Y ticks.
  svg << "  <g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\" text-anchor=\"end\">\n";
  double step = nice_step(y_max);
  for (double v = 0; v <= y_max + 1e-9; v += step) {
    double y = sy(v);
    svg << "    <line x1=\"" << kMarginLeft - 4 << "\" y1=\"" << fmt(y) << "\" x2=\"" << kMarginLeft
        << "\" y2=\"" << fmt(y) << "\" stroke=\"#333\"/>\n";
    svg << "    <text x=\"" << kMarginLeft - 7 << "\" y=\"" << fmt(y + 4) << "\">" << fmt(v)
        << "</text>\n";
  }
  svg << "  </g>\n";
  svg << "  <text x=\"" << kMarginLeft << "\" y=\"" << kMarginTop - 10
      << "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#111\">beta" << curves.dim << " ("
      << channel_name(curves.channel) << ")</text>\n";

  // Bands first so medians stay visible on top.
  for (std::size_t c = 0; c < n_classes; ++c) {
    const char* color = kPalette[c % kPaletteSize];
    svg << "  <polygon class=\"band\" fill=\"" << color << "\" fill-opacity=\"0.22\" stroke=\"none\" points=\"";
    for (std::size_t k = 0; k < n; ++k)
      svg << fmt(sx(curves.thresholds[k])) << ',' << fmt(sy(curves.upper[c][k])) << ' ';
    for (std::size_t k = n; k-- > 0;)
      svg << fmt(sx(curves.thresholds[k])) << ',' << fmt(sy(curves.lower[c][k])) << (k ? " " : "");
    svg << "\"/>\n";
  }
  for (std::size_t c = 0; c < n_classes; ++c) {
    const char* color = kPalette[c % kPaletteSize];
    svg << "  <polyline class=\"median\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t k = 0; k < n; ++k)
      svg << fmt(sx(curves.thresholds[k])) << ',' << fmt(sy(curves.median[c][k]))
          << (k + 1 < n ? " " : "");
    svg << "\"/>\n";
  }

  // Legend.
  svg << "  <g font-family=\"sans-serif\" font-size=\"12\" fill=\"#111\">\n";
  for (std::size_t c = 0; c < n_classes; ++c) {
    const char* color = kPalette[c % kPaletteSize];
    double y = kMarginTop + 8 + 18 * double(c);
    double x = kMarginLeft + plot_w - 150;
    svg << "    <g class=\"legend-entry\">"
        << "<rect x=\"" << x << "\" y=\"" << fmt(y - 9) << "\" width=\"14\" height=\"10\" fill=\""
        << color << "\"/>"
        << "<text x=\"" << x + 20 << "\" y=\"" << fmt(y) << "\">" << xml_escape(curves.class_names[c])
        << "</text></g>\n";
  }
  svg << "  </g>\n";
  svg << "</svg>\n";
  return svg.str();
}

void emit_betti_svg(const BandCurves& curves, const std::string& path) {
  std::string body = betti_svg_string(curves);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << body;
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace cubetti
