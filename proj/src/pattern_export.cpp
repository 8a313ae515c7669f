#include "socialpec/pattern_export.hpp"

#include <fstream>
#include <iomanip>

namespace socialpec {

void export_patterns_csv(std::ostream& out, const PecEncoder& encoder) {
  const std::size_t n = encoder.cfg.num_patterns;
  const std::size_t len = encoder.cfg.pattern_len;
  out << std::setprecision(17);
  for (std::size_t j = 0; j < n; ++j) {
    out << j << ',' << encoder.lambda.value[j] << ',' << encoder.bias.value[j];
    for (std::size_t k = 0; k < len; ++k) {
      out << ',' << encoder.patterns.value.at(j, k, 0) << ','
          << encoder.patterns.value.at(j, k, 1);
    }
    out << '\n';
  }
}

namespace {

constexpr double kCanvas = 600.0;

double to_px(double v, double axis_range) {
  return (v + axis_range) / (2.0 * axis_range) * kCanvas;
}

// SVG y grows downward; scene y grows upward.
double to_py(double v, double axis_range) { return kCanvas - to_px(v, axis_range); }

}  // namespace

void export_patterns_svg(std::ostream& out, const PecEncoder& encoder, double axis_range) {
  if (!(axis_range > 0.0)) {
    throw ConfigError("pattern export: axis range must be positive");
  }
  const std::size_t n = encoder.cfg.num_patterns;
  const std::size_t len = encoder.cfg.pattern_len;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas << "\" height=\""
      << kCanvas << "\" viewBox=\"0 0 " << kCanvas << ' ' << kCanvas << "\">\n";
  out << "  <defs>\n"
      << "    <marker id=\"tip\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" refY=\"3\" "
         "orient=\"auto\">\n"
      << "      <path d=\"M0,0 L6,3 L0,6 z\" fill=\"#d97706\"/>\n"
      << "    </marker>\n"
      << "  </defs>\n";
  out << "  <rect width=\"" << kCanvas << "\" height=\"" << kCanvas
      << "\" fill=\"white\" stroke=\"#888\"/>\n";
  // axes through the origin
  out << "  <line x1=\"0\" y1=\"" << kCanvas / 2 << "\" x2=\"" << kCanvas << "\" y2=\""
      << kCanvas / 2 << "\" stroke=\"#ddd\"/>\n";
  out << "  <line x1=\"" << kCanvas / 2 << "\" y1=\"0\" x2=\"" << kCanvas / 2 << "\" y2=\""
      << kCanvas << "\" stroke=\"#ddd\"/>\n";
  out << std::setprecision(8);
  for (std::size_t j = 0; j < n; ++j) {
    const double x1 = encoder.patterns.value.at(j, 0, 0);
    const double y1 = encoder.patterns.value.at(j, 0, 1);
    const double x2 = encoder.patterns.value.at(j, len - 1, 0);
    const double y2 = encoder.patterns.value.at(j, len - 1, 1);
    out << "  <line x1=\"" << to_px(x1, axis_range) << "\" y1=\"" << to_py(y1, axis_range)
        << "\" x2=\"" << to_px(x2, axis_range) << "\" y2=\"" << to_py(y2, axis_range)
        << "\" stroke=\"#d97706\" stroke-width=\"1.5\" marker-end=\"url(#tip)\"/>\n";
  }
  // target pedestrian at the origin, facing +x
  out << "  <path d=\"M" << kCanvas / 2 + 8 << ',' << kCanvas / 2 << " L" << kCanvas / 2 - 6
      << ',' << kCanvas / 2 - 5 << " L" << kCanvas / 2 - 6 << ',' << kCanvas / 2 + 5
      << " z\" fill=\"#2563eb\"/>\n";
  out << "</svg>\n";
}

void export_patterns(const std::string& path, const LocationPredictorModel& model,
                     const std::string& which, const std::string& format, double axis_range) {
  const PecEncoder* encoder = nullptr;
  if (which == "context") {
    encoder = &model.context;
  } else if (which == "target") {
    encoder = &model.target;
  } else {
    throw ConfigError("pattern export: unknown encoder \"" + which +
                      "\" (expected context or target)");
  }
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("pattern export: cannot write " + path);
  }
  if (format == "csv") {
    export_patterns_csv(out, *encoder);
  } else if (format == "svg") {
    export_patterns_svg(out, *encoder, axis_range);
  } else {
    throw ConfigError("pattern export: unknown format \"" + format + "\" (expected csv or svg)");
  }
}

}  // namespace socialpec
