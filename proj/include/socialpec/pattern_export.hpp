#pragma once

#include <ostream>
#include <string>

#include "socialpec/model.hpp"

namespace socialpec {

// One row per pattern: index, lambda, bias, then the L (x, y) states.
void export_patterns_csv(std::ostream& out, const PecEncoder& encoder);

// Each pattern drawn as an arrow from its first to its last state in the
// egocentric plane, with the target pedestrian marked at the origin. The
// plot covers [-axis_range, axis_range] in both axes.
void export_patterns_svg(std::ostream& out, const PecEncoder& encoder, double axis_range = 6.0);

// which is "context" or "target"; format is "csv" or "svg".
void export_patterns(const std::string& path, const LocationPredictorModel& model,
                     const std::string& which, const std::string& format,
                     double axis_range = 6.0);

}  // namespace socialpec
