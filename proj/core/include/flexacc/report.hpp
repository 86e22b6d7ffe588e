#pragma once

#include <string>

#include "flexacc/optimizer.hpp"

namespace flexacc {

inline constexpr int kReportSchemaVersion = 1;

/// CSV with a version comment line and a header row; one row per layer, then
/// a TOTAL row and, when a baseline is given, a BASELINE row.
std::string format_report_csv(const std::string& network, Objective objective,
                              const NetworkResult& result, const BaselineResult* baseline);

std::string format_report_json(const std::string& network, Objective objective,
                               const NetworkResult& result, const BaselineResult* baseline);

/// Fixed-precision rendering so reports are byte-stable.
std::string format_double(double value);

}  // namespace flexacc
