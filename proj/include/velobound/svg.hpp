#pragma once

#include <string>

#include "velobound/report.hpp"

namespace velobound {

// Log-x line plot of the integrand and cumulative columns of an experiment
// CSV.  Pure function of the parsed input: identical CSVs give identical
// bytes.  The polylines live in a y-up coordinate group, so the raw points
// attribute preserves monotonicity of the plotted column.  Empty reports
// render axes only.  Throws std::runtime_error when the required columns are
// missing (schema mismatch).
std::string render_experiment_svg(const CsvFile& csv);

}  // namespace velobound
