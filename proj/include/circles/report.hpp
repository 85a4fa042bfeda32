#pragma once

#include <cmath>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace circles {

// Long-format result row for downstream plotting; stderrValue is NaN when a
// row carries a single observation.
struct ResultRow {
  std::string dataset;
  std::string scheme;
  std::string metric;
  double value = 0.0;
  double stderrValue = std::nan("");
};

std::pair<double, double> mean_and_stderr(std::span<const double> values);

// CSV with a header line; rejects empty input.
void write_plot_csv(std::ostream& out, const std::vector<ResultRow>& rows);
nlohmann::json plot_rows_to_json(const std::vector<ResultRow>& rows);

}  // namespace circles
