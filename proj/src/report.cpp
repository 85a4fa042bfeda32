#include "circles/report.hpp"

#include <cmath>
#include <stdexcept>

namespace circles {

std::pair<double, double> mean_and_stderr(std::span<const double> values) {
  if (values.empty()) throw std::runtime_error("no values to aggregate");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  if (values.size() < 2) return {mean, std::nan("")};
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(values.size()))};
}

void write_plot_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw std::runtime_error("no result rows to emit");
  out << "dataset,scheme,metric,value,stderr\n";
  for (const auto& row : rows) {
    out << row.dataset << ',' << row.scheme << ',' << row.metric << ',' << row.value << ',';
    if (std::isfinite(row.stderrValue)) out << row.stderrValue;
    out << '\n';
  }
}

nlohmann::json plot_rows_to_json(const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw std::runtime_error("no result rows to emit");
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json r;
    r["dataset"] = row.dataset;
    r["scheme"] = row.scheme;
    r["metric"] = row.metric;
    r["value"] = row.value;
    r["stderr"] = std::isfinite(row.stderrValue) ? nlohmann::json(row.stderrValue) : nlohmann::json(nullptr);
    arr.push_back(std::move(r));
  }
  return arr;
}

}  // namespace circles
