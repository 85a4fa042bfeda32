#include "circles/json_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace circles {

using nlohmann::json;

json fit_result_to_json(const FitResult& result) {
  json doc;
  doc["k"] = result.circles.circle_count();
  doc["circles"] = result.circles.circles;
  doc["theta"] = result.params.theta;
  doc["alpha"] = result.params.alpha;
  doc["logLikelihood"] = result.logLikelihood;
  doc["bic"] = std::isfinite(result.bic) ? json(result.bic) : json(nullptr);
  doc["converged"] = result.converged;
  doc["iterations"] = result.iterations;
  return doc;
}

FitResult fit_result_from_json(const json& doc) {
  FitResult result;
  result.circles.circles = doc.at("circles").get<std::vector<std::vector<NodeId>>>();
  result.params.theta = doc.at("theta").get<std::vector<std::vector<double>>>();
  result.params.alpha = doc.at("alpha").get<std::vector<double>>();
  result.logLikelihood = doc.at("logLikelihood").get<double>();
  result.bic = doc.at("bic").is_null() ? std::nan("") : doc.at("bic").get<double>();
  result.converged = doc.at("converged").get<bool>();
  result.iterations = doc.at("iterations").get<int>();
  const auto k = static_cast<std::size_t>(doc.at("k").get<int>());
  if (result.circles.circles.size() != k || result.params.theta.size() != k ||
      result.params.alpha.size() != k)
    throw std::runtime_error("inconsistent fit JSON: k does not match array sizes");
  return result;
}

SeedSet seed_set_from_json(const json& doc) {
  SeedSet seeds;
  seeds.seeds = doc.at("circles").get<std::vector<std::vector<NodeId>>>();
  if (doc.contains("clampOut"))
    seeds.clampOut = doc.at("clampOut").get<std::vector<std::vector<NodeId>>>();
  return seeds;
}

PlantedSpec planted_spec_from_json(const json& doc) {
  PlantedSpec spec;
  if (doc.contains("n")) spec.n = doc.at("n").get<int>();
  if (doc.contains("k")) spec.k = doc.at("k").get<int>();
  if (doc.contains("structure")) spec.structure = parse_structure(doc.at("structure").get<std::string>());
  if (doc.contains("separation")) spec.separation = doc.at("separation").get<double>();
  if (doc.contains("featureDim")) spec.featureDim = doc.at("featureDim").get<int>();
  if (doc.contains("seed")) spec.seed = doc.at("seed").get<std::uint64_t>();
  return spec;
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  return doc;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

void write_json_atomic(const std::filesystem::path& path, const json& doc) {
  write_text_atomic(path, doc.dump(2) + "\n");
}

}  // namespace circles
