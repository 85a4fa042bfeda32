#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "circles/extensions.hpp"
#include "circles/synthgen.hpp"
#include "circles/trainer.hpp"

namespace circles {

// Fit output document: {k, circles, theta, alpha, logLikelihood, bic,
// converged, iterations} plus any provenance extras the caller merges in.
nlohmann::json fit_result_to_json(const FitResult& result);
FitResult fit_result_from_json(const nlohmann::json& doc);

// {"circles": [[id...], ...], "clampOut": [[id...], ...]?}
SeedSet seed_set_from_json(const nlohmann::json& doc);

// {"n":, "k":, "structure":, "separation":, "featureDim":, "seed":}
PlantedSpec planted_spec_from_json(const nlohmann::json& doc);

nlohmann::json load_json_file(const std::filesystem::path& path);

// Writes via a temp file + rename so readers never observe partial output.
void write_json_atomic(const std::filesystem::path& path, const nlohmann::json& doc);
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace circles
