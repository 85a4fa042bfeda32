#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "circles/profile.hpp"
#include "circles/types.hpp"

namespace circles {

// One parsed ego-network file family (<ego>.edges, <ego>.feat, and optional
// <ego>.circles / <ego>.egofeat / <ego>.featnames).
struct EgoDataset {
  EgoNetwork network;
  ProfileStore profiles;
  std::optional<CircleAssignment> groundTruth;
  std::vector<std::string> circleNames;
  std::string egoId;
};

// Loads <dir>/<egoId>.{edges,feat,...}. Nodes appearing only in the edge file
// are admitted with all-zero feature rows. Malformed content raises
// std::runtime_error with file and line number.
EgoDataset load_ego_network(const std::filesystem::path& dir, const std::string& egoId,
                            bool directed = false);

// Writes the file family back out; load_ego_network on the result reproduces
// the network, features, and circles exactly.
void write_ego_network(const std::filesystem::path& dir, const EgoDataset& data);

}  // namespace circles
