#include "circles/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace circles {

namespace {

[[noreturn]] void parse_error(const std::filesystem::path& file, int line, const std::string& what) {
  throw std::runtime_error(file.string() + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> read_lines(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t") == std::string::npos;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream iss(s);
  std::vector<std::string> tokens;
  std::string tok;
  while (iss >> tok) tokens.push_back(tok);
  return tokens;
}

NodeId parse_id(const std::string& tok, const std::filesystem::path& file, int line) {
  try {
    std::size_t used = 0;
    NodeId id = std::stoll(tok, &used);
    if (used != tok.size()) parse_error(file, line, "bad node id '" + tok + "'");
    return id;
  } catch (const std::invalid_argument&) {
    parse_error(file, line, "bad node id '" + tok + "'");
  } catch (const std::out_of_range&) {
    parse_error(file, line, "node id out of range '" + tok + "'");
  }
}

std::uint8_t parse_bit(const std::string& tok, const std::filesystem::path& file, int line) {
  if (tok == "0") return 0;
  if (tok == "1") return 1;
  parse_error(file, line, "feature value must be 0 or 1, got '" + tok + "'");
}

// "index seg;seg;...;value"; the path is everything after the first blank so
// segments may themselves contain spaces (as in the public SNAP files).
FeaturePath parse_feat_name(const std::string& s, const std::filesystem::path& file, int line,
                            int expectedIndex) {
  std::size_t sp = s.find_first_of(" \t");
  if (sp == std::string::npos) parse_error(file, line, "expected 'index path' entry");
  NodeId idx = parse_id(s.substr(0, sp), file, line);
  if (idx != expectedIndex) parse_error(file, line, "feature indices must ascend from 0");
  std::string rest = s.substr(sp + 1);
  while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) rest.erase(rest.begin());
  if (rest.empty()) parse_error(file, line, "empty feature path");
  FeaturePath path;
  std::size_t start = 0;
  while (true) {
    std::size_t semi = rest.find(';', start);
    path.segments.push_back(rest.substr(start, semi == std::string::npos ? semi : semi - start));
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  for (const auto& seg : path.segments)
    if (seg.empty()) parse_error(file, line, "empty path segment in '" + rest + "'");
  if (path.segments.size() == 1) {
    // Single-segment vocabularies (e.g. raw hashtags/mentions) get a synthetic
    // parent so every leaf has a category.
    const std::string& leaf = path.segments.front();
    std::string parent = leaf.starts_with("#") ? "hashtags"
                         : leaf.starts_with("@") ? "mentions"
                                                 : "misc";
    path.segments = {parent, leaf};
  }
  return path;
}

}  // namespace

EgoDataset load_ego_network(const std::filesystem::path& dir, const std::string& egoId,
                            bool directed) {
  const auto edgesFile = dir / (egoId + ".edges");
  const auto featFile = dir / (egoId + ".feat");
  const auto egoFeatFile = dir / (egoId + ".egofeat");
  const auto featNamesFile = dir / (egoId + ".featnames");
  const auto circlesFile = dir / (egoId + ".circles");

  // Feature rows first; they fix the vocabulary size L.
  std::vector<std::pair<NodeId, std::vector<std::uint8_t>>> rows;
  int L = -1;
  {
    auto lines = read_lines(featFile);
    for (int ln = 0; ln < static_cast<int>(lines.size()); ++ln) {
      if (blank(lines[static_cast<std::size_t>(ln)])) continue;
      auto toks = split_ws(lines[static_cast<std::size_t>(ln)]);
      if (toks.size() < 2) parse_error(featFile, ln + 1, "expected 'nodeId b1 ... bL'");
      NodeId id = parse_id(toks[0], featFile, ln + 1);
      std::vector<std::uint8_t> bits;
      bits.reserve(toks.size() - 1);
      for (std::size_t i = 1; i < toks.size(); ++i)
        bits.push_back(parse_bit(toks[i], featFile, ln + 1));
      if (L < 0) L = static_cast<int>(bits.size());
      if (static_cast<int>(bits.size()) != L)
        parse_error(featFile, ln + 1, "feature vector length mismatch");
      rows.emplace_back(id, std::move(bits));
    }
  }
  if (L < 0) throw std::runtime_error(featFile.string() + ": no feature rows");

  std::vector<FeaturePath> featNames;
  if (std::filesystem::exists(featNamesFile)) {
    auto lines = read_lines(featNamesFile);
    int idx = 0;
    for (int ln = 0; ln < static_cast<int>(lines.size()); ++ln) {
      if (blank(lines[static_cast<std::size_t>(ln)])) continue;
      featNames.push_back(parse_feat_name(lines[static_cast<std::size_t>(ln)], featNamesFile, ln + 1, idx));
      ++idx;
    }
    if (static_cast<int>(featNames.size()) != L)
      throw std::runtime_error(featNamesFile.string() + ": " + std::to_string(featNames.size()) +
                               " names for " + std::to_string(L) + " feature columns");
  } else {
    for (int l = 0; l < L; ++l)
      featNames.push_back(FeaturePath{{"feature" + std::to_string(l), "present"}});
  }

  std::vector<std::uint8_t> egoBits;
  if (std::filesystem::exists(egoFeatFile)) {
    auto lines = read_lines(egoFeatFile);
    for (int ln = 0; ln < static_cast<int>(lines.size()); ++ln) {
      if (blank(lines[static_cast<std::size_t>(ln)])) continue;
      if (!egoBits.empty()) parse_error(egoFeatFile, ln + 1, "expected a single line");
      for (const auto& tok : split_ws(lines[static_cast<std::size_t>(ln)]))
        egoBits.push_back(parse_bit(tok, egoFeatFile, ln + 1));
      if (static_cast<int>(egoBits.size()) != L)
        parse_error(egoFeatFile, ln + 1, "ego feature vector length mismatch");
    }
  }

  std::vector<std::pair<NodeId, NodeId>> edges;
  std::set<NodeId> nodeSet;
  for (const auto& [id, bits] : rows) nodeSet.insert(id);
  {
    auto lines = read_lines(edgesFile);
    for (int ln = 0; ln < static_cast<int>(lines.size()); ++ln) {
      if (blank(lines[static_cast<std::size_t>(ln)])) continue;
      auto toks = split_ws(lines[static_cast<std::size_t>(ln)]);
      if (toks.size() != 2) parse_error(edgesFile, ln + 1, "expected 'srcId dstId'");
      NodeId a = parse_id(toks[0], edgesFile, ln + 1);
      NodeId b = parse_id(toks[1], edgesFile, ln + 1);
      if (a == b) parse_error(edgesFile, ln + 1, "self-loop on node " + std::to_string(a));
      edges.emplace_back(a, b);
      nodeSet.insert(a);
      nodeSet.insert(b);
    }
  }

  std::vector<NodeId> nodes(nodeSet.begin(), nodeSet.end());
  EgoNetwork network(nodes, edges, directed);

  ProfileStore profiles(std::move(featNames), std::move(egoBits));
  std::set<NodeId> withRow;
  for (auto& [id, bits] : rows) {
    if (!withRow.insert(id).second)
      throw std::runtime_error(featFile.string() + ": duplicate feature row for node " +
                               std::to_string(id));
    profiles.add_node(id, std::move(bits));
  }
  for (NodeId id : nodes)
    if (!withRow.count(id)) profiles.add_node(id, std::vector<std::uint8_t>(static_cast<std::size_t>(L), 0));

  std::optional<CircleAssignment> truth;
  std::vector<std::string> names;
  if (std::filesystem::exists(circlesFile)) {
    CircleAssignment circlesOut;
    auto lines = read_lines(circlesFile);
    for (int ln = 0; ln < static_cast<int>(lines.size()); ++ln) {
      const auto& line = lines[static_cast<std::size_t>(ln)];
      if (blank(line)) continue;
      std::vector<std::string> toks;
      std::size_t start = 0;
      while (start <= line.size()) {
        std::size_t tab = line.find('\t', start);
        std::string tok = line.substr(start, tab == std::string::npos ? tab : tab - start);
        if (!tok.empty()) toks.push_back(tok);
        if (tab == std::string::npos) break;
        start = tab + 1;
      }
      if (toks.empty()) continue;
      names.push_back(toks[0]);
      std::vector<NodeId> members;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        NodeId id = parse_id(toks[i], circlesFile, ln + 1);
        if (!network.has_node(id))
          parse_error(circlesFile, ln + 1, "unknown node id " + std::to_string(id));
        members.push_back(id);
      }
      circlesOut.circles.push_back(std::move(members));
    }
    circlesOut.normalize();
    truth = std::move(circlesOut);
  }

  return EgoDataset{std::move(network), std::move(profiles), std::move(truth), std::move(names),
                    egoId};
}

void write_ego_network(const std::filesystem::path& dir, const EgoDataset& data) {
  std::filesystem::create_directories(dir);
  const auto& net = data.network;
  {
    std::ofstream out(dir / (data.egoId + ".edges"));
    for (const auto& [x, y] : net.edges())
      out << net.node_at(x) << ' ' << net.node_at(y) << '\n';
  }
  {
    std::ofstream out(dir / (data.egoId + ".feat"));
    for (NodeId id : net.nodes()) {
      out << id;
      for (auto b : data.profiles.bits(id)) out << ' ' << int(b);
      out << '\n';
    }
  }
  {
    std::ofstream out(dir / (data.egoId + ".featnames"));
    const auto& names = data.profiles.feat_names();
    for (std::size_t l = 0; l < names.size(); ++l) {
      out << l << ' ';
      for (std::size_t s = 0; s < names[l].segments.size(); ++s) {
        if (s) out << ';';
        out << names[l].segments[s];
      }
      out << '\n';
    }
  }
  {
    std::ofstream out(dir / (data.egoId + ".egofeat"));
    auto ego = data.profiles.ego_bits();
    for (std::size_t l = 0; l < ego.size(); ++l) out << (l ? " " : "") << int(ego[l]);
    out << '\n';
  }
  if (data.groundTruth) {
    std::ofstream out(dir / (data.egoId + ".circles"));
    const auto& circles = data.groundTruth->circles;
    for (std::size_t k = 0; k < circles.size(); ++k) {
      out << (k < data.circleNames.size() ? data.circleNames[k] : "circle" + std::to_string(k));
      for (NodeId id : circles[k]) out << '\t' << id;
      out << '\n';
    }
  }
}

}  // namespace circles
