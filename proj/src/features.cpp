#include "circles/features.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace circles {

FeatureScheme parse_feature_scheme(const std::string& name) {
  if (name == "phi1") return FeatureScheme::phi1;
  if (name == "phi2") return FeatureScheme::phi2;
  if (name == "psi1") return FeatureScheme::psi1;
  if (name == "psi2") return FeatureScheme::psi2;
  throw std::invalid_argument("unknown feature scheme '" + name + "'");
}

const char* to_string(FeatureScheme scheme) {
  switch (scheme) {
    case FeatureScheme::phi1: return "phi1";
    case FeatureScheme::phi2: return "phi2";
    case FeatureScheme::psi1: return "psi1";
    case FeatureScheme::psi2: return "psi2";
  }
  return "?";
}

int feature_dimension(FeatureScheme scheme, const ProfileStore& profiles) {
  switch (scheme) {
    case FeatureScheme::phi1:
    case FeatureScheme::phi2: return profiles.leaf_count() + 1;
    case FeatureScheme::psi1:
    case FeatureScheme::psi2: return profiles.category_count() + 1;
  }
  return 0;
}

std::vector<std::uint8_t> diff_vector(const ProfileStore& profiles, NodeId x, NodeId y) {
  auto bx = profiles.bits(x);
  auto by = profiles.bits(y);
  std::vector<std::uint8_t> sigma(bx.size());
  for (std::size_t l = 0; l < bx.size(); ++l) sigma[l] = bx[l] ^ by[l];
  return sigma;
}

std::vector<int> compressed_diff(const ProfileStore& profiles, NodeId x, NodeId y) {
  auto sigma = diff_vector(profiles, x, y);
  std::vector<int> out(static_cast<std::size_t>(profiles.category_count()), 0);
  for (std::size_t l = 0; l < sigma.size(); ++l)
    out[static_cast<std::size_t>(profiles.category_of(static_cast<int>(l)))] += sigma[l];
  return out;
}

namespace {

// Shared kernel for pair_features and the cache paths.
void compute_phi(FeatureScheme scheme, const ProfileStore& profiles,
                 std::span<const std::uint8_t> bx, std::span<const std::uint8_t> by,
                 std::span<const std::uint8_t> ego, std::span<double> out) {
  const std::size_t L = bx.size();
  out[0] = 1.0;
  switch (scheme) {
    case FeatureScheme::phi1:
      for (std::size_t l = 0; l < L; ++l) out[l + 1] = -double(bx[l] ^ by[l]);
      break;
    case FeatureScheme::phi2:
      for (std::size_t l = 0; l < L; ++l)
        out[l + 1] = -std::abs(double(bx[l] ^ ego[l]) - double(by[l] ^ ego[l]));
      break;
    case FeatureScheme::psi1: {
      for (std::size_t p = 1; p < out.size(); ++p) out[p] = 0.0;
      for (std::size_t l = 0; l < L; ++l)
        out[static_cast<std::size_t>(profiles.category_of(static_cast<int>(l))) + 1] -=
            double(bx[l] ^ by[l]);
      break;
    }
    case FeatureScheme::psi2: {
      const std::size_t P = out.size() - 1;
      std::vector<int> cx(P, 0), cy(P, 0);
      for (std::size_t l = 0; l < L; ++l) {
        auto p = static_cast<std::size_t>(profiles.category_of(static_cast<int>(l)));
        cx[p] += bx[l] ^ ego[l];
        cy[p] += by[l] ^ ego[l];
      }
      for (std::size_t p = 0; p < P; ++p) out[p + 1] = -std::abs(double(cx[p] - cy[p]));
      break;
    }
  }
}

}  // namespace

std::vector<double> pair_features(FeatureScheme scheme, const ProfileStore& profiles, NodeId x,
                                  NodeId y) {
  std::vector<double> out(static_cast<std::size_t>(feature_dimension(scheme, profiles)));
  compute_phi(scheme, profiles, profiles.bits(x), profiles.bits(y), profiles.ego_bits(), out);
  return out;
}

EdgeFeatureCache::EdgeFeatureCache(const EgoNetwork& net, const ProfileStore& profiles,
                                   FeatureScheme scheme, CacheMode mode)
    : net_(net),
      profiles_(profiles),
      scheme_(scheme),
      dim_(feature_dimension(scheme, profiles)) {
  const int n = net.node_count();
  rows_.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto bits = profiles.bits(net.node_at(i));
    rows_.emplace_back(bits.begin(), bits.end());
  }
  egoBits_.assign(profiles.ego_bits().begin(), profiles.ego_bits().end());

  // Dense pair tables cost n(n-1)/2 * (F+1) doubles; only worth it for the
  // network sizes the coordinate-ascent path handles anyway.
  dense_ = mode == CacheMode::dense || (mode == CacheMode::automatic && n <= 400);
  if (dense_ && n >= 2) {
    std::size_t pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
    table_.resize(pairs * static_cast<std::size_t>(dim_));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        std::span<double> slot{table_.data() + pair_slot(i, j) * dim_, static_cast<std::size_t>(dim_)};
        compute_phi(scheme_, profiles_, rows_[static_cast<std::size_t>(i)], rows_[static_cast<std::size_t>(j)], egoBits_, slot);
      }
  }
}

std::size_t EdgeFeatureCache::pair_slot(int i, int j) const {
  if (i > j) std::swap(i, j);
  const std::size_t n = static_cast<std::size_t>(net_.node_count());
  auto ui = static_cast<std::size_t>(i);
  auto uj = static_cast<std::size_t>(j);
  return ui * n - ui * (ui + 1) / 2 + (uj - ui - 1);
}

std::span<const double> EdgeFeatureCache::phi(int i, int j, std::vector<double>& scratch) const {
  if (dense_)
    return {table_.data() + pair_slot(i, j) * dim_, static_cast<std::size_t>(dim_)};
  scratch.resize(static_cast<std::size_t>(dim_));
  compute_phi(scheme_, profiles_, rows_[static_cast<std::size_t>(i)], rows_[static_cast<std::size_t>(j)], egoBits_, scratch);
  return scratch;
}

void EdgeFeatureCache::phi_from_bits(std::span<const std::uint8_t> bitsX,
                                     std::span<const std::uint8_t> bitsY,
                                     std::span<double> out) const {
  compute_phi(scheme_, profiles_, bitsX, bitsY, egoBits_, out);
}

}  // namespace circles
