#include "circles/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "circles/owlqn.hpp"

namespace circles {

std::string TypeTable::key_of(const std::vector<std::uint8_t>& memberships,
                              const std::vector<std::uint8_t>& features) {
  std::string key;
  key.reserve(memberships.size() + features.size() + 1);
  for (auto b : memberships) key.push_back(b ? '1' : '0');
  key.push_back('|');
  for (auto b : features) key.push_back(b ? '1' : '0');
  return key;
}

void TypeTable::increment(const std::vector<std::uint8_t>& memberships,
                          const std::vector<std::uint8_t>& features) {
  auto key = key_of(memberships, features);
  auto it = entries_.find(key);
  if (it == entries_.end())
    entries_.emplace(std::move(key), Entry{memberships, features, 1});
  else
    ++it->second.count;
  ++total_;
}

void TypeTable::decrement(const std::vector<std::uint8_t>& memberships,
                          const std::vector<std::uint8_t>& features) {
  auto key = key_of(memberships, features);
  auto it = entries_.find(key);
  if (it == entries_.end() || it->second.count <= 0)
    throw std::runtime_error("type table underflow");
  if (--it->second.count == 0) entries_.erase(it);
  --total_;
}

std::vector<TypeTable::Entry> TypeTable::sorted_entries() const {
  std::vector<std::pair<std::string, Entry>> keyed;
  keyed.reserve(entries_.size());
  for (const auto& [key, entry] : entries_) keyed.emplace_back(key, entry);
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Entry> out;
  out.reserve(keyed.size());
  for (auto& [key, entry] : keyed) out.push_back(std::move(entry));
  return out;
}

bool TypeTable::operator==(const TypeTable& other) const {
  if (total_ != other.total_ || entries_.size() != other.entries_.size()) return false;
  for (const auto& [key, entry] : entries_) {
    auto it = other.entries_.find(key);
    if (it == other.entries_.end() || it->second.count != entry.count) return false;
  }
  return true;
}

TypeTable build_type_table(const Memberships& memberships,
                           const std::vector<std::vector<std::uint8_t>>& featureRows) {
  if (static_cast<int>(featureRows.size()) != memberships.node_count())
    throw std::runtime_error("feature row count mismatch");
  for (const auto& row : featureRows)
    for (auto b : row)
      if (b > 1) throw std::runtime_error("type collapsing needs binary features");
  TypeTable table;
  for (int i = 0; i < memberships.node_count(); ++i)
    table.increment(memberships.column(i), featureRows[static_cast<std::size_t>(i)]);
  return table;
}

McmcState::McmcState(const EgoNetwork& net, const EdgeFeatureCache& features,
                     const ModelParams& params, const Memberships& memberships)
    : net_(net), features_(features), params_(params), memb_(memberships) {
  rows_.reserve(static_cast<std::size_t>(net.node_count()));
  for (int i = 0; i < net.node_count(); ++i) {
    auto bits = features.profiles().bits(net.node_at(i));
    rows_.emplace_back(bits.begin(), bits.end());
  }
  types_ = build_type_table(memb_, rows_);
}

std::pair<double, double> McmcState::membership_marginals(int node, int k) const {
  const int K = params_.circle_count();
  const auto ku = static_cast<std::size_t>(k);
  const double alphaK = params_.alpha[ku];
  const double mult = net_.directed() ? 2.0 : 1.0;

  const auto ownCol = memb_.column(node);
  const auto& ownRow = rows_[static_cast<std::size_t>(node)];

  std::vector<double> phi(static_cast<std::size_t>(features_.dim()));
  std::vector<double> dots(static_cast<std::size_t>(K));

  // Phi with node's bit k forced off / on, against a peer with membership
  // column `col`. Only circle k's term depends on the forced bit.
  auto phis = [&](std::span<const std::uint8_t> col) {
    double phi0 = 0.0;
    for (int j = 0; j < K; ++j) {
      if (j == k) continue;
      const auto ju = static_cast<std::size_t>(j);
      const bool both = ownCol[ju] && col[ju];
      phi0 += (both ? 1.0 : -params_.alpha[ju]) * dots[ju];
    }
    phi0 -= alphaK * dots[ku];
    const double phi1 = phi0 + (col[ku] ? (1.0 + alphaK) * dots[ku] : 0.0);
    return std::pair{phi0, phi1};
  };

  double l0 = 0.0, l1 = 0.0;
  types_.for_each([&](const TypeTable::Entry& entry) {
    int n = entry.count;
    if (entry.memberships == ownCol && entry.features == ownRow) --n;  // no self-pair
    if (n == 0) return;
    features_.phi_from_bits(ownRow, entry.features, phi);
    for (int j = 0; j < K; ++j) dots[static_cast<std::size_t>(j)] = dot(phi, params_.theta[static_cast<std::size_t>(j)]);
    auto [phi0, phi1] = phis(entry.memberships);
    l0 += mult * n * edge_log_probs(phi0).nonEdge;
    l1 += mult * n * edge_log_probs(phi1).nonEdge;
  });

  auto correct = [&](int peer) {
    features_.phi_from_bits(ownRow, rows_[static_cast<std::size_t>(peer)], phi);
    for (int j = 0; j < K; ++j) dots[static_cast<std::size_t>(j)] = dot(phi, params_.theta[static_cast<std::size_t>(j)]);
    auto peerCol = memb_.column(peer);
    auto [phi0, phi1] = phis(peerCol);
    auto p0 = edge_log_probs(phi0);
    auto p1 = edge_log_probs(phi1);
    l0 += p0.edge - p0.nonEdge;
    l1 += p1.edge - p1.nonEdge;
  };
  for (int peer : net_.neighbors(node)) correct(peer);
  if (net_.directed())
    for (int peer : net_.in_neighbors(node)) correct(peer);

  return {l0, l1};
}

void McmcState::set_membership(int node, int k, bool member) {
  if (memb_.contains(k, node) == member) return;
  auto col = memb_.column(node);
  types_.decrement(col, rows_[static_cast<std::size_t>(node)]);
  memb_.set(k, node, member);
  col[static_cast<std::size_t>(k)] = member ? 1 : 0;
  types_.increment(col, rows_[static_cast<std::size_t>(node)]);
}

int McmcState::sweep(double temperature, Rng& rng) {
  if (temperature <= 0) throw std::runtime_error("temperature must be positive");
  const int n = net_.node_count();
  const int K = params_.circle_count();
  std::vector<std::pair<int, int>> order;
  order.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(K));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < K; ++k) order.emplace_back(i, k);
  rng.shuffle(order);

  int changes = 0;
  for (auto [node, k] : order) {
    auto [l0, l1] = membership_marginals(node, k);
    const double z = rng.uniform();
    const bool member = z < std::exp((l1 - l0) / temperature);
    if (memb_.contains(k, node) != member) {
      set_membership(node, k, member);
      ++changes;
    }
  }
  return changes;
}

double McmcState::collapsed_log_likelihood() const {
  Gradients scratch;
  return collapsed_ll_and_gradients(scratch);
}

double McmcState::collapsed_ll_and_gradients(Gradients& out) const {
  const int K = params_.circle_count();
  const int F1 = params_.dim();
  const double mult = net_.directed() ? 2.0 : 1.0;
  out.theta.assign(static_cast<std::size_t>(K), std::vector<double>(static_cast<std::size_t>(F1), 0.0));
  out.alpha.assign(static_cast<std::size_t>(K), 0.0);

  std::vector<double> phi(static_cast<std::size_t>(F1));
  std::vector<double> dots(static_cast<std::size_t>(K));
  double ll = 0.0;

  // All-pairs part, collapsed over type pairs as if the graph had no edges.
  auto entries = types_.sorted_entries();
  for (std::size_t a = 0; a < entries.size(); ++a) {
    for (std::size_t b = a; b < entries.size(); ++b) {
      const auto& ta = entries[a];
      const auto& tb = entries[b];
      double w = a == b ? 0.5 * ta.count * (ta.count - 1) : double(ta.count) * tb.count;
      if (w == 0) continue;
      w *= mult;
      features_.phi_from_bits(ta.features, tb.features, phi);
      double sum = 0.0;
      for (int j = 0; j < K; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        dots[ju] = dot(phi, params_.theta[ju]);
        const bool both = ta.memberships[ju] && tb.memberships[ju];
        sum += (both ? 1.0 : -params_.alpha[ju]) * dots[ju];
      }
      ll -= w * softplus(sum);
      const double sig = logistic(sum);
      for (int j = 0; j < K; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        const bool both = ta.memberships[ju] && tb.memberships[ju];
        const double dj = both ? 1.0 : -params_.alpha[ju];
        const double coef = -w * dj * sig;
        auto& gt = out.theta[ju];
        for (int f = 0; f < F1; ++f) gt[static_cast<std::size_t>(f)] += coef * phi[static_cast<std::size_t>(f)];
        if (!both) out.alpha[ju] += w * dots[ju] * sig;
      }
    }
  }

  // Exact correction along the edges that do exist.
  for (const auto& [x, y] : net_.edges()) {
    features_.phi_from_bits(rows_[static_cast<std::size_t>(x)], rows_[static_cast<std::size_t>(y)], phi);
    double sum = 0.0;
    for (int j = 0; j < K; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      dots[ju] = dot(phi, params_.theta[ju]);
      const bool both = memb_.contains(j, x) && memb_.contains(j, y);
      sum += (both ? 1.0 : -params_.alpha[ju]) * dots[ju];
    }
    ll += sum;
    for (int j = 0; j < K; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      const bool both = memb_.contains(j, x) && memb_.contains(j, y);
      const double dj = both ? 1.0 : -params_.alpha[ju];
      auto& gt = out.theta[ju];
      for (int f = 0; f < F1; ++f) gt[static_cast<std::size_t>(f)] += dj * phi[static_cast<std::size_t>(f)];
      if (!both) out.alpha[ju] -= dots[ju];
    }
  }
  return ll;
}

FitResult fit_mcmc(const EgoNetwork& net, const EdgeFeatureCache& features, const FitConfig& config,
                   const AnnealSchedule& schedule, int paramInterval) {
  if (config.autoK) throw std::runtime_error("the MCMC engine needs an explicit K");
  if (schedule.decay <= 0 || schedule.decay >= 1)
    throw std::runtime_error("anneal decay must lie in (0,1)");
  const int K = config.k;
  const int F1 = features.dim();

  Rng rng(config.seed);
  ModelParams params = ModelParams::random_init(K, F1, rng);
  McmcState state(net, features, params, Memberships(K, net.node_count()));

  auto objective = [&](McmcState& s) {
    return s.collapsed_log_likelihood() - regularizer(s.params(), config.lambda);
  };

  const std::size_t dim = static_cast<std::size_t>(K) * (F1 + 1);
  auto paramStep = [&]() {
    std::vector<double> x(dim);
    std::vector<double> l1(dim, 0.0);
    const auto& p = state.params();
    for (int k = 0; k < K; ++k) {
      for (int f = 0; f < F1; ++f) {
        x[static_cast<std::size_t>(k * F1 + f)] = p.theta[static_cast<std::size_t>(k)][static_cast<std::size_t>(f)];
        l1[static_cast<std::size_t>(k * F1 + f)] = config.lambda;
      }
      x[static_cast<std::size_t>(K) * F1 + static_cast<std::size_t>(k)] = p.alpha[static_cast<std::size_t>(k)];
    }
    McmcState scratch = state;
    Gradients g;
    auto eval = [&](std::span<const double> v, std::span<double> grad) {
      ModelParams trial = ModelParams::zeros(K, F1);
      for (int k = 0; k < K; ++k) {
        for (int f = 0; f < F1; ++f)
          trial.theta[static_cast<std::size_t>(k)][static_cast<std::size_t>(f)] = v[static_cast<std::size_t>(k * F1 + f)];
        trial.alpha[static_cast<std::size_t>(k)] = v[static_cast<std::size_t>(K) * F1 + static_cast<std::size_t>(k)];
      }
      scratch.set_params(std::move(trial));
      double ll = scratch.collapsed_ll_and_gradients(g);
      for (int k = 0; k < K; ++k) {
        for (int f = 0; f < F1; ++f)
          grad[static_cast<std::size_t>(k * F1 + f)] = -g.theta[static_cast<std::size_t>(k)][static_cast<std::size_t>(f)];
        grad[static_cast<std::size_t>(K) * F1 + static_cast<std::size_t>(k)] = -g.alpha[static_cast<std::size_t>(k)];
      }
      return -ll;
    };
    double before = objective(state);
    OwlqnResult res = owlqn_minimize(std::move(x), l1, eval, config.inner);
    if (-res.objective >= before) {
      ModelParams fitted = ModelParams::zeros(K, F1);
      for (int k = 0; k < K; ++k) {
        for (int f = 0; f < F1; ++f)
          fitted.theta[static_cast<std::size_t>(k)][static_cast<std::size_t>(f)] = res.x[static_cast<std::size_t>(k * F1 + f)];
        fitted.alpha[static_cast<std::size_t>(k)] = res.x[static_cast<std::size_t>(K) * F1 + static_cast<std::size_t>(k)];
      }
      state.set_params(std::move(fitted));
    }
  };

  double bestObj = objective(state);
  ModelParams bestParams = state.params();
  Memberships bestMemb = state.memberships();

  double temperature = schedule.t0;
  int lastChanges = -1;
  for (int s = 1; s <= schedule.sweeps; ++s) {
    lastChanges = state.sweep(temperature, rng);
    if (paramInterval > 0 && (s % paramInterval == 0 || s == schedule.sweeps)) paramStep();
    double obj = objective(state);
    if (obj > bestObj) {
      bestObj = obj;
      bestParams = state.params();
      bestMemb = state.memberships();
    }
    temperature *= schedule.decay;
  }

  FitResult result;
  McmcState bestState(net, features, bestParams, bestMemb);
  result.logLikelihood = bestState.collapsed_log_likelihood();
  result.params = std::move(bestParams);
  result.circles = bestMemb.to_circles(net);
  result.iterations = schedule.sweeps;
  result.converged = lastChanges == 0;
  result.bic = net.edge_count() >= 1
                   ? bic_score(result.logLikelihood, K * (F1 + 1), net.edge_count())
                   : std::numeric_limits<double>::quiet_NaN();
  return result;
}

}  // namespace circles
