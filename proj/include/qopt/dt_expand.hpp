// Copyright 2026 The qopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QOPT_DT_EXPAND_HPP_INCLUDED
#define QOPT_DT_EXPAND_HPP_INCLUDED

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qopt/bits.hpp"
#include "qopt/error.hpp"
#include "qopt/ilp_model.hpp"
#include "qopt/parallel.hpp"
#include "qopt/qubo_ising.hpp"
#include "qopt/samplers.hpp"

namespace qopt {

// Input features, in tie-break order.
enum class Feature : std::size_t { Energy = 0, Feasible = 1 };

struct TreeHyperparams {
  // Unlimited when empty.
  std::optional<std::size_t> max_depth;
  std::size_t min_samples_leaf = 1;
  // A node is split only while its summed per-component variance exceeds this.
  double min_variance_split = 0.0;
};

struct TrainingSample {
  double energy = 0.0;
  bool feasible = false;
  Bits target;
};

struct TreeNode {
  bool leaf = true;
  Feature feature = Feature::Energy;
  double threshold = 0.0;
  std::size_t left = 0;
  std::size_t right = 0;
  std::size_t depth = 0;
  std::size_t sample_count = 0;
  std::vector<double> mean;
};

// Multi-output CART regressor mapping (energy, feasibility) to a vector in
// [0,1]^n. Samples with feature <= threshold go left.
class RegressionTree {
public:
  RegressionTree() = default;
  RegressionTree(TreeHyperparams hp, std::size_t n_outputs, std::vector<TreeNode> nodes,
                 std::vector<double> observed_energies)
      : hp_(hp), n_outputs_(n_outputs), nodes_(std::move(nodes)),
        observed_(std::move(observed_energies)) {
    if (nodes_.empty())
      throw InvalidArgument("regression tree needs at least one node");
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      const auto &nd = nodes_[k];
      if (nd.leaf) {
        if (nd.mean.size() != n_outputs_)
          throw InvalidArgument("leaf " + std::to_string(k) + " has wrong output width");
      } else if (nd.left <= k || nd.right <= k || nd.left >= nodes_.size() ||
                 nd.right >= nodes_.size()) {
        throw InvalidArgument("node " + std::to_string(k) + " has invalid children");
      }
    }
  }

  const TreeHyperparams &hyperparams() const noexcept { return hp_; }
  std::size_t n_outputs() const noexcept { return n_outputs_; }
  const std::vector<TreeNode> &nodes() const noexcept { return nodes_; }
  // Sorted distinct training energies.
  const std::vector<double> &observed_energies() const noexcept { return observed_; }

  std::size_t leaf_index(double energy, bool feasible) const {
    std::size_t k = 0;
    while (!nodes_[k].leaf) {
      const auto &nd = nodes_[k];
      double v = nd.feature == Feature::Energy ? energy : (feasible ? 1.0 : 0.0);
      k = v <= nd.threshold ? nd.left : nd.right;
    }
    return k;
  }

  const std::vector<double> &predict(double energy, bool feasible) const {
    return nodes_[leaf_index(energy, feasible)].mean;
  }

  std::size_t depth() const {
    std::size_t d = 0;
    for (const auto &nd : nodes_)
      d = std::max(d, nd.depth);
    return d;
  }

  std::size_t leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode &n) { return n.leaf; }));
  }

private:
  TreeHyperparams hp_;
  std::size_t n_outputs_ = 0;
  std::vector<TreeNode> nodes_;
  std::vector<double> observed_;
};

namespace detail {

inline double feature_of(const TrainingSample &s, Feature f) {
  return f == Feature::Energy ? s.energy : (s.feasible ? 1.0 : 0.0);
}

inline double sse(std::span<const double> sum, std::span<const double> sumsq, double count) {
  if (count <= 0.0)
    return 0.0;
  double acc = 0.0;
  for (std::size_t c = 0; c < sum.size(); ++c)
    acc += sumsq[c] - sum[c] * sum[c] / count;
  return std::max(acc, 0.0);
}

struct SplitChoice {
  bool found = false;
  Feature feature = Feature::Energy;
  double threshold = 0.0;
  double gain = 0.0;
};

inline SplitChoice best_split(std::span<const TrainingSample> samples,
                              std::span<const std::size_t> idx, std::size_t n_out,
                              std::size_t min_leaf) {
  SplitChoice best;
  const auto n = idx.size();
  std::vector<double> tot(n_out, 0.0), totsq(n_out, 0.0);
  for (auto i : idx)
    for (std::size_t c = 0; c < n_out; ++c) {
      double y = samples[i].target[c];
      tot[c] += y;
      totsq[c] += y * y;
    }
  const double parent = sse(tot, totsq, static_cast<double>(n));
  std::vector<std::size_t> order(idx.begin(), idx.end());
  std::vector<double> ls(n_out), lsq(n_out), rs(n_out), rsq(n_out);
  for (auto f : {Feature::Energy, Feature::Feasible}) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return feature_of(samples[a], f) < feature_of(samples[b], f);
    });
    std::fill(ls.begin(), ls.end(), 0.0);
    std::fill(lsq.begin(), lsq.end(), 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const auto &s = samples[order[k]];
      for (std::size_t c = 0; c < n_out; ++c) {
        double y = s.target[c];
        ls[c] += y;
        lsq[c] += y * y;
      }
      double here = feature_of(s, f);
      double next = feature_of(samples[order[k + 1]], f);
      if (here == next)
        continue;
      std::size_t nl = k + 1, nr = n - nl;
      if (nl < min_leaf || nr < min_leaf)
        continue;
      for (std::size_t c = 0; c < n_out; ++c) {
        rs[c] = tot[c] - ls[c];
        rsq[c] = totsq[c] - lsq[c];
      }
      double gain = parent - sse(ls, lsq, static_cast<double>(nl)) -
                    sse(rs, rsq, static_cast<double>(nr));
      // Strict improvement only: earlier (lower feature, lower threshold)
      // candidates win ties.
      if (!best.found || gain > best.gain + 1e-12 * std::max(1.0, std::abs(best.gain))) {
        double mid = here + 0.5 * (next - here);
        // Adjacent doubles: the midpoint may round onto `next`.
        best = {true, f, mid < next ? mid : here, gain};
      }
    }
  }
  return best;
}

} // namespace detail

inline RegressionTree train(std::span<const TrainingSample> samples,
                            const TreeHyperparams &hp = {}) {
  if (samples.empty())
    throw InvalidArgument("train: empty training set");
  if (hp.min_samples_leaf < 1)
    throw InvalidArgument("train: min_samples_leaf must be >= 1");
  const auto n_out = samples.front().target.size();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].target.size() != n_out)
      throw InvalidArgument("train: sample " + std::to_string(i) + " target has length " +
                            std::to_string(samples[i].target.size()) + ", expected " +
                            std::to_string(n_out));
    if (!std::isfinite(samples[i].energy))
      throw InvalidArgument("train: sample " + std::to_string(i) + " has non-finite energy");
  }

  std::vector<TreeNode> nodes;
  struct Pending {
    std::size_t node;
    std::vector<std::size_t> idx;
  };
  std::vector<Pending> stack;
  std::vector<std::size_t> all(samples.size());
  std::iota(all.begin(), all.end(), 0);
  nodes.push_back({});
  stack.push_back({0, std::move(all)});
  while (!stack.empty()) {
    auto [node, idx] = std::move(stack.back());
    stack.pop_back();
    const auto n = idx.size();
    std::vector<double> sum(n_out, 0.0), sumsq(n_out, 0.0);
    for (auto i : idx)
      for (std::size_t c = 0; c < n_out; ++c) {
        double y = samples[i].target[c];
        sum[c] += y;
        sumsq[c] += y * y;
      }
    auto &nd = nodes[node];
    nd.sample_count = n;
    nd.mean.resize(n_out);
    for (std::size_t c = 0; c < n_out; ++c)
      nd.mean[c] = sum[c] / static_cast<double>(n);
    double variance = detail::sse(sum, sumsq, static_cast<double>(n)) / static_cast<double>(n);
    bool may_split = variance > std::max(hp.min_variance_split, 1e-15) &&
                     (!hp.max_depth || nd.depth < *hp.max_depth) &&
                     n >= 2 * hp.min_samples_leaf;
    if (!may_split)
      continue;
    auto split = detail::best_split(samples, idx, n_out, hp.min_samples_leaf);
    if (!split.found)
      continue;
    std::vector<std::size_t> left, right;
    for (auto i : idx)
      (detail::feature_of(samples[i], split.feature) <= split.threshold ? left : right)
          .push_back(i);
    if (left.empty() || right.empty())
      continue;
    auto depth = nd.depth;
    nd.leaf = false;
    nd.feature = split.feature;
    nd.threshold = split.threshold;
    nd.mean.clear();
    nd.left = nodes.size();
    nd.right = nodes.size() + 1;
    nodes.push_back({});
    nodes.back().depth = depth + 1;
    nodes.push_back({});
    nodes.back().depth = depth + 1;
    auto l = nodes[node].left, r = nodes[node].right;
    // Right pushed first so the left subtree is expanded first.
    stack.push_back({r, std::move(right)});
    stack.push_back({l, std::move(left)});
  }

  std::vector<double> observed;
  for (const auto &s : samples)
    observed.push_back(s.energy);
  std::sort(observed.begin(), observed.end());
  observed.erase(std::unique(observed.begin(), observed.end()), observed.end());
  return RegressionTree(hp, n_out, std::move(nodes), std::move(observed));
}

// Sum over samples and components of squared prediction error.
inline double training_loss(const RegressionTree &tree,
                            std::span<const TrainingSample> samples) {
  double loss = 0.0;
  for (const auto &s : samples) {
    const auto &p = tree.predict(s.energy, s.feasible);
    for (std::size_t c = 0; c < p.size(); ++c) {
      double d = p[c] - s.target[c];
      loss += d * d;
    }
  }
  return loss;
}

// One sample per distinct bit vector in the set, labelled by its stored
// energy and decoded feasibility.
inline std::vector<TrainingSample> training_from_sampleset(const SampleSet &set,
                                                           const IlpInstance &ilp,
                                                           const BinaryEncoding &enc) {
  std::vector<TrainingSample> out;
  std::set<Bits> seen;
  for (const auto &rec : set.records())
    if (seen.insert(rec.bits).second)
      out.push_back({rec.energy, bits_feasible(ilp, enc, rec.bits), rec.bits});
  return out;
}

// ---------------------------------------------------------------------------
// Discretization and expansion

struct EnergyGrid {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;
};

struct ExpansionConfig {
  double round_lo = 0.2;
  double round_hi = 0.8;
  std::size_t max_enum_bits = 16;
  // Explicit query energies; when both this and `grid` are empty the default
  // is the distinct training energies plus 100 points over
  // [min - 10% range, max].
  std::vector<double> query_energies;
  std::optional<EnergyGrid> grid;
  // Feasibility flags queried; E_in/E_out pairs are recorded for all of them.
  std::vector<bool> query_feasibility{false, true};
  // Only queries with one of these flags contribute new solutions.
  std::vector<bool> harvest_feasibility{true};

  void validate() const {
    if (!(0.0 <= round_lo && round_lo < round_hi && round_hi <= 1.0))
      throw InvalidArgument("expansion: need 0 <= round_lo < round_hi <= 1");
    if (max_enum_bits > 30)
      throw InvalidArgument("expansion: max_enum_bits above 30 is not supported");
    if (grid && !(grid->step > 0.0 && grid->lo <= grid->hi))
      throw InvalidArgument("expansion: energy grid needs lo <= hi and step > 0");
  }
};

// Components below round_lo become 0, above round_hi become 1, and the k
// components inside the closed band are enumerated over {0,1}: 2^k vectors in
// lexicographic order of the band bits.
inline std::vector<Bits> discretize(std::span<const double> v, const ExpansionConfig &cfg) {
  cfg.validate();
  Bits base(v.size(), 0);
  std::vector<std::size_t> band;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0 && v[i] <= 1.0))
      throw InvalidArgument("discretize: component " + std::to_string(i) +
                            " lies outside [0, 1]");
    if (v[i] < cfg.round_lo)
      base[i] = 0;
    else if (v[i] > cfg.round_hi)
      base[i] = 1;
    else
      band.push_back(i);
  }
  if (band.size() > cfg.max_enum_bits)
    throw Refusal("discretize: " + std::to_string(band.size()) +
                  " fractional components exceed max_enum_bits = " +
                  std::to_string(cfg.max_enum_bits));
  const std::uint64_t count = std::uint64_t{1} << band.size();
  std::vector<Bits> out;
  out.reserve(count);
  for (std::uint64_t m = 0; m < count; ++m) {
    auto q = base;
    for (std::size_t b = 0; b < band.size(); ++b)
      q[band[b]] = static_cast<std::uint8_t>((m >> (band.size() - 1 - b)) & 1u);
    out.push_back(std::move(q));
  }
  return out;
}

inline std::vector<double> query_energies(const RegressionTree &tree,
                                          const ExpansionConfig &cfg) {
  std::vector<double> out = cfg.query_energies;
  if (cfg.grid) {
    for (double e = cfg.grid->lo; e <= cfg.grid->hi + 1e-12 * std::abs(cfg.grid->hi);
         e += cfg.grid->step)
      out.push_back(e);
  }
  if (out.empty() && !cfg.grid) {
    const auto &obs = tree.observed_energies();
    out = obs;
    if (!obs.empty()) {
      double lo = obs.front(), hi = obs.back();
      double start = lo - 0.1 * (hi - lo);
      for (int k = 0; k < 100; ++k)
        out.push_back(start + (hi - start) * static_cast<double>(k) / 99.0);
    }
  }
  return out;
}

// Candidates of one query that share (E_out, feasible) are stored once with
// their multiplicity.
struct EnergyPair {
  double e_in = 0.0;
  double e_out = 0.0;
  bool query_feasible = false;
  bool feasible = false;
  std::uint64_t count = 1;
};

struct QueryRefusal {
  std::size_t query = 0;
  double energy = 0.0;
  bool feasible = false;
  std::string reason;
};

struct ExpansionResult {
  std::vector<Bits> new_feasible;
  std::vector<EnergyPair> pairs;
  std::vector<QueryRefusal> refusals;
  std::size_t queries = 0;
  std::size_t candidates = 0;
  std::size_t feasible_candidates = 0;
};

// For every (energy, feasibility) query: predict, discretize, score each
// candidate with the QUBO, feasibility-check it, and keep feasible vectors
// not already in `known`.
inline ExpansionResult expand(const RegressionTree &tree, const ExpansionConfig &cfg,
                              const QuboProblem &problem, const IlpInstance &ilp,
                              const BinaryEncoding &enc, const std::set<Bits> &known) {
  cfg.validate();
  if (tree.n_outputs() != enc.n_q() || problem.n() != enc.n_q())
    throw InvalidArgument("expand: tree, QUBO and encoding widths disagree");
  struct Query {
    double energy;
    bool feasible;
  };
  std::vector<Query> queries;
  for (double e : query_energies(tree, cfg))
    for (bool f : cfg.query_feasibility)
      queries.push_back({e, f});

  struct Outcome {
    std::vector<EnergyPair> pairs;
    std::vector<Bits> feasible;
    std::size_t candidates = 0;
    std::optional<std::string> refusal;
  };
  std::vector<Outcome> outcomes(queries.size());
  parallel_chunks(queries.size(), worker_count(), [&](std::size_t, std::uint64_t begin,
                                                      std::uint64_t end) {
    for (auto k = begin; k < end; ++k) {
      const auto &q = queries[k];
      auto &out = outcomes[k];
      std::vector<Bits> cands;
      try {
        cands = discretize(tree.predict(q.energy, q.feasible), cfg);
      } catch (const Refusal &e) {
        out.refusal = e.what();
        continue;
      }
      std::map<std::pair<double, bool>, std::uint64_t> tally;
      for (auto &c : cands) {
        bool ok = bits_feasible(ilp, enc, c);
        ++tally[{problem.energy(c), ok}];
        if (ok)
          out.feasible.push_back(std::move(c));
      }
      for (const auto &[key, count] : tally)
        out.pairs.push_back({q.energy, key.first, q.feasible, key.second, count});
      out.candidates = cands.size();
    }
  });

  ExpansionResult result;
  result.queries = queries.size();
  std::set<Bits> found;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    auto &out = outcomes[k];
    if (out.refusal) {
      result.refusals.push_back({k, queries[k].energy, queries[k].feasible, *out.refusal});
      continue;
    }
    result.candidates += out.candidates;
    result.feasible_candidates += out.feasible.size();
    result.pairs.insert(result.pairs.end(), out.pairs.begin(), out.pairs.end());
    bool harvest = std::find(cfg.harvest_feasibility.begin(), cfg.harvest_feasibility.end(),
                             queries[k].feasible) != cfg.harvest_feasibility.end();
    if (!harvest)
      continue;
    for (auto &c : out.feasible)
      if (!known.count(c) && found.insert(c).second)
        result.new_feasible.push_back(std::move(c));
  }
  return result;
}

struct RoundSummary {
  std::size_t round = 0;
  std::size_t training_size = 0;
  std::size_t new_feasible = 0;
  std::size_t known_feasible = 0;
};

struct IterativeExpansion {
  std::vector<RoundSummary> rounds;
  // Every feasible vector known at the end, in discovery order.
  std::vector<Bits> feasible;
  RegressionTree last_tree;
  ExpansionResult last_result;
};

// Repeatedly trains on all feasible vectors known so far and expands, merging
// the new vectors into the training set. Stops early once a round adds nothing.
inline IterativeExpansion expand_iteratively(std::span<const TrainingSample> seed,
                                             std::size_t rounds, const TreeHyperparams &hp,
                                             const ExpansionConfig &cfg,
                                             const QuboProblem &problem,
                                             const IlpInstance &ilp,
                                             const BinaryEncoding &enc) {
  IterativeExpansion out;
  std::vector<TrainingSample> training(seed.begin(), seed.end());
  std::set<Bits> known;
  for (const auto &s : training) {
    if (known.insert(s.target).second && s.feasible)
      out.feasible.push_back(s.target);
  }
  for (std::size_t r = 0; r < rounds; ++r) {
    auto tree = train(training, hp);
    auto res = expand(tree, cfg, problem, ilp, enc, known);
    for (const auto &b : res.new_feasible) {
      known.insert(b);
      out.feasible.push_back(b);
      training.push_back({problem.energy(b), true, b});
    }
    out.rounds.push_back({r + 1, training.size() - res.new_feasible.size(),
                          res.new_feasible.size(), out.feasible.size()});
    bool done = res.new_feasible.empty();
    out.last_tree = std::move(tree);
    out.last_result = std::move(res);
    if (done)
      break;
  }
  return out;
}

} // namespace qopt

#endif // QOPT_DT_EXPAND_HPP_INCLUDED
