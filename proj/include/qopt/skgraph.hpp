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

#ifndef QOPT_SKGRAPH_HPP_INCLUDED
#define QOPT_SKGRAPH_HPP_INCLUDED

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qopt/bits.hpp"
#include "qopt/error.hpp"
#include "qopt/parallel.hpp"
#include "qopt/qubo_ising.hpp"

namespace qopt {

// Hamiltonian: w_ij = J_ij + J_ji, w_{i,field} = h_i. Its cut capacities map
// to energies as E = W - 2c(S) + g, so the ground state is a maximum cut.
// Reversed: every weight negated, E = 2c(S) - W + g, so the ground state is a
// minimum cut.
enum class SkSign { Hamiltonian, Reversed };

struct SkEdge {
  std::size_t u = 0;
  std::size_t v = 0; // u < v
  double w = 0.0;
};

// Sherrington-Kirkpatrick graph of an Ising problem: n variable nodes
// 0..n-1 plus the field node n. Zero-weight edges are omitted.
class SkGraph {
public:
  SkGraph() = default;
  SkGraph(std::size_t n_variables, std::vector<SkEdge> edges, SkSign sign)
      : n_(n_variables), edges_(std::move(edges)), sign_(sign),
        adj_((n_ + 1) * (n_ + 1), 0.0) {
    for (const auto &e : edges_) {
      if (e.u >= e.v || e.v > n_)
        throw InvalidArgument("SK edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                              ") must satisfy u < v <= n");
      if (adj_[e.u * (n_ + 1) + e.v] != 0.0)
        throw InvalidArgument("SK edge (" + std::to_string(e.u) + ", " +
                              std::to_string(e.v) + ") stored twice");
      adj_[e.u * (n_ + 1) + e.v] = adj_[e.v * (n_ + 1) + e.u] = e.w;
      total_ += e.w;
    }
  }

  std::size_t n_variables() const noexcept { return n_; }
  std::size_t node_count() const noexcept { return n_ + 1; }
  std::size_t field_node() const noexcept { return n_; }
  const std::vector<SkEdge> &edges() const noexcept { return edges_; }
  SkSign sign() const noexcept { return sign_; }
  double total_weight() const noexcept { return total_; }
  double weight(std::size_t a, std::size_t b) const { return adj_[a * (n_ + 1) + b]; }

private:
  std::size_t n_ = 0;
  std::vector<SkEdge> edges_;
  SkSign sign_ = SkSign::Hamiltonian;
  std::vector<double> adj_;
  double total_ = 0.0;
};

inline SkGraph build_sk(const IsingProblem &ising, SkSign sign = SkSign::Hamiltonian) {
  const auto n = ising.n();
  const double s = sign == SkSign::Hamiltonian ? 1.0 : -1.0;
  std::vector<SkEdge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    if (ising.j(i, i) != 0.0)
      throw InvalidArgument("build_sk: J has a nonzero diagonal at " + std::to_string(i));
    for (std::size_t j = i + 1; j < n; ++j) {
      double w = ising.j(i, j) + ising.j(j, i);
      if (w != 0.0)
        edges.push_back({i, j, s * w});
    }
    if (ising.h()[i] != 0.0)
      edges.push_back({i, n, s * ising.h()[i]});
  }
  std::sort(edges.begin(), edges.end(), [](const SkEdge &a, const SkEdge &b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  return SkGraph(n, std::move(edges), sign);
}

// Membership over all n+1 nodes.
using CutSet = std::vector<bool>;

inline double cut_capacity(const SkGraph &g, const CutSet &s) {
  if (s.size() != g.node_count())
    throw InvalidArgument("cut membership has " + std::to_string(s.size()) +
                          " entries, graph has " + std::to_string(g.node_count()) + " nodes");
  double c = 0.0;
  for (const auto &e : g.edges())
    if (s[e.u] != s[e.v])
      c += e.w;
  return c;
}

inline CutSet cut_of_nodes(const SkGraph &g, std::span<const std::size_t> nodes) {
  CutSet s(g.node_count(), false);
  for (auto v : nodes) {
    if (v >= g.node_count())
      throw InvalidArgument("node " + std::to_string(v) + " is not in the graph");
    s[v] = true;
  }
  return s;
}

// Cut index k puts variable node i in S iff bit i of bits_from_index(k, n)
// is set; the field node always stays outside.
inline CutSet cut_of_index(const SkGraph &g, std::uint64_t k) {
  auto b = bits_from_index(k, g.n_variables());
  CutSet s(g.node_count(), false);
  for (std::size_t i = 0; i < b.size(); ++i)
    s[i] = b[i] != 0;
  return s;
}

// Nodes in S take spin -1, the rest (field node included) +1.
inline Spins spins_of_cut(const SkGraph &g, const CutSet &s) {
  if (s.size() != g.node_count())
    throw InvalidArgument("cut membership does not match the graph");
  if (s[g.field_node()])
    throw InvalidArgument("field node must stay outside S (use the complement)");
  Spins out(g.n_variables());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = s[i] ? std::int8_t{-1} : std::int8_t{1};
  return out;
}

inline double energy_from_capacity(const SkGraph &g, double capacity, double offset) {
  double base = g.total_weight() - 2.0 * capacity;
  return (g.sign() == SkSign::Hamiltonian ? base : -base) + offset;
}

inline double energy_of_cut(const SkGraph &g, const CutSet &s, const IsingProblem &ising) {
  if (ising.n() != g.n_variables())
    throw InvalidArgument("Ising problem and SK graph sizes differ");
  if (s.size() != g.node_count())
    throw InvalidArgument("cut membership does not match the graph");
  if (s[g.field_node()])
    throw InvalidArgument("field node must stay outside S (use the complement)");
  return energy_from_capacity(g, cut_capacity(g, s), ising.g());
}

// Capacities of all 2^n cuts with the field node outside S, by cut index.
inline std::vector<double> enumerate_cuts(const SkGraph &g,
                                          std::size_t limit = kDefaultExhaustiveLimit) {
  const auto n = g.n_variables();
  require_exhaustive(n, limit, "enumerate_cuts");
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<double> caps(total);
  parallel_chunks(total, kWalkChunks, [&](std::size_t, std::uint64_t begin,
                                             std::uint64_t end) {
    // Gray-code walk: toggling node p changes the capacity by
    // sum_j w_pj * (same side before ? +1 : -1).
    auto gray = [](std::uint64_t k) { return k ^ (k >> 1); };
    auto s = cut_of_index(g, gray(begin));
    double c = cut_capacity(g, s);
    caps[gray(begin)] = c;
    for (auto k = begin + 1; k < end; ++k) {
      auto p = n - 1 - static_cast<std::size_t>(std::countr_zero(k));
      for (std::size_t j = 0; j <= n; ++j) {
        double w = g.weight(p, j);
        if (w != 0.0 && j != p)
          c += s[j] == s[p] ? w : -w;
      }
      s[p] = !s[p];
      caps[gray(k)] = c;
    }
  });
  return caps;
}

struct MinCut {
  CutSet set;
  std::uint64_t index = 0;
  double capacity = 0.0;
};

// Ties (within 1e-9) go to the smallest cut index, i.e. the lexicographically
// smallest membership vector.
inline MinCut min_cut_brute(const SkGraph &g, std::size_t limit = kDefaultExhaustiveLimit) {
  auto caps = enumerate_cuts(g, limit);
  std::uint64_t best = 0;
  for (std::uint64_t k = 1; k < caps.size(); ++k)
    if (caps[k] < caps[best] - 1e-9)
      best = k;
  return {cut_of_index(g, best), best, caps[best]};
}

inline MinCut max_cut_brute(const SkGraph &g, std::size_t limit = kDefaultExhaustiveLimit) {
  auto caps = enumerate_cuts(g, limit);
  std::uint64_t best = 0;
  for (std::uint64_t k = 1; k < caps.size(); ++k)
    if (caps[k] > caps[best] + 1e-9)
      best = k;
  return {cut_of_index(g, best), best, caps[best]};
}

struct SpectrumBin {
  double capacity = 0.0;
  std::uint64_t count = 0;
};

// Distinct capacities (merged within 1e-9) in ascending order.
inline std::vector<SpectrumBin> cut_spectrum(std::span<const double> caps) {
  std::vector<double> sorted(caps.begin(), caps.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<SpectrumBin> out;
  for (double c : sorted) {
    if (!out.empty() && std::abs(c - out.back().capacity) <= 1e-9)
      ++out.back().count;
    else
      out.push_back({c, 1});
  }
  return out;
}

} // namespace qopt

#endif // QOPT_SKGRAPH_HPP_INCLUDED
