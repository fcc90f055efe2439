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

#ifndef QOPT_NETGEN_HPP_INCLUDED
#define QOPT_NETGEN_HPP_INCLUDED

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qopt/error.hpp"
#include "qopt/ilp_model.hpp"
#include "qopt/parallel.hpp"
#include "qopt/rational.hpp"

namespace qopt {

struct FiberEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  double length_km = 0.0;
};

// Undirected fiber edges; each one carries a fiber link in both directions.
struct Topology {
  std::vector<std::string> nodes;
  std::vector<FiberEdge> edges;

  void validate() const {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto &ed = edges[e];
      if (ed.u >= nodes.size() || ed.v >= nodes.size())
        throw InvalidArgument("edge " + std::to_string(e) + " references an unknown node");
      if (ed.u == ed.v)
        throw InvalidArgument("edge " + std::to_string(e) + " is a self-loop");
      if (!(ed.length_km > 0.0))
        throw InvalidArgument("edge " + std::to_string(e) + " must have positive length");
    }
  }

  std::size_t node_index(const std::string &name) const {
    auto it = std::find(nodes.begin(), nodes.end(), name);
    if (it == nodes.end())
      throw InvalidArgument("unknown node '" + name + "'");
    return static_cast<std::size_t>(it - nodes.begin());
  }

  // Directed link 2e runs u -> v, link 2e+1 runs v -> u.
  std::size_t link_count() const noexcept { return 2 * edges.size(); }
  std::size_t link_from(std::size_t link) const {
    const auto &e = edges[link / 2];
    return link % 2 == 0 ? e.u : e.v;
  }
  std::size_t link_to(std::size_t link) const {
    const auto &e = edges[link / 2];
    return link % 2 == 0 ? e.v : e.u;
  }
  double link_length(std::size_t link) const { return edges[link / 2].length_km; }
};

// Triangle with two 300 km edges and one 424 km edge.
inline Topology three_node_default() {
  return {{"A", "B", "C"}, {{0, 1, 300.0}, {1, 2, 300.0}, {0, 2, 424.0}}};
}

struct Demand {
  std::size_t src = 0;
  std::size_t dst = 0;
  Rational volume{0}; // Gbit/s
};

struct NetworkParams {
  Rational xi{100};               // transceiver data rate, Gbit/s
  std::vector<std::int64_t> eta;  // installed transceivers per node
  std::vector<Demand> demands;
  double reach_km = 1000.0;
  std::size_t max_sections_per_path = 2;
  std::size_t w_bits = 2;

  void validate(const Topology &topo) const {
    if (!(xi > 0))
      throw InvalidArgument("transceiver rate xi must be positive");
    if (!(reach_km > 0.0))
      throw InvalidArgument("optical reach must be positive");
    if (max_sections_per_path < 1)
      throw InvalidArgument("max_sections_per_path must be >= 1");
    if (w_bits < 1 || w_bits > 30)
      throw InvalidArgument("w_bits must be in 1..30");
    if (eta.size() != topo.nodes.size())
      throw InvalidArgument("need one transceiver count per node (" +
                            std::to_string(topo.nodes.size()) + "), got " +
                            std::to_string(eta.size()));
    for (auto e : eta)
      if (e < 0)
        throw InvalidArgument("transceiver counts must be >= 0");
    for (std::size_t d = 0; d < demands.size(); ++d) {
      const auto &dm = demands[d];
      if (dm.src >= topo.nodes.size() || dm.dst >= topo.nodes.size() || dm.src == dm.dst)
        throw InvalidArgument("demand " + std::to_string(d) + " has invalid endpoints");
      if (dm.volume < 0)
        throw InvalidArgument("demand " + std::to_string(d) + " has negative volume");
    }
  }
};

// One demand per ordered node pair, volume h, eta transceivers per node.
inline NetworkParams default_params(const Topology &topo, Rational h = Rational(100),
                                    std::int64_t eta = 4) {
  NetworkParams p;
  p.eta.assign(topo.nodes.size(), eta);
  for (std::size_t u = 0; u < topo.nodes.size(); ++u)
    for (std::size_t v = 0; v < topo.nodes.size(); ++v)
      if (u != v)
        p.demands.push_back({u, v, h});
  return p;
}

// An optically transparent directed run over one or more fiber links.
struct Section {
  std::vector<std::size_t> links;
  std::vector<std::size_t> nodes; // links.size() + 1 entries
  double length_km = 0.0;

  std::size_t src() const { return nodes.front(); }
  std::size_t dst() const { return nodes.back(); }
};

// All directed simple fiber paths no longer than the reach, ordered by source
// node and then depth-first over link index.
inline std::vector<Section> enumerate_sections(const Topology &topo, double reach_km) {
  topo.validate();
  if (!(reach_km > 0.0))
    throw InvalidArgument("optical reach must be positive");
  std::vector<Section> out;
  Section cur;
  std::vector<bool> on_path(topo.nodes.size(), false);
  std::function<void(std::size_t)> dfs = [&](std::size_t at) {
    for (std::size_t l = 0; l < topo.link_count(); ++l) {
      if (topo.link_from(l) != at)
        continue;
      auto to = topo.link_to(l);
      double len = cur.length_km + topo.link_length(l);
      if (on_path[to] || len > reach_km * (1.0 + 1e-12))
        continue;
      cur.links.push_back(l);
      cur.nodes.push_back(to);
      cur.length_km = len;
      on_path[to] = true;
      out.push_back(cur);
      dfs(to);
      on_path[to] = false;
      cur.links.pop_back();
      cur.nodes.pop_back();
      cur.length_km -= topo.link_length(l);
    }
  };
  for (std::size_t s = 0; s < topo.nodes.size(); ++s) {
    cur = Section{{}, {s}, 0.0};
    on_path[s] = true;
    dfs(s);
    on_path[s] = false;
  }
  for (auto &sec : out) {
    // recompute to avoid add/subtract drift
    sec.length_km = 0.0;
    for (auto l : sec.links)
      sec.length_km += topo.link_length(l);
  }
  return out;
}

// A transmission path: section indices from demand source to sink.
using TransmissionPath = std::vector<std::size_t>;

// Section sequences from src to dst that never revisit a node, ordered by
// fiber link count, then section count, then discovery order.
inline std::vector<TransmissionPath> enumerate_paths(std::span<const Section> sections,
                                                     std::size_t node_count,
                                                     const Demand &demand,
                                                     std::size_t max_sections) {
  if (max_sections < 1)
    throw InvalidArgument("max_sections_per_path must be >= 1");
  std::vector<TransmissionPath> out;
  TransmissionPath cur;
  std::vector<bool> visited(node_count, false);
  std::function<void(std::size_t)> dfs = [&](std::size_t at) {
    if (cur.size() == max_sections)
      return;
    for (std::size_t c = 0; c < sections.size(); ++c) {
      const auto &sec = sections[c];
      if (sec.src() != at)
        continue;
      bool clash = false;
      for (std::size_t k = 1; k < sec.nodes.size(); ++k)
        clash = clash || visited[sec.nodes[k]];
      if (clash)
        continue;
      cur.push_back(c);
      if (sec.dst() == demand.dst) {
        out.push_back(cur);
      } else {
        for (std::size_t k = 1; k < sec.nodes.size(); ++k)
          visited[sec.nodes[k]] = true;
        dfs(sec.dst());
        for (std::size_t k = 1; k < sec.nodes.size(); ++k)
          visited[sec.nodes[k]] = false;
      }
      cur.pop_back();
    }
  };
  visited[demand.src] = true;
  dfs(demand.src);
  auto links = [&](const TransmissionPath &p) {
    std::size_t n = 0;
    for (auto c : p)
      n += sections[c].links.size();
    return n;
  };
  std::stable_sort(out.begin(), out.end(), [&](const auto &a, const auto &b) {
    auto la = links(a), lb = links(b);
    return la != lb ? la < lb : a.size() < b.size();
  });
  return out;
}

// ILP variable indices for the path selectors g and channel counts w.
struct VarMap {
  std::vector<std::vector<std::size_t>> g; // [demand][path]
  std::vector<std::size_t> w;              // [section]
};

struct NetworkInstance {
  Topology topology;
  NetworkParams params;
  std::vector<Section> sections;
  std::vector<std::vector<TransmissionPath>> paths; // T_d per demand
  VarMap var_map;
  IlpInstance ilp;

  // rho: section c lies on path t of demand d.
  bool rho(std::size_t c, std::size_t d, std::size_t t) const {
    const auto &p = paths[d][t];
    return std::find(p.begin(), p.end(), c) != p.end();
  }
  // phi: node v terminates section c.
  bool phi(std::size_t v, std::size_t c) const {
    return sections[c].src() == v || sections[c].dst() == v;
  }
  std::int64_t w_max() const {
    return (std::int64_t{1} << params.w_bits) - 1;
  }
};

inline std::string demand_name(const Topology &topo, const Demand &d) {
  return topo.nodes[d.src] + "->" + topo.nodes[d.dst];
}

// Variables: every g_{t_d} (binary) then every w_c. Rows: one EQ per demand
// (sum_t g = 1), one LE per section (-w_c + sum rho h_d/xi g <= 0), one LE
// per node (sum_c phi w_c - eta_v <= 0). Objective: sum_c w_c.
inline NetworkInstance build_network_ilp(const Topology &topo, const NetworkParams &params) {
  topo.validate();
  params.validate(topo);
  auto sections = enumerate_sections(topo, params.reach_km);
  std::vector<std::vector<TransmissionPath>> paths;
  for (const auto &d : params.demands) {
    auto td = enumerate_paths(sections, topo.nodes.size(), d, params.max_sections_per_path);
    if (td.empty())
      throw Infeasible("demand " + demand_name(topo, d) +
                       " has no transmission path within reach " +
                       std::to_string(params.reach_km) + " km and " +
                       std::to_string(params.max_sections_per_path) + " sections");
    paths.push_back(std::move(td));
  }

  VarMap vm;
  std::size_t nv = 0;
  for (const auto &td : paths) {
    vm.g.emplace_back();
    for (std::size_t t = 0; t < td.size(); ++t)
      vm.g.back().push_back(nv++);
  }
  for (std::size_t c = 0; c < sections.size(); ++c)
    vm.w.push_back(nv++);

  std::vector<Rational> cost(nv, Rational(0));
  std::vector<VarBounds> bounds(nv, VarBounds{0, 1});
  const std::int64_t wmax = (std::int64_t{1} << params.w_bits) - 1;
  for (auto i : vm.w) {
    cost[i] = 1;
    bounds[i] = {0, wmax};
  }

  std::vector<ConstraintRow> rows;
  for (std::size_t d = 0; d < paths.size(); ++d) {
    ConstraintRow row{std::vector<Rational>(nv, Rational(0)), Rational(-1), Sense::EQ};
    for (auto i : vm.g[d])
      row.a[i] = 1;
    rows.push_back(std::move(row));
  }
  for (std::size_t c = 0; c < sections.size(); ++c) {
    ConstraintRow row{std::vector<Rational>(nv, Rational(0)), Rational(0), Sense::LE};
    row.a[vm.w[c]] = -1;
    for (std::size_t d = 0; d < paths.size(); ++d)
      for (std::size_t t = 0; t < paths[d].size(); ++t) {
        const auto &p = paths[d][t];
        if (std::find(p.begin(), p.end(), c) != p.end())
          row.a[vm.g[d][t]] += params.demands[d].volume / params.xi;
      }
    rows.push_back(std::move(row));
  }
  for (std::size_t v = 0; v < topo.nodes.size(); ++v) {
    ConstraintRow row{std::vector<Rational>(nv, Rational(0)), Rational(-params.eta[v]),
                      Sense::LE};
    for (std::size_t c = 0; c < sections.size(); ++c)
      if (sections[c].src() == v || sections[c].dst() == v)
        row.a[vm.w[c]] = 1;
    rows.push_back(std::move(row));
  }

  IlpInstance ilp("network", std::move(cost), std::move(rows), std::move(bounds));
  return NetworkInstance{topo, params, std::move(sections), std::move(paths), std::move(vm),
                         std::move(ilp)};
}

// g: 1 bit each; w: w_bits each; slacks sized from each row's worst case.
inline BinaryEncoding network_encoding(const NetworkInstance &net) {
  std::vector<std::size_t> var_bits(net.ilp.n_vars(), 1);
  for (auto i : net.var_map.w)
    var_bits[i] = net.params.w_bits;
  auto slack_bits = slack_bits_from_range(net.ilp, var_bits);
  return build_encoding(net.ilp, var_bits, slack_bits);
}

struct NetworkSolution {
  std::vector<std::size_t> choice; // path index per demand
  std::vector<std::int64_t> w;     // per section
  std::int64_t objective = 0;
  std::vector<std::int64_t> x;     // full ILP assignment
};

inline std::vector<std::int64_t> assignment_of(const NetworkInstance &net,
                                               std::span<const std::size_t> choice,
                                               std::span<const std::int64_t> w) {
  std::vector<std::int64_t> x(net.ilp.n_vars(), 0);
  for (std::size_t d = 0; d < choice.size(); ++d)
    x[net.var_map.g[d][choice[d]]] = 1;
  for (std::size_t c = 0; c < w.size(); ++c)
    x[net.var_map.w[c]] = w[c];
  return x;
}

inline constexpr std::uint64_t kDefaultCombinationLimit = 10'000'000;

// Enumerates every path combination, sets each w_c to the smallest integer
// carrying its load, and keeps the cheapest combination meeting the node
// budgets and w_c <= 2^w_bits - 1. Ties go to the lexicographically smallest
// tuple of path indices. nullopt when no combination is feasible.
inline std::optional<NetworkSolution>
exact_solve(const NetworkInstance &net, std::uint64_t limit = kDefaultCombinationLimit) {
  const auto nd = net.paths.size();
  std::uint64_t total = 1;
  for (const auto &td : net.paths) {
    if (total > limit / std::max<std::size_t>(td.size(), 1))
      throw Refusal("exact_solve: more than " + std::to_string(limit) +
                    " path combinations");
    total *= td.size();
  }
  if (total > limit)
    throw Refusal("exact_solve: " + std::to_string(total) + " path combinations exceed " +
                  std::to_string(limit));
  const auto nc = net.sections.size();
  const auto wmax = net.w_max();
  std::vector<Rational> ratio(nd);
  for (std::size_t d = 0; d < nd; ++d)
    ratio[d] = net.params.demands[d].volume / net.params.xi;
  std::vector<std::vector<std::size_t>> terminals(net.topology.nodes.size());
  for (std::size_t c = 0; c < nc; ++c)
    for (std::size_t v = 0; v < terminals.size(); ++v)
      if (net.phi(v, c))
        terminals[v].push_back(c);

  struct Best {
    bool found = false;
    std::int64_t objective = 0;
    std::uint64_t index = 0;
  };
  auto chunks = std::max<std::size_t>(1, std::min<std::uint64_t>(worker_count(), total));
  std::vector<Best> best(chunks);
  parallel_chunks(total, chunks, [&](std::size_t ch, std::uint64_t begin, std::uint64_t end) {
    std::vector<std::size_t> choice(nd);
    std::vector<Rational> load(nc);
    Best local;
    for (auto k = begin; k < end; ++k) {
      auto rem = k;
      for (std::size_t d = nd; d-- > 0;) {
        choice[d] = rem % net.paths[d].size();
        rem /= net.paths[d].size();
      }
      std::fill(load.begin(), load.end(), Rational(0));
      for (std::size_t d = 0; d < nd; ++d)
        for (auto c : net.paths[d][choice[d]])
          load[c] += ratio[d];
      std::int64_t obj = 0;
      bool ok = true;
      std::vector<std::int64_t> w(nc);
      for (std::size_t c = 0; c < nc && ok; ++c) {
        w[c] = ceil(load[c]);
        ok = w[c] <= wmax;
        obj += w[c];
      }
      for (std::size_t v = 0; v < terminals.size() && ok; ++v) {
        std::int64_t used = 0;
        for (auto c : terminals[v])
          used += w[c];
        ok = used <= net.params.eta[v];
      }
      if (ok && (!local.found || obj < local.objective))
        local = {true, obj, k};
    }
    best[ch] = local;
  });
  Best winner;
  for (const auto &b : best)
    if (b.found && (!winner.found || b.objective < winner.objective ||
                    (b.objective == winner.objective && b.index < winner.index)))
      winner = b;
  if (!winner.found)
    return std::nullopt;

  NetworkSolution sol;
  sol.choice.resize(nd);
  auto rem = winner.index;
  for (std::size_t d = nd; d-- > 0;) {
    sol.choice[d] = rem % net.paths[d].size();
    rem /= net.paths[d].size();
  }
  std::vector<Rational> load(nc, Rational(0));
  for (std::size_t d = 0; d < nd; ++d)
    for (auto c : net.paths[d][sol.choice[d]])
      load[c] += ratio[d];
  for (std::size_t c = 0; c < nc; ++c)
    sol.w.push_back(ceil(load[c]));
  sol.objective = winner.objective;
  sol.x = assignment_of(net, sol.choice, sol.w);
  return sol;
}

} // namespace qopt

#endif // QOPT_NETGEN_HPP_INCLUDED
