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

#ifndef QOPT_IO_HPP_INCLUDED
#define QOPT_IO_HPP_INCLUDED

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qopt/dt_expand.hpp"
#include "qopt/error.hpp"
#include "qopt/ilp_model.hpp"
#include "qopt/netgen.hpp"
#include "qopt/qubo_ising.hpp"
#include "qopt/rational.hpp"
#include "qopt/skgraph.hpp"

namespace qopt::io {

using nlohmann::json;

inline std::string read_text_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path + "'");
  return std::string((std::istreambuf_iterator<char>(in)), {});
}

inline void write_text_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out)
    throw IoError("short write to '" + path + "'");
}

inline json parse_json(const std::string &text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
      if (text[i] == '\n')
        ++line;
    throw ParseError(e.what(), line);
  }
}

inline json read_json_file(const std::string &path) { return parse_json(read_text_file(path)); }

// Two-space indented, keys sorted, trailing newline.
inline std::string dump(const json &j) { return j.dump(2) + "\n"; }

// Wraps schema errors from nlohmann so callers see InvalidArgument.
template <typename Fn>
auto schema(const char *what, Fn &&fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception &e) {
    throw InvalidArgument(std::string(what) + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Rationals: integers stay JSON integers, fractions become "p/q" strings.

inline json rational_to_json(const Rational &r) {
  if (r.denominator() == 1)
    return r.numerator();
  return format_rational(r);
}

inline Rational rational_from_json(const json &j) {
  if (j.is_number_integer())
    return Rational(j.get<std::int64_t>());
  if (j.is_string())
    return parse_rational(j.get<std::string>());
  if (j.is_number_float()) {
    double v = j.get<double>();
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9e15)
      return Rational(static_cast<std::int64_t>(v));
    throw InvalidArgument("non-integral number " + j.dump() + "; write it as \"p/q\"");
  }
  throw InvalidArgument("expected an integer or \"p/q\" string, got " + j.dump());
}

// ---------------------------------------------------------------------------
// ILP instance

inline json to_json(const IlpInstance &ilp) {
  json c = json::array(), bounds = json::array(), rows = json::array();
  for (const auto &v : ilp.c())
    c.push_back(rational_to_json(v));
  for (const auto &b : ilp.bounds())
    bounds.push_back(json::array({b.lo, b.hi}));
  for (const auto &row : ilp.constraints()) {
    json a = json::array();
    for (const auto &v : row.a)
      a.push_back(rational_to_json(v));
    rows.push_back({{"a", a},
                    {"b", rational_to_json(row.b)},
                    {"sense", row.sense == Sense::LE ? "LE" : "EQ"}});
  }
  return {{"name", ilp.name()}, {"n_vars", ilp.n_vars()}, {"c", c},
          {"bounds", bounds}, {"constraints", rows}};
}

inline IlpInstance ilp_from_json(const json &j) {
  return schema("ILP file", [&] {
    auto n = j.at("n_vars").get<std::size_t>();
    std::vector<Rational> c;
    for (const auto &v : j.at("c"))
      c.push_back(rational_from_json(v));
    if (c.size() != n)
      throw InvalidArgument("ILP file: c has " + std::to_string(c.size()) +
                            " entries, n_vars is " + std::to_string(n));
    std::vector<VarBounds> bounds;
    for (const auto &b : j.at("bounds")) {
      if (!b.is_array() || b.size() != 2)
        throw InvalidArgument("ILP file: each bound must be [lo, hi]");
      bounds.push_back({b[0].get<std::int64_t>(), b[1].get<std::int64_t>()});
    }
    std::vector<ConstraintRow> rows;
    for (const auto &r : j.at("constraints")) {
      ConstraintRow row;
      for (const auto &v : r.at("a"))
        row.a.push_back(rational_from_json(v));
      row.b = rational_from_json(r.at("b"));
      auto sense = r.at("sense").get<std::string>();
      if (sense == "LE")
        row.sense = Sense::LE;
      else if (sense == "EQ")
        row.sense = Sense::EQ;
      else
        throw InvalidArgument("ILP file: sense must be LE or EQ, got '" + sense + "'");
      rows.push_back(std::move(row));
    }
    return IlpInstance(j.value("name", std::string("ilp")), std::move(c), std::move(rows),
                       std::move(bounds));
  });
}

// ---------------------------------------------------------------------------
// Binary encoding

inline json to_json(const BinaryEncoding &enc) {
  json spans = json::array();
  for (const auto &sp : enc.spans())
    spans.push_back({{"kind", sp.kind == SpanKind::Variable ? "var" : "slack"},
                     {"index", sp.index},
                     {"offset", sp.offset},
                     {"weights", sp.weights}});
  return {{"n_q", enc.n_q()}, {"spans", spans}};
}

inline BinaryEncoding encoding_from_json(const json &j) {
  return schema("encoding file", [&] {
    std::vector<Span> spans;
    for (const auto &s : j.at("spans")) {
      Span sp;
      auto kind = s.at("kind").get<std::string>();
      if (kind != "var" && kind != "slack")
        throw InvalidArgument("encoding file: span kind must be var or slack");
      sp.kind = kind == "var" ? SpanKind::Variable : SpanKind::Slack;
      sp.index = s.at("index").get<std::size_t>();
      sp.offset = s.at("offset").get<std::size_t>();
      sp.weights = s.at("weights").get<std::vector<std::uint64_t>>();
      spans.push_back(std::move(sp));
    }
    BinaryEncoding enc(std::move(spans));
    if (j.contains("n_q") && j.at("n_q").get<std::size_t>() != enc.n_q())
      throw InvalidArgument("encoding file: n_q disagrees with the spans");
    return enc;
  });
}

// ---------------------------------------------------------------------------
// QUBO and Ising

inline json triplets_to_json(const std::vector<Triplet> &entries) {
  json out = json::array();
  for (const auto &t : entries)
    out.push_back(json::array({t.i, t.j, t.value}));
  return out;
}

inline std::vector<Triplet> triplets_from_json(const json &j) {
  std::vector<Triplet> out;
  for (const auto &e : j) {
    if (!e.is_array() || e.size() != 3)
      throw InvalidArgument("entries must be [i, j, value] triples");
    out.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<double>()});
  }
  return out;
}

inline json to_json(const QuboProblem &q) {
  return {{"n", q.n()},
          {"C", q.offset()},
          {"p", q.penalty()},
          {"convention", "symmetric-half"},
          {"entries", triplets_to_json(q.upper_entries())}};
}

inline QuboProblem qubo_from_json(const json &j) {
  return schema("QUBO file", [&] {
    if (j.value("convention", std::string("symmetric-half")) != "symmetric-half")
      throw InvalidArgument("QUBO file: unsupported convention");
    auto entries = triplets_from_json(j.at("entries"));
    return QuboProblem::from_upper(j.at("n").get<std::size_t>(), entries,
                                   j.value("C", 0.0), j.value("p", 0.0));
  });
}

inline json to_json(const IsingProblem &s) {
  return {{"n", s.n()},
          {"g", s.g()},
          {"h", s.h()},
          {"convention", "symmetric-half"},
          {"entries", triplets_to_json(s.upper_entries())}};
}

inline IsingProblem ising_from_json(const json &j) {
  return schema("Ising file", [&] {
    if (j.value("convention", std::string("symmetric-half")) != "symmetric-half")
      throw InvalidArgument("Ising file: unsupported convention");
    auto entries = triplets_from_json(j.at("entries"));
    return IsingProblem::from_upper(j.at("n").get<std::size_t>(), entries,
                                    j.at("h").get<std::vector<double>>(), j.value("g", 0.0));
  });
}

// ---------------------------------------------------------------------------
// Regression tree

inline json to_json(const RegressionTree &tree) {
  const auto &hp = tree.hyperparams();
  json nodes = json::array();
  for (const auto &nd : tree.nodes()) {
    json n{{"depth", nd.depth}, {"samples", nd.sample_count}};
    if (nd.leaf) {
      n["leaf"] = true;
      n["mean"] = nd.mean;
    } else {
      n["leaf"] = false;
      n["feature"] = nd.feature == Feature::Energy ? "energy" : "feasible";
      n["threshold"] = nd.threshold;
      n["left"] = nd.left;
      n["right"] = nd.right;
    }
    nodes.push_back(std::move(n));
  }
  json hpj{{"min_samples_leaf", hp.min_samples_leaf},
           {"min_variance_split", hp.min_variance_split},
           {"max_depth", hp.max_depth ? json(*hp.max_depth) : json(nullptr)}};
  return {{"hyperparams", hpj},
          {"n_outputs", tree.n_outputs()},
          {"observed_energies", tree.observed_energies()},
          {"nodes", nodes}};
}

inline RegressionTree tree_from_json(const json &j) {
  return schema("tree file", [&] {
    TreeHyperparams hp;
    const auto &hpj = j.at("hyperparams");
    hp.min_samples_leaf = hpj.at("min_samples_leaf").get<std::size_t>();
    hp.min_variance_split = hpj.at("min_variance_split").get<double>();
    if (!hpj.at("max_depth").is_null())
      hp.max_depth = hpj.at("max_depth").get<std::size_t>();
    std::vector<TreeNode> nodes;
    for (const auto &n : j.at("nodes")) {
      TreeNode nd;
      nd.depth = n.at("depth").get<std::size_t>();
      nd.sample_count = n.at("samples").get<std::size_t>();
      nd.leaf = n.at("leaf").get<bool>();
      if (nd.leaf) {
        nd.mean = n.at("mean").get<std::vector<double>>();
      } else {
        auto f = n.at("feature").get<std::string>();
        nd.feature = f == "energy" ? Feature::Energy : Feature::Feasible;
        nd.threshold = n.at("threshold").get<double>();
        nd.left = n.at("left").get<std::size_t>();
        nd.right = n.at("right").get<std::size_t>();
      }
      nodes.push_back(std::move(nd));
    }
    return RegressionTree(hp, j.at("n_outputs").get<std::size_t>(), std::move(nodes),
                          j.at("observed_energies").get<std::vector<double>>());
  });
}

// ---------------------------------------------------------------------------
// Network topology, parameters and instance export

inline json to_json(const Topology &t) {
  json edges = json::array();
  for (const auto &e : t.edges)
    edges.push_back({{"u", t.nodes[e.u]}, {"v", t.nodes[e.v]}, {"length_km", e.length_km}});
  return {{"nodes", t.nodes}, {"edges", edges}};
}

inline Topology topology_from_json(const json &j) {
  return schema("topology file", [&] {
    Topology t;
    t.nodes = j.at("nodes").get<std::vector<std::string>>();
    for (const auto &e : j.at("edges"))
      t.edges.push_back({t.node_index(e.at("u").get<std::string>()),
                         t.node_index(e.at("v").get<std::string>()),
                         e.at("length_km").get<double>()});
    t.validate();
    return t;
  });
}

inline json to_json(const NetworkParams &p, const Topology &t) {
  json eta = json::object(), demands = json::array();
  for (std::size_t v = 0; v < t.nodes.size(); ++v)
    eta[t.nodes[v]] = p.eta[v];
  for (const auto &d : p.demands)
    demands.push_back({{"src", t.nodes[d.src]},
                       {"dst", t.nodes[d.dst]},
                       {"h", rational_to_json(d.volume)}});
  return {{"xi", rational_to_json(p.xi)},
          {"eta", eta},
          {"demands", demands},
          {"reach_km", p.reach_km},
          {"max_sections_per_path", p.max_sections_per_path},
          {"w_bits", p.w_bits}};
}

// Omitted fields take the 3-node study defaults; omitted demands mean one
// demand of volume 100 per ordered node pair.
inline NetworkParams params_from_json(const json &j, const Topology &t) {
  return schema("params file", [&] {
    auto p = default_params(t);
    if (j.contains("xi"))
      p.xi = rational_from_json(j.at("xi"));
    if (j.contains("eta")) {
      const auto &eta = j.at("eta");
      if (eta.is_number_integer()) {
        p.eta.assign(t.nodes.size(), eta.get<std::int64_t>());
      } else {
        for (const auto &[name, count] : eta.items())
          p.eta[t.node_index(name)] = count.get<std::int64_t>();
      }
    }
    if (j.contains("demands")) {
      p.demands.clear();
      for (const auto &d : j.at("demands"))
        p.demands.push_back({t.node_index(d.at("src").get<std::string>()),
                             t.node_index(d.at("dst").get<std::string>()),
                             rational_from_json(d.at("h"))});
    }
    p.reach_km = j.value("reach_km", p.reach_km);
    p.max_sections_per_path = j.value("max_sections_per_path", p.max_sections_per_path);
    p.w_bits = j.value("w_bits", p.w_bits);
    p.validate(t);
    return p;
  });
}

inline json var_map_to_json(const NetworkInstance &net) {
  const auto &t = net.topology;
  json g = json::array(), w = json::array();
  for (std::size_t d = 0; d < net.paths.size(); ++d) {
    json paths = json::array();
    for (std::size_t k = 0; k < net.paths[d].size(); ++k)
      paths.push_back({{"var", net.var_map.g[d][k]}, {"sections", net.paths[d][k]}});
    g.push_back({{"demand", demand_name(t, net.params.demands[d])}, {"paths", paths}});
  }
  for (std::size_t c = 0; c < net.sections.size(); ++c) {
    json nodes = json::array();
    for (auto v : net.sections[c].nodes)
      nodes.push_back(t.nodes[v]);
    w.push_back({{"section", c},
                 {"var", net.var_map.w[c]},
                 {"nodes", nodes},
                 {"length_km", net.sections[c].length_km}});
  }
  return {{"g", g}, {"w", w}};
}

inline json to_json(const NetworkSolution &s) {
  return {{"choice", s.choice}, {"w", s.w}, {"objective", s.objective}, {"x", s.x}};
}

// ---------------------------------------------------------------------------
// SK graph

inline std::string number_text(double v) { return json(v).dump(); }

// "nodes k" header, then one "u v w" line per edge.
inline std::string sk_edge_list(const SkGraph &g) {
  std::string out = "nodes " + std::to_string(g.node_count()) + "\n";
  for (const auto &e : g.edges())
    out += std::to_string(e.u) + " " + std::to_string(e.v) + " " + number_text(e.w) + "\n";
  return out;
}

} // namespace qopt::io

#endif // QOPT_IO_HPP_INCLUDED
