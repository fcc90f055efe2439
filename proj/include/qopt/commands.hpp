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

#ifndef QOPT_COMMANDS_HPP_INCLUDED
#define QOPT_COMMANDS_HPP_INCLUDED

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qopt/bits.hpp"
#include "qopt/digest.hpp"
#include "qopt/dt_expand.hpp"
#include "qopt/error.hpp"
#include "qopt/ilp_model.hpp"
#include "qopt/io.hpp"
#include "qopt/metrics.hpp"
#include "qopt/netgen.hpp"
#include "qopt/qubo_ising.hpp"
#include "qopt/samplers.hpp"
#include "qopt/skgraph.hpp"

namespace qopt::cli {

using nlohmann::json;

inline constexpr const char *kVersion = "0.1.0";

// Every knob any command reads. All of it is recorded in the manifest.
struct Options {
  std::uint64_t seed = 0;
  double penalty = 2.0;
  std::string mode = "sa";
  std::size_t reads = 200;
  std::size_t sweeps = 1000;
  double beta_start = 0.1;
  std::optional<double> beta_end;
  std::vector<std::string> labels; // key=value
  std::size_t var_bits = 2;
  std::size_t slack_bits = 3;
  std::optional<std::size_t> w_bits;
  std::optional<double> reach_km;
  std::optional<std::size_t> max_sections;
  double round_lo = 0.2;
  double round_hi = 0.8;
  std::size_t max_enum_bits = 16;
  std::size_t rounds = 1;
  std::size_t min_samples_leaf = 1;
  std::optional<std::size_t> max_depth;
  double min_variance_split = 0.0;
  std::string reference; // bit string; empty picks the encoded optimum
  std::vector<std::string> keys;
  std::size_t bins = 50;
  std::string weighting = "occurrences";
  std::size_t limit_exhaustive = kDefaultExhaustiveLimit;
};

template <typename T>
json optional_json(const std::optional<T> &v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json &j, const char *key) {
  if (!j.contains(key) || j.at(key).is_null())
    return std::nullopt;
  return j.at(key).get<T>();
}

inline json to_json(const Options &o) {
  return {{"seed", o.seed},
          {"penalty", o.penalty},
          {"mode", o.mode},
          {"reads", o.reads},
          {"sweeps", o.sweeps},
          {"beta_start", o.beta_start},
          {"beta_end", optional_json(o.beta_end)},
          {"labels", o.labels},
          {"var_bits", o.var_bits},
          {"slack_bits", o.slack_bits},
          {"w_bits", optional_json(o.w_bits)},
          {"reach_km", optional_json(o.reach_km)},
          {"max_sections", optional_json(o.max_sections)},
          {"round_lo", o.round_lo},
          {"round_hi", o.round_hi},
          {"max_enum_bits", o.max_enum_bits},
          {"rounds", o.rounds},
          {"min_samples_leaf", o.min_samples_leaf},
          {"max_depth", optional_json(o.max_depth)},
          {"min_variance_split", o.min_variance_split},
          {"reference", o.reference},
          {"keys", o.keys},
          {"bins", o.bins},
          {"weighting", o.weighting},
          {"limit_exhaustive", o.limit_exhaustive}};
}

inline Options options_from_json(const json &j) {
  return io::schema("manifest config", [&] {
    Options o;
    o.seed = j.at("seed").get<std::uint64_t>();
    o.penalty = j.at("penalty").get<double>();
    o.mode = j.at("mode").get<std::string>();
    o.reads = j.at("reads").get<std::size_t>();
    o.sweeps = j.at("sweeps").get<std::size_t>();
    o.beta_start = j.at("beta_start").get<double>();
    o.beta_end = optional_from<double>(j, "beta_end");
    o.labels = j.at("labels").get<std::vector<std::string>>();
    o.var_bits = j.at("var_bits").get<std::size_t>();
    o.slack_bits = j.at("slack_bits").get<std::size_t>();
    o.w_bits = optional_from<std::size_t>(j, "w_bits");
    o.reach_km = optional_from<double>(j, "reach_km");
    o.max_sections = optional_from<std::size_t>(j, "max_sections");
    o.round_lo = j.at("round_lo").get<double>();
    o.round_hi = j.at("round_hi").get<double>();
    o.max_enum_bits = j.at("max_enum_bits").get<std::size_t>();
    o.rounds = j.at("rounds").get<std::size_t>();
    o.min_samples_leaf = j.at("min_samples_leaf").get<std::size_t>();
    o.max_depth = optional_from<std::size_t>(j, "max_depth");
    o.min_variance_split = j.at("min_variance_split").get<double>();
    o.reference = j.at("reference").get<std::string>();
    o.keys = j.at("keys").get<std::vector<std::string>>();
    o.bins = j.at("bins").get<std::size_t>();
    o.weighting = j.at("weighting").get<std::string>();
    o.limit_exhaustive = j.at("limit_exhaustive").get<std::size_t>();
    return o;
  });
}

struct Input {
  std::string role;
  std::string path;
};

struct Invocation {
  std::string command;
  std::vector<Input> inputs;
  Options options;

  const std::string *find(const std::string &role) const {
    for (const auto &in : inputs)
      if (in.role == role)
        return &in.path;
    return nullptr;
  }
  const std::string &require(const std::string &role) const {
    if (auto p = find(role))
      return *p;
    throw InvalidArgument(command + ": missing input '" + role + "'");
  }
  std::vector<std::string> all(const std::string &role) const {
    std::vector<std::string> out;
    for (const auto &in : inputs)
      if (in.role == role)
        out.push_back(in.path);
    return out;
  }
};

// Output file name and its full content, in emission order.
using Outputs = std::vector<std::pair<std::string, std::string>>;

// ---------------------------------------------------------------------------
// Shared helpers

inline IlpInstance load_ilp(const std::string &path) {
  return io::ilp_from_json(io::read_json_file(path));
}
inline BinaryEncoding load_encoding(const std::string &path) {
  return io::encoding_from_json(io::read_json_file(path));
}
inline QuboProblem load_qubo(const std::string &path) {
  return io::qubo_from_json(io::read_json_file(path));
}

// "key=value"; integers and numbers keep their type.
inline std::pair<std::string, ParamValue> parse_label(const std::string &text) {
  auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0)
    throw InvalidArgument("label '" + text + "' must look like key=value");
  auto key = text.substr(0, eq), value = text.substr(eq + 1);
  try {
    std::size_t used = 0;
    long long i = std::stoll(value, &used);
    if (used == value.size())
      return {key, static_cast<std::int64_t>(i)};
  } catch (const std::exception &) {
  }
  try {
    std::size_t used = 0;
    double d = std::stod(value, &used);
    if (used == value.size())
      return {key, d};
  } catch (const std::exception &) {
  }
  return {key, value};
}

// Lowest objective, then smallest squared slack residual, then smallest index,
// over all feasible encodings.
inline Bits encoded_optimum(const IlpInstance &ilp, const BinaryEncoding &enc,
                            std::size_t limit) {
  auto census = enumerate_feasible(ilp, enc, limit, true);
  if (census.vectors.empty())
    throw Infeasible("no feasible encoding exists; pass --reference explicitly");
  const auto rows = ilp.constraints();
  std::optional<std::pair<Rational, Rational>> best;
  Bits best_bits;
  for (const auto &q : census.vectors) {
    auto d = enc.decode(q);
    Rational obj = objective(ilp, d.x), resid(0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      Rational v = row_residual(rows[r], d.x);
      if (auto sp = enc.slack_span_for_row(r))
        v += d.s[*sp - enc.n_vars()];
      resid += v * v;
    }
    std::pair<Rational, Rational> key{obj, resid};
    if (!best || key < *best) {
      best = key;
      best_bits = q;
    }
  }
  return best_bits;
}

inline Bits resolve_reference(const Options &o, const IlpInstance &ilp,
                              const BinaryEncoding &enc) {
  if (o.reference.empty())
    return encoded_optimum(ilp, enc, o.limit_exhaustive);
  auto ref = bits_from_string(o.reference);
  if (ref.size() != enc.n_q())
    throw InvalidArgument("--reference has " + std::to_string(ref.size()) + " bits, need " +
                          std::to_string(enc.n_q()));
  return ref;
}

inline HammingWeighting parse_weighting(const std::string &w) {
  if (w == "occurrences")
    return HammingWeighting::Occurrences;
  if (w == "distinct")
    return HammingWeighting::Distinct;
  throw InvalidArgument("weighting must be 'occurrences' or 'distinct', got '" + w + "'");
}

inline json line_fit_json(const std::optional<LineFit> &f) {
  if (!f)
    return nullptr;
  return {{"slope", f->slope}, {"intercept", f->intercept}};
}

// ---------------------------------------------------------------------------
// Commands

inline Outputs cmd_trivial(const Invocation &inv) {
  auto ilp = trivial_ilp();
  auto enc = build_encoding(ilp, inv.options.var_bits, inv.options.slack_bits);
  return {{"ilp.json", io::dump(io::to_json(ilp))},
          {"encoding.json", io::dump(io::to_json(enc))}};
}

inline Outputs cmd_netgen(const Invocation &inv) {
  const auto &o = inv.options;
  Topology topo = three_node_default();
  if (auto p = inv.find("topology"))
    topo = io::topology_from_json(io::read_json_file(*p));
  NetworkParams params = default_params(topo);
  if (auto p = inv.find("params"))
    params = io::params_from_json(io::read_json_file(*p), topo);
  if (o.w_bits)
    params.w_bits = *o.w_bits;
  if (o.reach_km)
    params.reach_km = *o.reach_km;
  if (o.max_sections)
    params.max_sections_per_path = *o.max_sections;
  params.validate(topo);

  auto net = build_network_ilp(topo, params);
  auto enc = network_encoding(net);
  json sections = json::array();
  for (std::size_t c = 0; c < net.sections.size(); ++c) {
    json nodes = json::array();
    for (auto v : net.sections[c].nodes)
      nodes.push_back(topo.nodes[v]);
    sections.push_back({{"id", c}, {"nodes", nodes}, {"length_km", net.sections[c].length_km}});
  }
  json network{{"topology", io::to_json(topo)},
               {"params", io::to_json(params, topo)},
               {"sections", sections},
               {"n_vars", net.ilp.n_vars()},
               {"n_q", enc.n_q()}};
  json solution;
  try {
    auto sol = exact_solve(net, kDefaultCombinationLimit);
    solution = sol ? io::to_json(*sol) : json{{"feasible", false}};
    if (sol)
      solution["feasible"] = true;
  } catch (const Refusal &e) {
    solution = {{"refused", e.what()}};
  }
  return {{"network.json", io::dump(network)},
          {"ilp.json", io::dump(io::to_json(net.ilp))},
          {"encoding.json", io::dump(io::to_json(enc))},
          {"var_map.json", io::dump(io::var_map_to_json(net))},
          {"solution.json", io::dump(solution)}};
}

inline Outputs cmd_compile(const Invocation &inv) {
  auto ilp = load_ilp(inv.require("ilp"));
  auto enc = load_encoding(inv.require("encoding"));
  auto qubo = build_qubo(ilp, enc, inv.options.penalty);
  auto ising = to_ising(qubo);
  return {{"qubo.json", io::dump(io::to_json(qubo))},
          {"ising.json", io::dump(io::to_json(ising))}};
}

inline Outputs cmd_sample(const Invocation &inv) {
  const auto &o = inv.options;
  auto qubo = load_qubo(inv.require("qubo"));
  SampleSet set;
  if (o.mode == "brute") {
    set = brute_force_sample(qubo, o.limit_exhaustive);
  } else if (o.mode == "sa") {
    AnnealConfig cfg;
    cfg.reads = o.reads;
    cfg.sweeps = o.sweeps;
    cfg.beta_start = o.beta_start;
    cfg.beta_end = o.beta_end;
    cfg.seed = o.seed;
    for (const auto &l : o.labels)
      cfg.labels.insert(parse_label(l));
    set = simulated_anneal(qubo, cfg);
  } else {
    throw InvalidArgument("sample mode must be 'brute' or 'sa', got '" + o.mode + "'");
  }
  return {{"samples.jsonl", sampleset_to_text(set)}};
}

inline Outputs cmd_ingest(const Invocation &inv) {
  std::optional<QuboProblem> qubo;
  if (auto p = inv.find("qubo"))
    qubo = load_qubo(*p);
  auto set = ingest_sampleset(inv.require("samples"), qubo ? &*qubo : nullptr);
  std::uint64_t mismatches = 0;
  for (const auto &r : set.records())
    mismatches += r.energy_mismatch ? 1 : 0;
  json summary{{"n", set.n()},
               {"problem_digest", set.problem_digest()},
               {"sampler", set.meta().sampler},
               {"records", set.records().size()},
               {"n_samples", set.n_samples()},
               {"energy_mismatches", mismatches}};
  return {{"ingest.json", io::dump(summary)}, {"samples.jsonl", sampleset_to_text(set)}};
}

inline Outputs cmd_metrics(const Invocation &inv) {
  const auto &o = inv.options;
  auto set = ingest_sampleset(inv.require("samples"));
  auto ilp = load_ilp(inv.require("ilp"));
  auto enc = load_encoding(inv.require("encoding"));
  auto ref = resolve_reference(o, ilp, enc);
  MetricsOptions mo;
  mo.energy_bins = o.bins;
  mo.weighting = parse_weighting(o.weighting);
  auto r = compute_metrics(set, ilp, enc, ref, mo);

  std::string cdf = "distance,baseline,observed\n";
  std::uint64_t cum = 0;
  for (std::size_t d = 0; d <= enc.n_q(); ++d) {
    cum += r.hamming_histogram.all[d];
    double observed = r.n_samples == 0 ? 0.0
                                       : static_cast<double>(cum) /
                                             static_cast<double>(r.n_samples);
    cdf += std::to_string(d) + "," + format_number(cdf_baseline(enc.n_q(), d)) + "," +
           format_number(observed) + "\n";
  }
  json report{{"n_samples", r.n_samples},
              {"n_feasible", r.n_feasible},
              {"feasibility_ratio", r.feasibility_ratio},
              {"independent_feasible", r.independent_feasible},
              {"mean_hamming", r.mean_hamming},
              {"reference", to_string(ref)},
              {"energy_vs_hamming",
               {{"all", line_fit_json(r.regression.all)},
                {"feasible", line_fit_json(r.regression.feasible)},
                {"infeasible", line_fit_json(r.regression.infeasible)}}}};
  return {{"metrics.json", io::dump(report)},
          {"hamming_histogram.csv", hamming_histogram_csv(r.hamming_histogram)},
          {"energy_histogram.csv", energy_histogram_csv(r.energy_histogram)},
          {"hamming_cdf.csv", cdf}};
}

inline Outputs cmd_sweep(const Invocation &inv) {
  const auto &o = inv.options;
  auto paths = inv.all("samples");
  if (paths.empty())
    throw InvalidArgument("sweep: no sample sets matched");
  if (o.keys.empty())
    throw InvalidArgument("sweep: give at least one --key");
  auto ilp = load_ilp(inv.require("ilp"));
  auto enc = load_encoding(inv.require("encoding"));
  auto ref = resolve_reference(o, ilp, enc);
  std::vector<SampleSet> sets;
  sets.reserve(paths.size());
  for (const auto &p : paths)
    sets.push_back(ingest_sampleset(p));
  std::vector<SweepInput> inputs;
  for (std::size_t i = 0; i < sets.size(); ++i)
    inputs.push_back({paths[i], &sets[i]});
  auto table = sweep_table(inputs, o.keys, ilp, enc, ref, parse_weighting(o.weighting));
  return {{"sweep.csv", sweep_csv(table)}};
}

inline Outputs cmd_expand(const Invocation &inv) {
  const auto &o = inv.options;
  auto set = ingest_sampleset(inv.require("samples"));
  auto ilp = load_ilp(inv.require("ilp"));
  auto enc = load_encoding(inv.require("encoding"));
  auto qubo = load_qubo(inv.require("qubo"));
  if (o.rounds < 1)
    throw InvalidArgument("expand: rounds must be >= 1");

  TreeHyperparams hp;
  hp.min_samples_leaf = o.min_samples_leaf;
  hp.max_depth = o.max_depth;
  hp.min_variance_split = o.min_variance_split;
  ExpansionConfig cfg;
  cfg.round_lo = o.round_lo;
  cfg.round_hi = o.round_hi;
  cfg.max_enum_bits = o.max_enum_bits;
  cfg.validate();

  auto training = training_from_sampleset(set, ilp, enc);
  auto run = expand_iteratively(training, o.rounds, hp, cfg, qubo, ilp, enc);

  std::size_t fresh = 0;
  for (const auto &r : run.rounds)
    fresh += r.new_feasible;
  const std::size_t first_new = run.feasible.size() - fresh;
  std::vector<SampleRecord> records;
  std::size_t pos = first_new;
  for (const auto &r : run.rounds) {
    for (std::size_t k = 0; k < r.new_feasible; ++k, ++pos) {
      SampleRecord rec;
      rec.bits = run.feasible[pos];
      rec.energy = qubo.energy(rec.bits);
      rec.run_params["round"] = static_cast<std::int64_t>(r.round);
      records.push_back(std::move(rec));
    }
  }
  SamplerMeta meta{"dt_expand",
                   {{"rounds", static_cast<std::int64_t>(o.rounds)},
                    {"round_lo", o.round_lo},
                    {"round_hi", o.round_hi},
                    {"min_samples_leaf", static_cast<std::int64_t>(o.min_samples_leaf)}}};
  SampleSet found(enc.n_q(), qubo_digest(qubo), std::move(meta), std::move(records));

  std::string pairs = "e_in,e_out,query_feasible,feasible,count\n";
  std::vector<WeightedPoint> pts;
  for (const auto &p : run.last_result.pairs) {
    pairs += format_number(p.e_in) + "," + format_number(p.e_out) + "," +
             (p.query_feasible ? "1," : "0,") + (p.feasible ? "1," : "0,") +
             std::to_string(p.count) + "\n";
    pts.push_back({p.e_in, p.e_out, static_cast<double>(p.count)});
  }
  json rounds = json::array();
  for (const auto &r : run.rounds)
    rounds.push_back({{"round", r.round},
                      {"training_size", r.training_size},
                      {"new_feasible", r.new_feasible},
                      {"known_feasible", r.known_feasible}});
  json refusals = json::array();
  for (const auto &r : run.last_result.refusals)
    refusals.push_back({{"query", r.query},
                        {"energy", r.energy},
                        {"feasible", r.feasible},
                        {"reason", r.reason}});
  json summary{{"training_vectors", training.size()},
               {"new_feasible", fresh},
               {"known_feasible", run.feasible.size()},
               {"rounds", rounds},
               {"last_round",
                {{"queries", run.last_result.queries},
                 {"candidates", run.last_result.candidates},
                 {"feasible_candidates", run.last_result.feasible_candidates},
                 {"refusals", refusals}}},
               {"e_in_e_out_fit", line_fit_json(fit_line(pts))}};
  return {{"tree.json", io::dump(io::to_json(run.last_tree))},
          {"new_feasible.jsonl", sampleset_to_text(found)},
          {"energy_pairs.csv", pairs},
          {"expansion.json", io::dump(summary)}};
}

inline Outputs cmd_skgraph(const Invocation &inv) {
  const auto &o = inv.options;
  auto ising = io::ising_from_json(io::read_json_file(inv.require("ising")));
  auto graph = build_sk(ising);
  auto caps = enumerate_cuts(graph, o.limit_exhaustive);

  std::string spectrum = "cut,bits,capacity,energy\n";
  std::uint64_t best_max = 0;
  for (std::uint64_t k = 0; k < caps.size(); ++k) {
    auto s = cut_of_index(graph, k);
    spectrum += std::to_string(k) + "," + to_string(bits_of_spin(spins_of_cut(graph, s))) +
                "," + format_number(caps[k]) + "," +
                format_number(energy_from_capacity(graph, caps[k], ising.g())) + "\n";
    if (caps[k] > caps[best_max] + 1e-9)
      best_max = k;
  }
  std::string hist = "capacity,count\n";
  for (const auto &b : cut_spectrum(caps))
    hist += format_number(b.capacity) + "," + std::to_string(b.count) + "\n";

  // The ground state is a minimum cut of the sign-reversed graph.
  auto reversed = build_sk(ising, SkSign::Reversed);
  auto mc = min_cut_brute(reversed, o.limit_exhaustive);
  auto describe = [&](const SkGraph &g, const CutSet &s, double cap) {
    json nodes = json::array();
    for (std::size_t v = 0; v < s.size(); ++v)
      if (s[v])
        nodes.push_back(v);
    auto bits = bits_of_spin(spins_of_cut(g, s));
    return json{{"nodes", nodes},
                {"capacity", cap},
                {"bits", to_string(bits)},
                {"energy", energy_from_capacity(g, cap, ising.g())}};
  };
  json cuts{{"min_cut_reversed", describe(reversed, mc.set, mc.capacity)},
            {"max_cut", describe(graph, cut_of_index(graph, best_max), caps[best_max])},
            {"total_weight", graph.total_weight()},
            {"g", ising.g()}};
  return {{"graph.txt", io::sk_edge_list(graph)},
          {"spectrum.csv", spectrum},
          {"cut_histogram.csv", hist},
          {"mincut.json", io::dump(cuts)}};
}

inline Outputs dispatch(const Invocation &inv) {
  const auto &c = inv.command;
  if (c == "trivial")
    return cmd_trivial(inv);
  if (c == "netgen")
    return cmd_netgen(inv);
  if (c == "compile")
    return cmd_compile(inv);
  if (c == "sample")
    return cmd_sample(inv);
  if (c == "ingest")
    return cmd_ingest(inv);
  if (c == "metrics")
    return cmd_metrics(inv);
  if (c == "sweep")
    return cmd_sweep(inv);
  if (c == "expand")
    return cmd_expand(inv);
  if (c == "skgraph")
    return cmd_skgraph(inv);
  throw InvalidArgument("unknown command '" + c + "'");
}

// ---------------------------------------------------------------------------
// Manifests

inline json input_digests(const Invocation &inv) {
  json out = json::array();
  for (const auto &in : inv.inputs)
    out.push_back({{"role", in.role}, {"path", in.path}, {"digest", file_digest(in.path)}});
  return out;
}

inline json make_manifest(const Invocation &inv, const json &inputs, const Outputs &outs) {
  json outputs = json::array();
  for (const auto &[name, text] : outs)
    outputs.push_back({{"file", name}, {"digest", digest(text)}});
  return {{"tool", "qopt"},
          {"version", kVersion},
          {"command", inv.command},
          {"seed", inv.options.seed},
          {"inputs", inputs},
          {"config", to_json(inv.options)},
          {"outputs", outputs}};
}

inline void ensure_dir(const std::string &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw IoError("cannot create output directory '" + dir + "'" +
                  (ec ? ": " + ec.message() : std::string()));
}

inline std::string join_path(const std::string &dir, const std::string &name) {
  return (std::filesystem::path(dir) / name).string();
}

// Runs the command, writes its outputs and manifest.json into out_dir, and
// returns the manifest.
inline json run(const Invocation &inv, const std::string &out_dir) {
  auto inputs = input_digests(inv);
  auto outs = dispatch(inv);
  ensure_dir(out_dir);
  auto manifest = make_manifest(inv, inputs, outs);
  for (const auto &[name, text] : outs)
    io::write_text_file(join_path(out_dir, name), text);
  io::write_text_file(join_path(out_dir, "manifest.json"), io::dump(manifest));
  return manifest;
}

inline Invocation invocation_from_manifest(const json &m) {
  return io::schema("manifest", [&] {
    Invocation inv;
    inv.command = m.at("command").get<std::string>();
    for (const auto &in : m.at("inputs"))
      inv.inputs.push_back({in.at("role").get<std::string>(), in.at("path").get<std::string>()});
    inv.options = options_from_json(m.at("config"));
    return inv;
  });
}

struct ReplayReport {
  json manifest;
  std::vector<std::string> mismatched;
};

// Re-runs a manifest into out_dir. Inputs must still match their recorded
// digests; any output whose digest differs is listed in the report.
inline ReplayReport replay(const std::string &manifest_path, const std::string &out_dir) {
  auto recorded = io::read_json_file(manifest_path);
  auto inv = invocation_from_manifest(recorded);
  for (const auto &in : recorded.at("inputs")) {
    auto path = in.at("path").get<std::string>();
    if (file_digest(path) != in.at("digest").get<std::string>())
      throw Refusal("replay: input '" + path + "' changed since the manifest was written");
  }
  ReplayReport rep;
  rep.manifest = run(inv, out_dir);
  const auto &before = recorded.at("outputs");
  const auto &after = rep.manifest.at("outputs");
  for (std::size_t i = 0; i < std::max(before.size(), after.size()); ++i) {
    if (i >= before.size() || i >= after.size() || before[i] != after[i])
      rep.mismatched.push_back(i < after.size() ? after[i].at("file").get<std::string>()
                                                : before[i].at("file").get<std::string>());
  }
  return rep;
}

} // namespace qopt::cli

#endif // QOPT_COMMANDS_HPP_INCLUDED
