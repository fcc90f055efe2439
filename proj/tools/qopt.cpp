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

#include <glob.h>

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qopt/commands.hpp"
#include "qopt/error.hpp"

namespace {

using qopt::cli::Input;
using qopt::cli::Invocation;
using qopt::cli::Options;

std::vector<std::string> expand_glob(const std::string &pattern) {
  glob_t g{};
  int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
  std::vector<std::string> out;
  if (rc == 0)
    for (std::size_t i = 0; i < g.gl_pathc; ++i)
      out.emplace_back(g.gl_pathv[i]);
  globfree(&g);
  if (rc != 0 && rc != GLOB_NOMATCH)
    throw qopt::IoError("cannot expand '" + pattern + "'");
  if (out.empty())
    throw qopt::IoError("no files match '" + pattern + "'");
  return out;
}

struct Sub {
  explicit Sub(CLI::App *a) : app(a) {}
  CLI::App *app = nullptr;
  std::string out;
  std::vector<std::pair<std::string, std::string>> files; // role, path
};

void add_out(Sub &s) {
  s.app->add_option("-o,--out", s.out, "Output directory")->required();
}

void add_common(CLI::App *app, Options &o) {
  app->add_option("--seed", o.seed, "Master random seed");
  app->add_option("--limit-exhaustive", o.limit_exhaustive,
                  "Largest bit count enumerated exhaustively");
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"qopt: ILP to QUBO pipeline, samplers and solution analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qopt::cli::kVersion);

  Options o;
  std::string mode = "sa";
  std::optional<double> beta_end;
  std::optional<std::size_t> w_bits, max_sections, max_depth;
  std::optional<double> reach_km;
  std::string topology, params, ilp, encoding, qubo, ising, samples, manifest;
  std::vector<std::string> sample_globs;

  Sub trivial{app.add_subcommand("trivial", "Write the two-variable example ILP and encoding")};
  add_out(trivial);
  add_common(trivial.app, o);
  trivial.app->add_option("--var-bits", o.var_bits, "Bits per decision variable");
  trivial.app->add_option("--slack-bits", o.slack_bits, "Bits per slack variable");

  Sub netgen{app.add_subcommand("netgen", "Build an optical-network channel ILP")};
  add_out(netgen);
  add_common(netgen.app, o);
  netgen.app->add_option("--topology", topology, "Topology JSON (default: 3-node triangle)")
      ->check(CLI::ExistingFile);
  netgen.app->add_option("--params", params, "Parameters JSON")->check(CLI::ExistingFile);
  netgen.app->add_option("--w-bits", w_bits, "Bits per channel count");
  netgen.app->add_option("--reach-km", reach_km, "Transceiver optical reach");
  netgen.app->add_option("--max-sections", max_sections, "Sections per transmission path");

  Sub compile{app.add_subcommand("compile", "Turn an ILP into QUBO and Ising form")};
  add_out(compile);
  add_common(compile.app, o);
  compile.app->add_option("--ilp", ilp)->required()->check(CLI::ExistingFile);
  compile.app->add_option("--encoding", encoding)->required()->check(CLI::ExistingFile);
  compile.app->add_option("-p,--penalty", o.penalty, "Penalty weight p > 0");

  Sub sample{app.add_subcommand("sample", "Sample a QUBO by enumeration or annealing")};
  add_out(sample);
  add_common(sample.app, o);
  sample.app->add_option("--qubo", qubo)->required()->check(CLI::ExistingFile);
  sample.app->add_option("--mode", mode, "brute or sa")->check(CLI::IsMember({"brute", "sa"}));
  sample.app->add_option("--reads", o.reads, "Annealing reads");
  sample.app->add_option("--sweeps", o.sweeps, "Sweeps per read");
  sample.app->add_option("--beta-start", o.beta_start, "Initial inverse temperature");
  sample.app->add_option("--beta-end", beta_end, "Final inverse temperature");
  sample.app->add_option("--label", o.labels, "key=value copied onto every record");

  Sub ingest{app.add_subcommand("ingest", "Validate a sample-set file (plain or gzip)")};
  add_out(ingest);
  add_common(ingest.app, o);
  ingest.app->add_option("--samples", samples)->required()->check(CLI::ExistingFile);
  ingest.app->add_option("--qubo", qubo, "Recheck energies against this QUBO")
      ->check(CLI::ExistingFile);

  auto add_analysis = [&](Sub &s) {
    s.app->add_option("--ilp", ilp)->required()->check(CLI::ExistingFile);
    s.app->add_option("--encoding", encoding)->required()->check(CLI::ExistingFile);
    s.app->add_option("--reference", o.reference,
                      "Reference bit string (default: the encoded optimum)");
    s.app->add_option("--weighting", o.weighting, "occurrences or distinct")
        ->check(CLI::IsMember({"occurrences", "distinct"}));
  };

  Sub metrics{app.add_subcommand("metrics", "Feasibility, Hamming and energy statistics")};
  add_out(metrics);
  add_common(metrics.app, o);
  add_analysis(metrics);
  metrics.app->add_option("--samples", samples)->required()->check(CLI::ExistingFile);
  metrics.app->add_option("--bins", o.bins, "Energy histogram bins");

  Sub sweep{app.add_subcommand("sweep", "Tabulate metrics over a parameter grid")};
  add_out(sweep);
  add_common(sweep.app, o);
  add_analysis(sweep);
  sweep.app->add_option("--samples", sample_globs, "Sample-set files or glob patterns")
      ->required();
  sweep.app->add_option("--key", o.keys, "Parameter keys forming the grid")->required();

  Sub expand{app.add_subcommand("expand", "Grow new feasible solutions with a regression tree")};
  add_out(expand);
  add_common(expand.app, o);
  expand.app->add_option("--samples", samples)->required()->check(CLI::ExistingFile);
  expand.app->add_option("--ilp", ilp)->required()->check(CLI::ExistingFile);
  expand.app->add_option("--encoding", encoding)->required()->check(CLI::ExistingFile);
  expand.app->add_option("--qubo", qubo)->required()->check(CLI::ExistingFile);
  expand.app->add_option("--rounds", o.rounds, "Train/expand rounds");
  expand.app->add_option("--round-lo", o.round_lo, "Components below this round to 0");
  expand.app->add_option("--round-hi", o.round_hi, "Components above this round to 1");
  expand.app->add_option("--max-enum-bits", o.max_enum_bits,
                         "Largest fractional band enumerated per query");
  expand.app->add_option("--min-samples-leaf", o.min_samples_leaf);
  expand.app->add_option("--max-depth", max_depth);
  expand.app->add_option("--min-variance-split", o.min_variance_split);

  Sub skgraph{app.add_subcommand("skgraph", "SK graph, cut spectrum and minimum cut")};
  add_out(skgraph);
  add_common(skgraph.app, o);
  skgraph.app->add_option("--ising", ising)->required()->check(CLI::ExistingFile);

  Sub replay{app.add_subcommand("replay", "Re-run a manifest and compare output digests")};
  add_out(replay);
  replay.app->add_option("manifest", manifest)->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  try {
    if (replay.app->parsed()) {
      auto rep = qopt::cli::replay(manifest, replay.out);
      if (!rep.mismatched.empty()) {
        for (const auto &f : rep.mismatched)
          std::cerr << "qopt: replay: " << f << " differs\n";
        return 1;
      }
      std::cout << "replay: all outputs identical\n";
      return 0;
    }

    o.mode = mode;
    o.beta_end = beta_end;
    o.w_bits = w_bits;
    o.reach_km = reach_km;
    o.max_sections = max_sections;
    o.max_depth = max_depth;

    Invocation inv;
    inv.options = o;
    Sub *chosen = nullptr;
    for (auto *s : {&trivial, &netgen, &compile, &sample, &ingest, &metrics, &sweep, &expand,
                    &skgraph})
      if (s->app->parsed())
        chosen = s;
    inv.command = chosen->app->get_name();
    auto add = [&](const char *role, const std::string &path) {
      if (!path.empty())
        inv.inputs.push_back(Input{role, path});
    };
    add("topology", topology);
    add("params", params);
    add("samples", samples);
    for (const auto &pat : sample_globs)
      for (const auto &path : expand_glob(pat))
        add("samples", path);
    add("ilp", ilp);
    add("encoding", encoding);
    add("qubo", qubo);
    add("ising", ising);

    auto m = qopt::cli::run(inv, chosen->out);
    for (const auto &f : m.at("outputs"))
      std::cout << qopt::cli::join_path(chosen->out, f.at("file").get<std::string>()) << "\n";
    return 0;
  } catch (const qopt::Refusal &e) {
    std::cerr << "qopt: refused: " << e.what() << "\n";
    return 1;
  } catch (const qopt::Infeasible &e) {
    std::cerr << "qopt: infeasible: " << e.what() << "\n";
    return 1;
  } catch (const qopt::ParseError &e) {
    std::cerr << "qopt: parse error: " << e.what() << "\n";
    return 2;
  } catch (const qopt::IoError &e) {
    std::cerr << "qopt: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument &e) {
    std::cerr << "qopt: invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "qopt: " << e.what() << "\n";
    return 2;
  }
}
