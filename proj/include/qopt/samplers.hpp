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

#ifndef QOPT_SAMPLERS_HPP_INCLUDED
#define QOPT_SAMPLERS_HPP_INCLUDED

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <zlib.h>

#include <json.hpp>

#include "qopt/bits.hpp"
#include "qopt/digest.hpp"
#include "qopt/error.hpp"
#include "qopt/parallel.hpp"
#include "qopt/qubo_ising.hpp"

namespace qopt {

using ParamValue = std::variant<std::int64_t, double, std::string>;
using Params = std::map<std::string, ParamValue>;

inline std::string param_to_string(const ParamValue &v) {
  if (auto i = std::get_if<std::int64_t>(&v))
    return std::to_string(*i);
  if (auto d = std::get_if<double>(&v)) {
    nlohmann::json j = *d;
    return j.dump();
  }
  return std::get<std::string>(v);
}

struct SampleRecord {
  Bits bits;
  double energy = 0.0;
  std::uint64_t occurrences = 1;
  Params run_params;
  // Set on ingestion when the stored energy disagrees with the recomputed one.
  bool energy_mismatch = false;
};

struct SamplerMeta {
  std::string sampler;
  Params config;
};

class SampleSet {
public:
  SampleSet() = default;

  SampleSet(std::size_t n, std::string problem_digest, SamplerMeta meta,
            std::vector<SampleRecord> records)
      : n_(n), digest_(std::move(problem_digest)), meta_(std::move(meta)),
        records_(std::move(records)) {
    for (std::size_t r = 0; r < records_.size(); ++r) {
      if (records_[r].bits.size() != n_)
        throw InvalidArgument("record " + std::to_string(r) + " has " +
                              std::to_string(records_[r].bits.size()) +
                              " bits, sample set has " + std::to_string(n_));
      if (!is_binary(records_[r].bits))
        throw InvalidArgument("record " + std::to_string(r) + " is not binary");
      if (records_[r].occurrences < 1)
        throw InvalidArgument("record " + std::to_string(r) + " has zero occurrences");
    }
  }

  std::size_t n() const noexcept { return n_; }
  const std::string &problem_digest() const noexcept { return digest_; }
  const SamplerMeta &meta() const noexcept { return meta_; }
  const std::vector<SampleRecord> &records() const noexcept { return records_; }
  bool empty() const noexcept { return records_.empty(); }

  std::uint64_t n_samples() const noexcept {
    std::uint64_t total = 0;
    for (const auto &r : records_)
      total += r.occurrences;
    return total;
  }

private:
  std::size_t n_ = 0;
  std::string digest_;
  SamplerMeta meta_;
  std::vector<SampleRecord> records_;
};

// One record per bit vector, in lexicographic order.
inline SampleSet brute_force_sample(const QuboProblem &problem,
                                    std::size_t limit = kDefaultExhaustiveLimit) {
  const auto n = problem.n();
  require_exhaustive(n, limit, "brute_force_sample");
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<SampleRecord> records(total);
  parallel_chunks(total, worker_count(), [&](std::size_t, std::uint64_t begin,
                                             std::uint64_t end) {
    for (auto k = begin; k < end; ++k) {
      auto &rec = records[k];
      rec.bits = bits_from_index(k, n);
      rec.energy = problem.energy(rec.bits);
    }
  });
  return SampleSet(n, qubo_digest(problem), {"brute_force", {}}, std::move(records));
}

// ---------------------------------------------------------------------------
// Simulated annealing

struct AnnealConfig {
  std::size_t reads = 1;
  std::size_t sweeps = 1000;
  // Inverse temperatures of the geometric schedule; beta_end defaults to
  // 10 / (mean absolute nonzero Q entry).
  double beta_start = 0.1;
  std::optional<double> beta_end;
  std::uint64_t seed = 0;
  // Copied onto every record, e.g. {"anneal_time_us", sweeps}.
  Params labels;
};

inline double default_beta_end(const QuboProblem &problem) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto &t : problem.upper_entries()) {
    sum += std::abs(t.value);
    ++count;
  }
  double typical = count == 0 ? 1.0 : sum / static_cast<double>(count);
  return 10.0 / typical;
}

namespace detail {

inline double unit_uniform(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline Spins anneal_one(const IsingProblem &ising, std::span<const double> betas,
                        std::uint64_t stream) {
  const auto n = ising.n();
  std::mt19937_64 rng(stream);
  Spins s(n);
  for (auto &v : s)
    v = (rng() & 1u) ? std::int8_t{1} : std::int8_t{-1};
  std::vector<double> field(n, 0.0); // sum_j J_ij s_j
  for (std::size_t i = 0; i < n; ++i) {
    auto r = ising.row(i);
    for (std::size_t j = 0; j < n; ++j)
      field[i] += r[j] * s[j];
  }
  for (double beta : betas) {
    for (std::size_t i = 0; i < n; ++i) {
      double delta = -2.0 * s[i] * (2.0 * field[i] + ising.h()[i]);
      bool accept = delta <= 0.0;
      if (!accept) {
        double u = unit_uniform(rng);
        accept = std::isfinite(beta) && u < std::exp(-beta * delta);
      }
      if (!accept)
        continue;
      double step = -2.0 * s[i];
      s[i] = static_cast<std::int8_t>(-s[i]);
      auto r = ising.row(i);
      for (std::size_t j = 0; j < n; ++j)
        field[j] += r[j] * step;
    }
  }
  return s;
}

} // namespace detail

// Independent single-spin-flip Metropolis anneals on the Ising form. Read k
// draws from an RNG stream derived from (seed, k), so the output does not
// depend on the worker count.
inline SampleSet simulated_anneal(const QuboProblem &problem, const AnnealConfig &cfg) {
  if (cfg.reads < 1)
    throw InvalidArgument("simulated_anneal: reads must be >= 1");
  if (cfg.sweeps < 1)
    throw InvalidArgument("simulated_anneal: sweeps must be >= 1");
  const double b0 = cfg.beta_start;
  const double b1 = cfg.beta_end.value_or(default_beta_end(problem));
  if (!(b0 > 0.0) || !std::isfinite(b0) || std::isnan(b1) || !(b0 < b1))
    throw InvalidArgument("simulated_anneal: schedule needs 0 < beta_start < beta_end");

  std::vector<double> betas(cfg.sweeps);
  if (cfg.sweeps == 1) {
    betas[0] = b1;
  } else {
    for (std::size_t t = 0; t < cfg.sweeps; ++t) {
      double frac = static_cast<double>(t) / static_cast<double>(cfg.sweeps - 1);
      betas[t] = std::isinf(b1) ? (t == 0 ? b0 : b1) : b0 * std::pow(b1 / b0, frac);
    }
  }

  Params run_params = cfg.labels;
  run_params["sweeps"] = static_cast<std::int64_t>(cfg.sweeps);
  run_params["beta_start"] = b0;
  run_params["beta_end"] = std::isinf(b1) ? ParamValue(std::string("inf")) : ParamValue(b1);
  run_params["seed"] = static_cast<std::int64_t>(cfg.seed);

  const auto ising = to_ising(problem);
  std::vector<SampleRecord> records(cfg.reads);
  parallel_chunks(cfg.reads, worker_count(), [&](std::size_t, std::uint64_t begin,
                                                 std::uint64_t end) {
    for (auto k = begin; k < end; ++k) {
      auto spins = detail::anneal_one(ising, betas, stream_seed(cfg.seed, k));
      auto &rec = records[k];
      rec.bits = bits_of_spin(spins);
      rec.energy = problem.energy(rec.bits);
      rec.run_params = run_params;
    }
  });
  SamplerMeta meta{"simulated_annealing", run_params};
  meta.config["reads"] = static_cast<std::int64_t>(cfg.reads);
  return SampleSet(problem.n(), qubo_digest(problem), std::move(meta), std::move(records));
}

// ---------------------------------------------------------------------------
// Merging

// Identical (bits, run_params) records coalesce; first occurrence keeps its
// position. Meta keeps the config entries every input agrees on.
inline SampleSet merge(std::span<const SampleSet> sets) {
  if (sets.empty())
    return {};
  const auto &first = sets.front();
  SamplerMeta meta = first.meta();
  std::vector<SampleRecord> out;
  std::map<std::pair<Bits, Params>, std::size_t> seen;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const auto &set = sets[k];
    if (set.n() != first.n())
      throw InvalidArgument("merge: set " + std::to_string(k) + " has " +
                            std::to_string(set.n()) + " bits, expected " +
                            std::to_string(first.n()));
    if (set.problem_digest() != first.problem_digest())
      throw InvalidArgument("merge: set " + std::to_string(k) +
                            " was drawn from a different problem (digest " +
                            set.problem_digest() + " vs " + first.problem_digest() + ")");
    if (set.meta().sampler != meta.sampler)
      meta.sampler = "merged";
    for (auto it = meta.config.begin(); it != meta.config.end();) {
      auto other = set.meta().config.find(it->first);
      if (other == set.meta().config.end() || other->second != it->second)
        it = meta.config.erase(it);
      else
        ++it;
    }
    for (const auto &rec : set.records()) {
      auto key = std::make_pair(rec.bits, rec.run_params);
      auto [pos, inserted] = seen.emplace(std::move(key), out.size());
      if (inserted)
        out.push_back(rec);
      else
        out[pos->second].occurrences += rec.occurrences;
    }
  }
  return SampleSet(first.n(), first.problem_digest(), std::move(meta), std::move(out));
}

inline SampleSet merge(const SampleSet &a, const SampleSet &b) {
  std::vector<SampleSet> both{a, b};
  return merge(both);
}

// ---------------------------------------------------------------------------
// Sample-set file: one JSON header line {n, problem_digest, sampler, config},
// then one JSON record per line {bits, energy, occurrences, params}.

namespace detail {

inline nlohmann::json params_to_json(const Params &params) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto &[k, v] : params)
    std::visit([&](const auto &x) { j[k] = x; }, v);
  return j;
}

inline Params params_from_json(const nlohmann::json &j, std::size_t line) {
  Params out;
  if (j.is_null())
    return out;
  if (!j.is_object())
    throw ParseError("params must be an object", line);
  for (const auto &[k, v] : j.items()) {
    if (v.is_number_integer())
      out[k] = v.get<std::int64_t>();
    else if (v.is_number())
      out[k] = v.get<double>();
    else if (v.is_string())
      out[k] = v.get<std::string>();
    else
      throw ParseError("param '" + k + "' must be a number or string", line);
  }
  return out;
}

class LineReader {
public:
  explicit LineReader(const std::string &path) : file_(gzopen(path.c_str(), "rb")) {
    if (!file_)
      throw IoError("cannot open '" + path + "'");
  }
  ~LineReader() {
    if (file_)
      gzclose(file_);
  }
  LineReader(const LineReader &) = delete;
  LineReader &operator=(const LineReader &) = delete;

  bool next(std::string &line) {
    line.clear();
    char buf[4096];
    while (gzgets(file_, buf, sizeof buf)) {
      line += buf;
      if (!line.empty() && line.back() == '\n') {
        line.pop_back();
        if (!line.empty() && line.back() == '\r')
          line.pop_back();
        return true;
      }
    }
    int err = 0;
    gzerror(file_, &err);
    if (err != Z_OK && err != Z_STREAM_END)
      throw IoError("read error in compressed stream");
    return !line.empty();
  }

private:
  gzFile file_;
};

} // namespace detail

inline std::string sampleset_to_text(const SampleSet &set) {
  nlohmann::json header{{"n", set.n()},
                        {"problem_digest", set.problem_digest()},
                        {"sampler", set.meta().sampler},
                        {"config", detail::params_to_json(set.meta().config)}};
  std::string out = header.dump() + "\n";
  for (const auto &rec : set.records()) {
    nlohmann::json j{{"bits", to_string(rec.bits)},
                     {"energy", rec.energy},
                     {"occurrences", rec.occurrences},
                     {"params", detail::params_to_json(rec.run_params)}};
    out += j.dump() + "\n";
  }
  return out;
}

inline void write_sampleset(const std::string &path, const SampleSet &set) {
  auto text = sampleset_to_text(set);
  bool gz = path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
  gzFile f = gzopen(path.c_str(), gz ? "wb9" : "wbT");
  if (!f)
    throw IoError("cannot write '" + path + "'");
  int written = gzwrite(f, text.data(), static_cast<unsigned>(text.size()));
  if (gzclose(f) != Z_OK || written != static_cast<int>(text.size()))
    throw IoError("short write to '" + path + "'");
}

// Reads a plain or gzip-compressed sample-set file. With a problem attached,
// energies are recomputed and records off by more than 1e-6 are flagged.
inline SampleSet ingest_sampleset(const std::string &path,
                                  const QuboProblem *problem = nullptr) {
  detail::LineReader reader(path);
  std::string line;
  std::size_t lineno = 0;
  auto parse = [&](const std::string &text) {
    try {
      auto j = nlohmann::json::parse(text);
      if (!j.is_object())
        throw ParseError("expected a JSON object", lineno);
      return j;
    } catch (const nlohmann::json::exception &e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), lineno);
    }
  };
  std::optional<nlohmann::json> header;
  while (reader.next(line)) {
    ++lineno;
    if (line.find_first_not_of(" \t") == std::string::npos)
      continue;
    header = parse(line);
    break;
  }
  if (!header)
    throw ParseError("missing header line", lineno + 1);
  std::size_t n = 0;
  SamplerMeta meta;
  std::string digest_text;
  try {
    n = header->at("n").get<std::size_t>();
    digest_text = header->value("problem_digest", std::string());
    meta.sampler = header->value("sampler", std::string("external"));
    meta.config = detail::params_from_json(header->value("config", nlohmann::json()), lineno);
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("bad header: ") + e.what(), lineno);
  }
  if (problem && problem->n() != n)
    throw InvalidArgument("sample set has " + std::to_string(n) +
                          " bits, problem has " + std::to_string(problem->n()));

  std::vector<SampleRecord> records;
  while (reader.next(line)) {
    ++lineno;
    if (line.find_first_not_of(" \t") == std::string::npos)
      continue;
    auto j = parse(line);
    SampleRecord rec;
    try {
      auto text = j.at("bits").get<std::string>();
      if (text.size() != n)
        throw ParseError("record has " + std::to_string(text.size()) +
                         " bits, header declares " + std::to_string(n), lineno);
      rec.bits = bits_from_string(text);
      rec.energy = j.at("energy").get<double>();
      rec.occurrences = j.value("occurrences", std::uint64_t{1});
      rec.run_params = detail::params_from_json(j.value("params", nlohmann::json()), lineno);
    } catch (const nlohmann::json::exception &e) {
      throw ParseError(std::string("bad record: ") + e.what(), lineno);
    } catch (const InvalidArgument &e) {
      throw ParseError(e.what(), lineno);
    }
    if (rec.occurrences < 1)
      throw ParseError("occurrences must be >= 1", lineno);
    if (problem && std::abs(problem->energy(rec.bits) - rec.energy) > 1e-6)
      rec.energy_mismatch = true;
    records.push_back(std::move(rec));
  }
  return SampleSet(n, std::move(digest_text), std::move(meta), std::move(records));
}

} // namespace qopt

#endif // QOPT_SAMPLERS_HPP_INCLUDED
