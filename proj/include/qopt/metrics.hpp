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

#ifndef QOPT_METRICS_HPP_INCLUDED
#define QOPT_METRICS_HPP_INCLUDED

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "qopt/bits.hpp"
#include "qopt/error.hpp"
#include "qopt/ilp_model.hpp"
#include "qopt/samplers.hpp"

namespace qopt {

inline void require_same_length(std::size_t a, std::size_t b, const char *what) {
  if (a != b)
    throw InvalidArgument(std::string(what) + ": length " + std::to_string(a) +
                          " does not match " + std::to_string(b));
}

inline void require_compatible(const SampleSet &set, const BinaryEncoding &enc) {
  require_same_length(set.n(), enc.n_q(), "sample set vs encoding");
}

inline std::size_t hamming(BitsView x, BitsView y) {
  require_same_length(x.size(), y.size(), "hamming");
  std::size_t d = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    d += (x[i] ^ y[i]) & 1u;
  return d;
}

// N_feasible / N_samples, occurrence weighted. An empty set scores 0.
inline double feasibility_ratio(const SampleSet &set, const IlpInstance &ilp,
                                const BinaryEncoding &enc) {
  require_compatible(set, enc);
  std::uint64_t feasible = 0;
  for (const auto &rec : set.records())
    if (bits_feasible(ilp, enc, rec.bits))
      feasible += rec.occurrences;
  auto total = set.n_samples();
  return total == 0 ? 0.0 : static_cast<double>(feasible) / static_cast<double>(total);
}

inline std::uint64_t independent_feasible(const SampleSet &set, const IlpInstance &ilp,
                                          const BinaryEncoding &enc) {
  require_compatible(set, enc);
  std::set<Bits> distinct;
  for (const auto &rec : set.records())
    if (bits_feasible(ilp, enc, rec.bits))
      distinct.insert(rec.bits);
  return distinct.size();
}

enum class HammingWeighting { Occurrences, Distinct };

inline double mean_hamming(const SampleSet &set, BitsView reference,
                           HammingWeighting weighting = HammingWeighting::Occurrences) {
  require_same_length(set.n(), reference.size(), "mean_hamming reference");
  double sum = 0.0;
  double weight = 0.0;
  if (weighting == HammingWeighting::Occurrences) {
    for (const auto &rec : set.records()) {
      sum += static_cast<double>(hamming(rec.bits, reference) * rec.occurrences);
      weight += static_cast<double>(rec.occurrences);
    }
  } else {
    std::set<Bits> distinct;
    for (const auto &rec : set.records())
      if (distinct.insert(rec.bits).second) {
        sum += static_cast<double>(hamming(rec.bits, reference));
        weight += 1.0;
      }
  }
  return weight == 0.0 ? 0.0 : sum / weight;
}

// Counts indexed by distance 0..n, split by feasibility.
struct HammingHistogram {
  std::vector<std::uint64_t> all;
  std::vector<std::uint64_t> feasible;
  std::vector<std::uint64_t> infeasible;
};

inline HammingHistogram hamming_histogram(const SampleSet &set, BitsView reference,
                                          const IlpInstance &ilp,
                                          const BinaryEncoding &enc) {
  require_compatible(set, enc);
  require_same_length(reference.size(), set.n(), "hamming_histogram reference");
  HammingHistogram h;
  h.all.assign(set.n() + 1, 0);
  h.feasible.assign(set.n() + 1, 0);
  h.infeasible.assign(set.n() + 1, 0);
  for (const auto &rec : set.records()) {
    auto d = hamming(rec.bits, reference);
    h.all[d] += rec.occurrences;
    (bits_feasible(ilp, enc, rec.bits) ? h.feasible : h.infeasible)[d] += rec.occurrences;
  }
  return h;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n)
    return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i)
    r = r * (n - k + i) / i;
  return r;
}

// Sum_{k<=d} C(n, k) / 2^n as an exact fraction.
inline Rational cdf_baseline_exact(std::size_t n_q, std::size_t d) {
  if (d > n_q)
    throw InvalidArgument("cdf_baseline: distance " + std::to_string(d) +
                          " exceeds vector length " + std::to_string(n_q));
  if (n_q > 61)
    throw InvalidArgument("cdf_baseline_exact: vector length above 61");
  std::int64_t acc = 0;
  for (std::size_t k = 0; k <= d; ++k)
    acc += static_cast<std::int64_t>(binomial(n_q, k));
  return Rational(acc, std::int64_t{1} << n_q);
}

inline double cdf_baseline(std::size_t n_q, std::size_t d) {
  if (d > n_q)
    throw InvalidArgument("cdf_baseline: distance " + std::to_string(d) +
                          " exceeds vector length " + std::to_string(n_q));
  if (n_q <= 61)
    return to_double(cdf_baseline_exact(n_q, d));
  // lgamma route for long vectors
  double acc = 0.0;
  for (std::size_t k = 0; k <= d; ++k)
    acc += std::exp(std::lgamma(n_q + 1.0) - std::lgamma(k + 1.0) -
                    std::lgamma(n_q - k + 1.0) - static_cast<double>(n_q) * std::log(2.0));
  return std::min(acc, 1.0);
}

// ---------------------------------------------------------------------------
// Energy vs Hamming distance

struct WeightedPoint {
  double x = 0.0;
  double y = 0.0;
  double w = 1.0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Weighted least squares; nullopt when fewer than two distinct x values.
inline std::optional<LineFit> fit_line(std::span<const WeightedPoint> pts) {
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (const auto &p : pts) {
    sw += p.w;
    sx += p.w * p.x;
    sy += p.w * p.y;
  }
  if (sw <= 0.0)
    return std::nullopt;
  double mx = sx / sw, my = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (const auto &p : pts) {
    sxx += p.w * (p.x - mx) * (p.x - mx);
    sxy += p.w * (p.x - mx) * (p.y - my);
  }
  bool distinct = std::any_of(pts.begin(), pts.end(),
                              [&](const WeightedPoint &p) { return p.x != pts.front().x; });
  if (!distinct || sxx <= 0.0)
    return std::nullopt;
  double slope = sxy / sxx;
  return LineFit{slope, my - slope * mx};
}

struct EnergyHammingFit {
  std::optional<LineFit> all;
  std::optional<LineFit> feasible;
  std::optional<LineFit> infeasible;
};

inline EnergyHammingFit fit_energy_vs_hamming(const SampleSet &set, BitsView reference,
                                              const IlpInstance &ilp,
                                              const BinaryEncoding &enc) {
  require_compatible(set, enc);
  std::vector<WeightedPoint> all, feas, infeas;
  for (const auto &rec : set.records()) {
    WeightedPoint p{static_cast<double>(hamming(rec.bits, reference)), rec.energy,
                    static_cast<double>(rec.occurrences)};
    all.push_back(p);
    (bits_feasible(ilp, enc, rec.bits) ? feas : infeas).push_back(p);
  }
  return {fit_line(all), fit_line(feas), fit_line(infeas)};
}

// ---------------------------------------------------------------------------
// Energy histogram

struct EnergyBin {
  double lo = 0.0;
  double hi = 0.0;
  std::uint64_t all = 0;
  std::uint64_t feasible = 0;
  std::uint64_t infeasible = 0;
};

inline std::vector<EnergyBin> energy_histogram(const SampleSet &set, const IlpInstance &ilp,
                                               const BinaryEncoding &enc,
                                               std::size_t bins = 50) {
  require_compatible(set, enc);
  if (bins < 1)
    throw InvalidArgument("energy_histogram: need at least one bin");
  if (set.empty())
    return {};
  double lo = set.records().front().energy, hi = lo;
  for (const auto &rec : set.records()) {
    lo = std::min(lo, rec.energy);
    hi = std::max(hi, rec.energy);
  }
  double width = hi > lo ? (hi - lo) / static_cast<double>(bins) : 1.0;
  std::vector<EnergyBin> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].lo = lo + width * static_cast<double>(b);
    out[b].hi = b + 1 == bins ? std::max(hi, lo + width) : lo + width * static_cast<double>(b + 1);
  }
  for (const auto &rec : set.records()) {
    auto b = static_cast<std::size_t>((rec.energy - lo) / width);
    b = std::min(b, bins - 1);
    out[b].all += rec.occurrences;
    (bits_feasible(ilp, enc, rec.bits) ? out[b].feasible : out[b].infeasible) +=
        rec.occurrences;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Full report

struct MetricsOptions {
  std::size_t energy_bins = 50;
  HammingWeighting weighting = HammingWeighting::Occurrences;
};

struct MetricsReport {
  std::uint64_t n_samples = 0;
  std::uint64_t n_feasible = 0;
  double feasibility_ratio = 0.0;
  std::uint64_t independent_feasible = 0;
  double mean_hamming = 0.0;
  std::vector<EnergyBin> energy_histogram;
  HammingHistogram hamming_histogram;
  EnergyHammingFit regression;
};

inline MetricsReport compute_metrics(const SampleSet &set, const IlpInstance &ilp,
                                     const BinaryEncoding &enc, BitsView reference,
                                     const MetricsOptions &opts = {}) {
  MetricsReport r;
  r.n_samples = set.n_samples();
  r.feasibility_ratio = feasibility_ratio(set, ilp, enc);
  r.independent_feasible = independent_feasible(set, ilp, enc);
  r.mean_hamming = mean_hamming(set, reference, opts.weighting);
  r.energy_histogram = energy_histogram(set, ilp, enc, opts.energy_bins);
  r.hamming_histogram = hamming_histogram(set, reference, ilp, enc);
  for (auto c : r.hamming_histogram.feasible)
    r.n_feasible += c;
  r.regression = fit_energy_vs_hamming(set, reference, ilp, enc);
  return r;
}

// ---------------------------------------------------------------------------
// Parameter sweeps

// The set-level config value for `key`, else the value every record agrees on.
inline std::optional<ParamValue> lookup_param(const SampleSet &set, const std::string &key) {
  if (auto it = set.meta().config.find(key); it != set.meta().config.end())
    return it->second;
  std::optional<ParamValue> common;
  for (const auto &rec : set.records()) {
    auto it = rec.run_params.find(key);
    if (it == rec.run_params.end())
      return std::nullopt;
    if (common && *common != it->second)
      return std::nullopt;
    common = it->second;
  }
  return common;
}

struct ParamLess {
  static std::optional<double> numeric(const ParamValue &v) {
    if (auto i = std::get_if<std::int64_t>(&v))
      return static_cast<double>(*i);
    if (auto d = std::get_if<double>(&v))
      return *d;
    return std::nullopt;
  }
  bool operator()(const ParamValue &a, const ParamValue &b) const {
    auto na = numeric(a), nb = numeric(b);
    if (na && nb)
      return *na < *nb || (*na == *nb && a.index() < b.index());
    if (na || nb)
      return na.has_value();
    return std::get<std::string>(a) < std::get<std::string>(b);
  }
};

struct SweepInput {
  std::string name;
  const SampleSet *set = nullptr;
};

struct SweepStats {
  double feasibility_rate = 0.0;
  double mean_hamming = 0.0;
  std::uint64_t independent_feasible = 0;
  std::uint64_t n_samples = 0;
};

struct SweepCell {
  std::vector<ParamValue> key;
  // Absent when no set carries this key combination.
  std::optional<SweepStats> stats;
};

struct SweepTable {
  std::vector<std::string> keys;
  std::vector<SweepCell> cells;
};

// One cell per combination of the distinct observed key values (row-major in
// the order of `keys`); sets sharing a cell are pooled.
inline SweepTable sweep_table(std::span<const SweepInput> inputs,
                              const std::vector<std::string> &keys,
                              const IlpInstance &ilp, const BinaryEncoding &enc,
                              BitsView reference,
                              HammingWeighting weighting = HammingWeighting::Occurrences) {
  if (keys.empty())
    throw InvalidArgument("sweep_table: at least one grouping key is required");
  std::vector<std::set<ParamValue, ParamLess>> axes(keys.size());
  std::vector<std::vector<ParamValue>> set_keys;
  for (const auto &in : inputs) {
    std::vector<ParamValue> kv;
    for (std::size_t k = 0; k < keys.size(); ++k) {
      auto v = lookup_param(*in.set, keys[k]);
      if (!v)
        throw InvalidArgument("sweep_table: sample set '" + in.name +
                              "' does not carry key '" + keys[k] + "'");
      axes[k].insert(*v);
      kv.push_back(*v);
    }
    require_compatible(*in.set, enc);
    set_keys.push_back(std::move(kv));
  }

  SweepTable table;
  table.keys = keys;
  std::vector<std::vector<ParamValue>> axis_values;
  std::size_t cells = 1;
  for (const auto &a : axes) {
    axis_values.emplace_back(a.begin(), a.end());
    cells *= a.size();
  }
  if (inputs.empty())
    cells = 0;
  for (std::size_t c = 0; c < cells; ++c) {
    SweepCell cell;
    std::size_t rem = c;
    cell.key.resize(keys.size());
    for (std::size_t k = keys.size(); k-- > 0;) {
      cell.key[k] = axis_values[k][rem % axis_values[k].size()];
      rem /= axis_values[k].size();
    }
    std::uint64_t total = 0, feasible = 0;
    double ham_sum = 0.0, ham_weight = 0.0;
    std::set<Bits> indep, distinct;
    bool any = false;
    for (std::size_t s = 0; s < inputs.size(); ++s) {
      if (set_keys[s] != cell.key)
        continue;
      any = true;
      for (const auto &rec : inputs[s].set->records()) {
        bool ok = bits_feasible(ilp, enc, rec.bits);
        total += rec.occurrences;
        if (ok) {
          feasible += rec.occurrences;
          indep.insert(rec.bits);
        }
        auto d = static_cast<double>(hamming(rec.bits, reference));
        if (weighting == HammingWeighting::Occurrences) {
          ham_sum += d * static_cast<double>(rec.occurrences);
          ham_weight += static_cast<double>(rec.occurrences);
        } else if (distinct.insert(rec.bits).second) {
          ham_sum += d;
          ham_weight += 1.0;
        }
      }
    }
    if (any)
      cell.stats = SweepStats{
          total == 0 ? 0.0 : static_cast<double>(feasible) / static_cast<double>(total),
          ham_weight == 0.0 ? 0.0 : ham_sum / ham_weight, indep.size(), total};
    table.cells.push_back(std::move(cell));
  }
  return table;
}

// ---------------------------------------------------------------------------
// CSV rendering

inline std::string format_number(double v) {
  nlohmann::json j = v;
  return j.dump();
}

inline std::string csv_escape(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string sweep_csv(const SweepTable &table) {
  std::string out;
  for (const auto &k : table.keys)
    out += csv_escape(k) + ",";
  out += "rate,mean_hamming,independent\n";
  for (const auto &cell : table.cells) {
    for (const auto &v : cell.key)
      out += csv_escape(param_to_string(v)) + ",";
    if (cell.stats)
      out += format_number(cell.stats->feasibility_rate) + "," +
             format_number(cell.stats->mean_hamming) + "," +
             std::to_string(cell.stats->independent_feasible) + "\n";
    else
      out += ",,\n";
  }
  return out;
}

inline std::string hamming_histogram_csv(const HammingHistogram &h) {
  std::string out = "distance,class,count\n";
  for (std::size_t d = 0; d < h.all.size(); ++d) {
    out += std::to_string(d) + ",all," + std::to_string(h.all[d]) + "\n";
    out += std::to_string(d) + ",feasible," + std::to_string(h.feasible[d]) + "\n";
    out += std::to_string(d) + ",infeasible," + std::to_string(h.infeasible[d]) + "\n";
  }
  return out;
}

inline std::string energy_histogram_csv(std::span<const EnergyBin> bins) {
  std::string out = "bin_lo,bin_hi,class,count\n";
  for (const auto &b : bins) {
    auto prefix = format_number(b.lo) + "," + format_number(b.hi) + ",";
    out += prefix + "all," + std::to_string(b.all) + "\n";
    out += prefix + "feasible," + std::to_string(b.feasible) + "\n";
    out += prefix + "infeasible," + std::to_string(b.infeasible) + "\n";
  }
  return out;
}

} // namespace qopt

#endif // QOPT_METRICS_HPP_INCLUDED
