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

#ifndef QOPT_ILP_MODEL_HPP_INCLUDED
#define QOPT_ILP_MODEL_HPP_INCLUDED

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qopt/bits.hpp"
#include "qopt/error.hpp"
#include "qopt/rational.hpp"

namespace qopt {

// LE: a.x + b <= 0, EQ: a.x + b = 0.
enum class Sense { LE, EQ };

struct ConstraintRow {
  std::vector<Rational> a;
  Rational b{0};
  Sense sense = Sense::LE;
};

// Inclusive integer range.
struct VarBounds {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

inline constexpr std::int64_t kUnbounded = std::numeric_limits<std::int64_t>::max();

// Minimize c.x subject to the constraint rows and per-variable bounds.
class IlpInstance {
public:
  IlpInstance(std::string name, std::vector<Rational> c,
              std::vector<ConstraintRow> constraints,
              std::vector<VarBounds> bounds)
      : name_(std::move(name)), c_(std::move(c)),
        constraints_(std::move(constraints)), bounds_(std::move(bounds)) {
    if (bounds_.size() != c_.size())
      throw InvalidArgument("ILP '" + name_ + "': " +
                            std::to_string(bounds_.size()) + " bounds for " +
                            std::to_string(c_.size()) + " variables");
    for (std::size_t i = 0; i < bounds_.size(); ++i)
      if (bounds_[i].lo < 0 || bounds_[i].lo > bounds_[i].hi)
        throw InvalidArgument("ILP '" + name_ + "': variable " +
                              std::to_string(i) +
                              " bounds must satisfy 0 <= lo <= hi");
    for (std::size_t r = 0; r < constraints_.size(); ++r)
      if (constraints_[r].a.size() != c_.size())
        throw InvalidArgument("ILP '" + name_ + "': constraint row " +
                              std::to_string(r) + " has " +
                              std::to_string(constraints_[r].a.size()) +
                              " coefficients, expected " +
                              std::to_string(c_.size()));
  }

  const std::string &name() const noexcept { return name_; }
  std::size_t n_vars() const noexcept { return c_.size(); }
  const std::vector<Rational> &c() const noexcept { return c_; }
  const std::vector<ConstraintRow> &constraints() const noexcept {
    return constraints_;
  }
  const std::vector<VarBounds> &bounds() const noexcept { return bounds_; }

  std::vector<std::size_t> le_rows() const {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < constraints_.size(); ++r)
      if (constraints_[r].sense == Sense::LE)
        rows.push_back(r);
    return rows;
  }

  // Same instance with every upper bound removed.
  IlpInstance with_bounds_lifted() const {
    auto lifted = bounds_;
    for (auto &b : lifted)
      b.hi = kUnbounded;
    return IlpInstance(name_ + "-unbounded", c_, constraints_, std::move(lifted));
  }

private:
  std::string name_;
  std::vector<Rational> c_;
  std::vector<ConstraintRow> constraints_;
  std::vector<VarBounds> bounds_;
};

// The two-variable benchmark: optimum c.x = 6 at x = (3,1) once both
// variables are restricted to {0,..,3}.
inline IlpInstance trivial_ilp() {
  std::vector<ConstraintRow> rows{
      {{Rational(-1, 3), Rational(-1)}, Rational(2), Sense::LE},
      {{Rational(-3), Rational(-1)}, Rational(6), Sense::LE},
      {{Rational(0), Rational(1)}, Rational(-2), Sense::LE},
  };
  return IlpInstance("trivial", {Rational(1), Rational(3)}, std::move(rows),
                     {{0, 3}, {0, 3}});
}

struct FeasibilityReport {
  bool feasible = false;
  bool within_bounds = false;
  // a.x + b per constraint row, in row order.
  std::vector<Rational> residuals;
};

inline void require_dimension(const IlpInstance &ilp, std::size_t n) {
  if (n != ilp.n_vars())
    throw InvalidArgument("assignment has " + std::to_string(n) +
                          " entries, ILP '" + ilp.name() + "' has " +
                          std::to_string(ilp.n_vars()) + " variables");
}

inline Rational row_residual(const ConstraintRow &row,
                             std::span<const std::int64_t> x) {
  Rational acc = row.b;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!is_zero(row.a[i]))
      acc += row.a[i] * x[i];
  return acc;
}

inline FeasibilityReport check_feasible(const IlpInstance &ilp,
                                        std::span<const std::int64_t> x) {
  require_dimension(ilp, x.size());
  FeasibilityReport report;
  report.within_bounds = true;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < ilp.bounds()[i].lo || x[i] > ilp.bounds()[i].hi)
      report.within_bounds = false;
  bool rows_ok = true;
  report.residuals.reserve(ilp.constraints().size());
  for (const auto &row : ilp.constraints()) {
    auto r = row_residual(row, x);
    rows_ok = rows_ok && (row.sense == Sense::EQ ? is_zero(r) : r <= 0);
    report.residuals.push_back(r);
  }
  report.feasible = rows_ok && report.within_bounds;
  return report;
}

inline bool is_feasible(const IlpInstance &ilp, std::span<const std::int64_t> x) {
  require_dimension(ilp, x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < ilp.bounds()[i].lo || x[i] > ilp.bounds()[i].hi)
      return false;
  for (const auto &row : ilp.constraints()) {
    auto r = row_residual(row, x);
    if (row.sense == Sense::EQ ? !is_zero(r) : r > 0)
      return false;
  }
  return true;
}

inline Rational objective(const IlpInstance &ilp, std::span<const std::int64_t> x) {
  require_dimension(ilp, x.size());
  Rational acc(0);
  for (std::size_t i = 0; i < x.size(); ++i)
    acc += ilp.c()[i] * x[i];
  return acc;
}

// ---------------------------------------------------------------------------
// Binary encoding

enum class SpanKind { Variable, Slack };

// A contiguous run of bits encoding one integer quantity, weights MSB first.
struct Span {
  SpanKind kind = SpanKind::Variable;
  // Variable index, or constraint-row index for a slack.
  std::size_t index = 0;
  std::size_t offset = 0;
  std::vector<std::uint64_t> weights;

  std::size_t size() const noexcept { return weights.size(); }
  std::uint64_t max_value() const noexcept {
    std::uint64_t s = 0;
    for (auto w : weights)
      s += w;
    return s;
  }
};

struct Decoded {
  std::vector<std::int64_t> x;
  // One entry per slack span, in span order.
  std::vector<std::int64_t> s;
};

// Maps a bit vector q onto (x, s): variables first, then one slack per LE
// row, each as a block of binary-weighted bits.
class BinaryEncoding {
public:
  explicit BinaryEncoding(std::vector<Span> spans) : spans_(std::move(spans)) {
    std::size_t offset = 0;
    bool seen_slack = false;
    for (std::size_t k = 0; k < spans_.size(); ++k) {
      const auto &sp = spans_[k];
      if (sp.offset != offset)
        throw InvalidArgument("encoding spans must be contiguous; span " +
                              std::to_string(k) + " starts at " +
                              std::to_string(sp.offset) + ", expected " +
                              std::to_string(offset));
      if (sp.weights.empty() || sp.weights.size() > 62)
        throw InvalidArgument("encoding span " + std::to_string(k) +
                              " must have 1..62 bits");
      for (std::size_t b = 0; b < sp.weights.size(); ++b)
        if (sp.weights[b] != (std::uint64_t{1} << (sp.weights.size() - 1 - b)))
          throw InvalidArgument("encoding span " + std::to_string(k) +
                                " weights must be descending powers of two ending in 1");
      if (sp.kind == SpanKind::Variable) {
        if (seen_slack)
          throw InvalidArgument("variable spans must precede slack spans");
        if (sp.index != n_vars_)
          throw InvalidArgument("variable spans must appear in variable order");
        ++n_vars_;
        var_bits_ += sp.size();
      } else {
        seen_slack = true;
        for (std::size_t j = n_vars_; j < k; ++j)
          if (spans_[j].index == sp.index)
            throw InvalidArgument("row " + std::to_string(sp.index) +
                                  " has two slack spans");
      }
      offset += sp.size();
    }
    n_q_ = offset;
  }

  std::size_t n_q() const noexcept { return n_q_; }
  std::size_t n_vars() const noexcept { return n_vars_; }
  // Leading bits that encode decision variables.
  std::size_t var_bits() const noexcept { return var_bits_; }
  const std::vector<Span> &spans() const noexcept { return spans_; }

  std::optional<std::size_t> slack_span_for_row(std::size_t row) const {
    for (std::size_t k = n_vars_; k < spans_.size(); ++k)
      if (spans_[k].index == row)
        return k;
    return std::nullopt;
  }

  Decoded decode(BitsView q) const {
    require_length(q.size());
    Decoded out;
    out.x.reserve(n_vars_);
    out.s.reserve(spans_.size() - n_vars_);
    for (const auto &sp : spans_) {
      std::int64_t v = 0;
      for (std::size_t b = 0; b < sp.size(); ++b)
        if (q[sp.offset + b])
          v += static_cast<std::int64_t>(sp.weights[b]);
      (sp.kind == SpanKind::Variable ? out.x : out.s).push_back(v);
    }
    return out;
  }

  std::vector<std::int64_t> decode_x(BitsView q) const {
    require_length(q.size());
    std::vector<std::int64_t> x(n_vars_, 0);
    for (std::size_t k = 0; k < n_vars_; ++k) {
      const auto &sp = spans_[k];
      for (std::size_t b = 0; b < sp.size(); ++b)
        if (q[sp.offset + b])
          x[k] += static_cast<std::int64_t>(sp.weights[b]);
    }
    return x;
  }

  Bits encode(std::span<const std::int64_t> x, std::span<const std::int64_t> s) const {
    if (x.size() != n_vars_ || s.size() != spans_.size() - n_vars_)
      throw InvalidArgument("encode: expected " + std::to_string(n_vars_) +
                            " variables and " +
                            std::to_string(spans_.size() - n_vars_) + " slacks");
    Bits q(n_q_, 0);
    for (std::size_t k = 0; k < spans_.size(); ++k) {
      const auto &sp = spans_[k];
      auto v = k < n_vars_ ? x[k] : s[k - n_vars_];
      if (v < 0 || static_cast<std::uint64_t>(v) > sp.max_value())
        throw InvalidArgument("value " + std::to_string(v) + " does not fit span " +
                              std::to_string(k));
      for (std::size_t b = 0; b < sp.size(); ++b)
        q[sp.offset + b] = static_cast<std::uint8_t>(
            (static_cast<std::uint64_t>(v) >> (sp.size() - 1 - b)) & 1u);
    }
    return q;
  }

private:
  void require_length(std::size_t n) const {
    if (n != n_q_)
      throw InvalidArgument("bit vector has length " + std::to_string(n) +
                            ", encoding expects " + std::to_string(n_q_));
  }

  std::vector<Span> spans_;
  std::size_t n_q_ = 0;
  std::size_t n_vars_ = 0;
  std::size_t var_bits_ = 0;
};

inline std::vector<std::uint64_t> binary_weights(std::size_t bits) {
  std::vector<std::uint64_t> w(bits);
  for (std::size_t b = 0; b < bits; ++b)
    w[b] = std::uint64_t{1} << (bits - 1 - b);
  return w;
}

// var_bits: one count per variable; slack_bits: one count per LE row.
inline BinaryEncoding build_encoding(const IlpInstance &ilp,
                                     std::span<const std::size_t> var_bits,
                                     std::span<const std::size_t> slack_bits) {
  auto le = ilp.le_rows();
  if (var_bits.size() != ilp.n_vars())
    throw InvalidArgument("need one bit count per variable (" +
                          std::to_string(ilp.n_vars()) + "), got " +
                          std::to_string(var_bits.size()));
  if (slack_bits.size() != le.size())
    throw InvalidArgument("need one slack bit count per LE row (" +
                          std::to_string(le.size()) + "), got " +
                          std::to_string(slack_bits.size()));
  std::vector<Span> spans;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < var_bits.size(); ++i) {
    auto bits = var_bits[i];
    if (bits < 1 || bits > 62)
      throw InvalidArgument("variable " + std::to_string(i) + " needs 1..62 bits");
    auto cover = (std::uint64_t{1} << bits) - 1;
    auto hi = ilp.bounds()[i].hi;
    if (hi != kUnbounded && cover < static_cast<std::uint64_t>(hi))
      throw InvalidArgument("variable " + std::to_string(i) + ": " +
                            std::to_string(bits) + " bits cover 0.." +
                            std::to_string(cover) + " but upper bound is " +
                            std::to_string(hi));
    spans.push_back({SpanKind::Variable, i, offset, binary_weights(bits)});
    offset += bits;
  }
  for (std::size_t k = 0; k < le.size(); ++k) {
    if (slack_bits[k] < 1 || slack_bits[k] > 62)
      throw InvalidArgument("slack for row " + std::to_string(le[k]) +
                            " needs 1..62 bits");
    spans.push_back({SpanKind::Slack, le[k], offset, binary_weights(slack_bits[k])});
    offset += slack_bits[k];
  }
  return BinaryEncoding(std::move(spans));
}

inline BinaryEncoding build_encoding(const IlpInstance &ilp, std::size_t var_bits,
                                     std::size_t slack_bits) {
  std::vector<std::size_t> vb(ilp.n_vars(), var_bits);
  std::vector<std::size_t> sb(ilp.le_rows().size(), slack_bits);
  return build_encoding(ilp, vb, sb);
}

inline std::size_t bits_for(std::uint64_t max_value) {
  std::size_t bits = 1;
  while (bits < 62 && (std::uint64_t{1} << bits) - 1 < max_value)
    ++bits;
  return bits;
}

// Slack widths large enough for the worst-case a.x + b over the box spanned
// by the variable encodings.
inline std::vector<std::size_t>
slack_bits_from_range(const IlpInstance &ilp, std::span<const std::size_t> var_bits) {
  std::vector<std::size_t> out;
  for (auto r : ilp.le_rows()) {
    const auto &row = ilp.constraints()[r];
    Rational lowest = row.b;
    for (std::size_t i = 0; i < ilp.n_vars(); ++i) {
      if (row.a[i] >= 0) {
        lowest += row.a[i] * ilp.bounds()[i].lo;
      } else {
        std::int64_t top = static_cast<std::int64_t>((std::uint64_t{1} << var_bits[i]) - 1);
        if (ilp.bounds()[i].hi != kUnbounded)
          top = std::min(top, ilp.bounds()[i].hi);
        lowest += row.a[i] * top;
      }
    }
    auto slack_max = floor(-lowest);
    out.push_back(bits_for(slack_max > 0 ? static_cast<std::uint64_t>(slack_max) : 0));
  }
  return out;
}

inline BinaryEncoding trivial_encoding(const IlpInstance &ilp) {
  return build_encoding(ilp, 2, 3);
}

// Feasibility of a bit vector is judged on its decoded x only; slack bits
// never affect it.
inline bool bits_feasible(const IlpInstance &ilp, const BinaryEncoding &enc,
                          BitsView q) {
  return is_feasible(ilp, enc.decode_x(q));
}

struct FeasibleCensus {
  std::uint64_t total = 0;
  std::uint64_t feasible = 0;
  // Lexicographic order; empty unless collected.
  std::vector<Bits> vectors;

  double ratio() const {
    return total == 0 ? 0.0 : static_cast<double>(feasible) / static_cast<double>(total);
  }
};

inline FeasibleCensus enumerate_feasible(const IlpInstance &ilp,
                                         const BinaryEncoding &enc,
                                         std::size_t limit = kDefaultExhaustiveLimit,
                                         bool collect = true) {
  if (enc.n_vars() != ilp.n_vars())
    throw InvalidArgument("encoding covers " + std::to_string(enc.n_vars()) +
                          " variables, ILP has " + std::to_string(ilp.n_vars()));
  auto n = enc.n_q();
  require_exhaustive(n, limit, "enumerate_feasible");
  // x depends only on the leading var_bits, so cache one verdict per prefix.
  auto prefix_bits = enc.var_bits();
  auto tail_bits = n - prefix_bits;
  std::vector<std::uint8_t> prefix_ok(std::size_t{1} << prefix_bits);
  for (std::uint64_t p = 0; p < prefix_ok.size(); ++p) {
    auto q = bits_from_index(p << tail_bits, n);
    prefix_ok[p] = bits_feasible(ilp, enc, q) ? 1 : 0;
  }
  FeasibleCensus census;
  census.total = std::uint64_t{1} << n;
  for (std::uint64_t k = 0; k < census.total; ++k) {
    if (!prefix_ok[k >> tail_bits])
      continue;
    ++census.feasible;
    if (collect)
      census.vectors.push_back(bits_from_index(k, n));
  }
  return census;
}

} // namespace qopt

#endif // QOPT_ILP_MODEL_HPP_INCLUDED
