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

#ifndef QOPT_QUBO_ISING_HPP_INCLUDED
#define QOPT_QUBO_ISING_HPP_INCLUDED

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qopt/bits.hpp"
#include "qopt/digest.hpp"
#include "qopt/error.hpp"
#include "qopt/ilp_model.hpp"
#include "qopt/parallel.hpp"
#include "qopt/rational.hpp"

namespace qopt {

// Upper-triangle coordinate entry. Off-diagonal entries follow the
// symmetric-half convention: (i, j, v) with i < j stands for M_ij = M_ji = v,
// contributing 2 v z_i z_j to the quadratic form.
struct Triplet {
  std::size_t i = 0;
  std::size_t j = 0;
  double value = 0.0;
};

// Minimize q^T Q q + C over q in {0,1}^n. Q is kept dense and symmetric.
class QuboProblem {
public:
  QuboProblem() = default;

  // `raw` is row-major n x n and need not be symmetric; it is replaced by
  // (raw + raw^T) / 2, which leaves every energy unchanged.
  QuboProblem(std::size_t n, std::vector<double> raw, double offset,
              double penalty = 0.0)
      : n_(n), q_(std::move(raw)), offset_(offset), penalty_(penalty) {
    if (q_.size() != n_ * n_)
      throw InvalidArgument("QUBO matrix has " + std::to_string(q_.size()) +
                            " entries, expected " + std::to_string(n_ * n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) {
        double m = 0.5 * (q_[i * n_ + j] + q_[j * n_ + i]);
        q_[i * n_ + j] = q_[j * n_ + i] = m;
      }
    for (double v : q_)
      if (!std::isfinite(v))
        throw InvalidArgument("QUBO matrix has a non-finite entry");
    if (!std::isfinite(offset_))
      throw InvalidArgument("QUBO constant is not finite");
  }

  static QuboProblem from_upper(std::size_t n, std::span<const Triplet> entries,
                                double offset, double penalty = 0.0) {
    std::vector<double> dense(n * n, 0.0);
    for (const auto &t : entries) {
      if (t.i > t.j || t.j >= n)
        throw InvalidArgument("QUBO entry (" + std::to_string(t.i) + ", " +
                              std::to_string(t.j) + ") is not in the upper triangle of " +
                              std::to_string(n));
      dense[t.i * n + t.j] += t.value;
      if (t.i != t.j)
        dense[t.j * n + t.i] += t.value;
    }
    return QuboProblem(n, std::move(dense), offset, penalty);
  }

  std::size_t n() const noexcept { return n_; }
  double at(std::size_t i, std::size_t j) const { return q_[i * n_ + j]; }
  double offset() const noexcept { return offset_; }
  double penalty() const noexcept { return penalty_; }
  std::span<const double> row(std::size_t i) const {
    return {q_.data() + i * n_, n_};
  }

  std::vector<Triplet> upper_entries() const {
    std::vector<Triplet> out;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i; j < n_; ++j)
        if (q_[i * n_ + j] != 0.0)
          out.push_back({i, j, q_[i * n_ + j]});
    return out;
  }

  double energy(BitsView q) const {
    if (q.size() != n_)
      throw InvalidArgument("bit vector has length " + std::to_string(q.size()) +
                            ", QUBO has " + std::to_string(n_) + " variables");
    double e = offset_;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!q[i])
        continue;
      const double *r = q_.data() + i * n_;
      e += r[i];
      for (std::size_t j = i + 1; j < n_; ++j)
        if (q[j])
          e += 2.0 * r[j];
    }
    return e;
  }

private:
  std::size_t n_ = 0;
  std::vector<double> q_;
  double offset_ = 0.0;
  double penalty_ = 0.0;
};

inline double qubo_energy(const QuboProblem &problem, BitsView q) {
  return problem.energy(q);
}

inline std::string qubo_digest(const QuboProblem &problem) {
  std::string text = "qubo n=" + std::to_string(problem.n());
  char buf[64];
  std::snprintf(buf, sizeof buf, " C=%a p=%a", problem.offset(), problem.penalty());
  text += buf;
  for (const auto &t : problem.upper_entries()) {
    std::snprintf(buf, sizeof buf, " %zu,%zu:%a", t.i, t.j, t.value);
    text += buf;
  }
  return digest(text);
}

// Compiles an encoded ILP into a QUBO whose energy at every q is
//   c.x(q) + p * sum_rows (a.x(q) + b [+ s(q) for LE rows])^2.
inline QuboProblem build_qubo(const IlpInstance &ilp, const BinaryEncoding &enc,
                              double p) {
  if (!(p > 0.0) || !std::isfinite(p))
    throw InvalidArgument("penalty weight must be positive, got " + std::to_string(p));
  if (enc.n_vars() != ilp.n_vars())
    throw InvalidArgument("encoding covers " + std::to_string(enc.n_vars()) +
                          " variables, ILP has " + std::to_string(ilp.n_vars()));
  const auto n = enc.n_q();
  const auto &rows = ilp.constraints();
  const auto &spans = enc.spans();

  // Residual of row r is sum_k M[r][k] q_k + b_r.
  std::vector<std::vector<std::pair<std::size_t, Rational>>> m(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto slack = enc.slack_span_for_row(r);
    if (rows[r].sense == Sense::LE && !slack)
      throw InvalidArgument("LE row " + std::to_string(r) + " has no slack span");
    if (rows[r].sense == Sense::EQ && slack)
      throw InvalidArgument("EQ row " + std::to_string(r) + " must not have a slack span");
    for (std::size_t k = 0; k < enc.n_vars(); ++k) {
      const auto &sp = spans[k];
      const auto &coef = rows[r].a[sp.index];
      if (is_zero(coef))
        continue;
      for (std::size_t b = 0; b < sp.size(); ++b)
        m[r].emplace_back(sp.offset + b, coef * static_cast<std::int64_t>(sp.weights[b]));
    }
    if (slack) {
      const auto &sp = spans[*slack];
      for (std::size_t b = 0; b < sp.size(); ++b)
        m[r].emplace_back(sp.offset + b, Rational(static_cast<std::int64_t>(sp.weights[b])));
    }
  }

  std::vector<Rational> quad(n * n, Rational(0));
  std::vector<Rational> linear(n, Rational(0));
  Rational constant(0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto &b = rows[r].b;
    for (const auto &[i, mi] : m[r]) {
      linear[i] += 2 * mi * b;
      for (const auto &[j, mj] : m[r])
        quad[i * n + j] += mi * mj;
    }
    constant += b * b;
  }

  std::vector<double> dense(n * n, 0.0);
  for (std::size_t k = 0; k < n * n; ++k)
    dense[k] = p * to_double(quad[k]);
  for (std::size_t k = 0; k < enc.n_vars(); ++k) {
    const auto &sp = spans[k];
    const auto &cost = ilp.c()[sp.index];
    for (std::size_t b = 0; b < sp.size(); ++b) {
      auto i = sp.offset + b;
      dense[i * n + i] += to_double(cost * static_cast<std::int64_t>(sp.weights[b]));
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    dense[i * n + i] += p * to_double(linear[i]);
  return QuboProblem(n, std::move(dense), p * to_double(constant), p);
}

// ---------------------------------------------------------------------------
// Ising form

using Spins = std::vector<std::int8_t>;

inline Spins spin_of_bits(BitsView q) {
  Spins s(q.size());
  for (std::size_t i = 0; i < q.size(); ++i)
    s[i] = q[i] ? std::int8_t{1} : std::int8_t{-1};
  return s;
}

inline Bits bits_of_spin(std::span<const std::int8_t> s) {
  Bits q(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != 1 && s[i] != -1)
      throw InvalidArgument("spin " + std::to_string(i) + " is " +
                            std::to_string(s[i]) + ", expected +1 or -1");
    q[i] = s[i] == 1 ? 1 : 0;
  }
  return q;
}

// sigma^T J sigma + h^T sigma + g with J symmetric and zero on the diagonal.
class IsingProblem {
public:
  IsingProblem() = default;

  IsingProblem(std::size_t n, std::vector<double> j, std::vector<double> h, double g)
      : n_(n), j_(std::move(j)), h_(std::move(h)), g_(g) {
    if (j_.size() != n_ * n_ || h_.size() != n_)
      throw InvalidArgument("Ising problem dimensions do not match n = " +
                            std::to_string(n_));
    for (std::size_t i = 0; i < n_; ++i) {
      if (j_[i * n_ + i] != 0.0)
        throw InvalidArgument("Ising coupling J has nonzero diagonal at " +
                              std::to_string(i));
      for (std::size_t k = i + 1; k < n_; ++k)
        if (j_[i * n_ + k] != j_[k * n_ + i])
          throw InvalidArgument("Ising coupling J is not symmetric");
    }
  }

  static IsingProblem from_upper(std::size_t n, std::span<const Triplet> entries,
                                 std::vector<double> h, double g) {
    std::vector<double> dense(n * n, 0.0);
    for (const auto &t : entries) {
      if (t.i >= t.j || t.j >= n)
        throw InvalidArgument("Ising entry (" + std::to_string(t.i) + ", " +
                              std::to_string(t.j) + ") must satisfy i < j < n");
      dense[t.i * n + t.j] += t.value;
      dense[t.j * n + t.i] += t.value;
    }
    return IsingProblem(n, std::move(dense), std::move(h), g);
  }

  std::size_t n() const noexcept { return n_; }
  double j(std::size_t a, std::size_t b) const { return j_[a * n_ + b]; }
  const std::vector<double> &h() const noexcept { return h_; }
  double g() const noexcept { return g_; }
  std::span<const double> row(std::size_t i) const { return {j_.data() + i * n_, n_}; }

  std::vector<Triplet> upper_entries() const {
    std::vector<Triplet> out;
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = a + 1; b < n_; ++b)
        if (j_[a * n_ + b] != 0.0)
          out.push_back({a, b, j_[a * n_ + b]});
    return out;
  }

private:
  std::size_t n_ = 0;
  std::vector<double> j_;
  std::vector<double> h_;
  double g_ = 0.0;
};

// With sigma = 2q - 1: J = Q0/4, h = qhat/2 + Q0 1/2,
// g = 1^T Q0 1/4 + 1^T qhat/2 + C, where qhat = diag(Q), Q0 = Q - diag(qhat).
inline IsingProblem to_ising(const QuboProblem &problem) {
  const auto n = problem.n();
  std::vector<double> j(n * n, 0.0);
  std::vector<double> h(n, 0.0);
  double off_sum = 0.0;
  double diag_sum = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    auto r = problem.row(a);
    double row_sum = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b)
        continue;
      j[a * n + b] = 0.25 * r[b];
      row_sum += r[b];
    }
    h[a] = 0.5 * r[a] + 0.5 * row_sum;
    off_sum += row_sum;
    diag_sum += r[a];
  }
  double g = 0.25 * off_sum + 0.5 * diag_sum + problem.offset();
  return IsingProblem(n, std::move(j), std::move(h), g);
}

// Inverse map, q = (sigma + 1)/2: Q = 4J + diag(2h - 4 J 1),
// C = 1^T J 1 - 1^T h + g.
inline QuboProblem to_qubo(const IsingProblem &ising) {
  const auto n = ising.n();
  std::vector<double> q(n * n, 0.0);
  double jsum = 0.0;
  double hsum = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    double row_sum = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      q[a * n + b] = 4.0 * ising.j(a, b);
      row_sum += ising.j(a, b);
    }
    q[a * n + a] = 2.0 * ising.h()[a] - 4.0 * row_sum;
    jsum += row_sum;
    hsum += ising.h()[a];
  }
  return QuboProblem(n, std::move(q), jsum - hsum + ising.g());
}

inline double ising_energy(const IsingProblem &ising, std::span<const std::int8_t> s) {
  if (s.size() != ising.n())
    throw InvalidArgument("spin vector has length " + std::to_string(s.size()) +
                          ", Ising problem has " + std::to_string(ising.n()));
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] != 1 && s[i] != -1)
      throw InvalidArgument("spin " + std::to_string(i) + " is " +
                            std::to_string(s[i]) + ", expected +1 or -1");
  double e = ising.g();
  for (std::size_t a = 0; a < s.size(); ++a) {
    auto r = ising.row(a);
    double field = 0.0;
    for (std::size_t b = a + 1; b < s.size(); ++b)
      field += r[b] * s[b];
    e += 2.0 * s[a] * field + ising.h()[a] * s[a];
  }
  return e;
}

// ---------------------------------------------------------------------------
// Exhaustive minimization

struct QuboMinimum {
  Bits bits;
  double energy = 0.0;
};

// Exact ground state over all 2^n bit vectors. Ties (within 1e-9) go to the
// lexicographically smallest vector.
inline QuboMinimum exhaustive_minimum(const QuboProblem &problem,
                                      std::size_t limit = kDefaultExhaustiveLimit) {
  const auto n = problem.n();
  require_exhaustive(n, limit, "exhaustive_minimum");
  const std::uint64_t total = std::uint64_t{1} << n;
  const auto chunks = kWalkChunks;
  struct Best {
    std::uint64_t index = 0;
    double energy = 0.0;
    bool set = false;
  };
  std::vector<Best> best(std::max<std::size_t>(1, std::min<std::uint64_t>(chunks, total)));
  parallel_chunks(total, best.size(), [&](std::size_t c, std::uint64_t begin,
                                          std::uint64_t end) {
    // Walk Gray codes g(k) = k ^ (k >> 1) for k in [begin, end); each step
    // flips one bit and updates the energy in O(n).
    auto gray = [](std::uint64_t k) { return k ^ (k >> 1); };
    auto state = bits_from_index(gray(begin), n);
    std::vector<double> field(n, 0.0); // sum_{j != i} Q_ij q_j
    for (std::size_t i = 0; i < n; ++i) {
      auto r = problem.row(i);
      for (std::size_t j = 0; j < n; ++j)
        if (j != i && state[j])
          field[i] += r[j];
    }
    double e = problem.energy(state);
    Best local{gray(begin), e, true};
    for (std::uint64_t k = begin + 1; k < end; ++k) {
      auto t = static_cast<std::size_t>(std::countr_zero(k));
      auto pos = n - 1 - t;
      double delta = problem.at(pos, pos) + 2.0 * field[pos];
      auto r = problem.row(pos);
      if (state[pos]) {
        e -= delta;
        state[pos] = 0;
        for (std::size_t j = 0; j < n; ++j)
          if (j != pos)
            field[j] -= r[j];
      } else {
        e += delta;
        state[pos] = 1;
        for (std::size_t j = 0; j < n; ++j)
          if (j != pos)
            field[j] += r[j];
      }
      auto idx = gray(k);
      if (e < local.energy - 1e-9 || (e <= local.energy + 1e-9 && idx < local.index))
        local = {idx, e, true};
    }
    best[c] = local;
  });
  Best winner = best.front();
  winner.energy = problem.energy(bits_from_index(winner.index, n));
  for (std::size_t c = 1; c < best.size(); ++c) {
    if (!best[c].set)
      continue;
    double e = problem.energy(bits_from_index(best[c].index, n));
    if (e < winner.energy - 1e-9 ||
        (e <= winner.energy + 1e-9 && best[c].index < winner.index))
      winner = {best[c].index, e, true};
  }
  return {bits_from_index(winner.index, n), winner.energy};
}

} // namespace qopt

#endif // QOPT_QUBO_ISING_HPP_INCLUDED
