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

#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "qopt/ilp_model.hpp"

using namespace qopt;

TEST(Ilp, TrivialShape) {
  auto ilp = trivial_ilp();
  EXPECT_EQ(ilp.n_vars(), 2u);
  ASSERT_EQ(ilp.constraints().size(), 3u);
  for (const auto &row : ilp.constraints())
    EXPECT_EQ(row.sense, Sense::LE);
  EXPECT_EQ(ilp.constraints()[0].a[0], Rational(-1, 3));
}

TEST(Ilp, ObjectiveValues) {
  auto ilp = trivial_ilp();
  std::vector<std::int64_t> opt{3, 1}, zero{0, 0}, other{3, 2};
  EXPECT_EQ(objective(ilp, opt), Rational(6));
  EXPECT_EQ(objective(ilp, zero), Rational(0));
  EXPECT_EQ(objective(ilp, other), Rational(9));
}

TEST(Ilp, FeasibilityResiduals) {
  auto ilp = trivial_ilp();
  std::vector<std::int64_t> opt{3, 1};
  auto rep = check_feasible(ilp, opt);
  EXPECT_TRUE(rep.feasible);
  ASSERT_EQ(rep.residuals.size(), 3u);
  EXPECT_EQ(rep.residuals[0], Rational(0));
  EXPECT_EQ(rep.residuals[1], Rational(-4));
  EXPECT_EQ(rep.residuals[2], Rational(-1));

  std::vector<std::int64_t> zero{0, 0};
  auto bad = check_feasible(ilp, zero);
  EXPECT_FALSE(bad.feasible);
  EXPECT_EQ(bad.residuals[0], Rational(2));

  std::vector<std::int64_t> x32{3, 2};
  EXPECT_TRUE(is_feasible(ilp, x32));
}

TEST(Ilp, FeasibilityMatchesHandOracle) {
  auto ilp = trivial_ilp();
  for (std::int64_t a = 0; a <= 3; ++a)
    for (std::int64_t b = 0; b <= 3; ++b) {
      std::vector<std::int64_t> x{a, b};
      EXPECT_EQ(is_feasible(ilp, x), oracle::trivial_feasible(a, b)) << a << "," << b;
    }
}

TEST(Ilp, UnboundedVariantAcceptsBothOptima) {
  auto lifted = trivial_ilp().with_bounds_lifted();
  std::vector<std::int64_t> a{3, 1}, b{6, 0};
  EXPECT_TRUE(is_feasible(lifted, a));
  EXPECT_TRUE(is_feasible(lifted, b));
  EXPECT_FALSE(is_feasible(trivial_ilp(), b));
}

TEST(Ilp, DimensionMismatchRejected) {
  auto ilp = trivial_ilp();
  std::vector<std::int64_t> x{1, 2, 3};
  EXPECT_THROW(check_feasible(ilp, x), InvalidArgument);
  EXPECT_THROW(objective(ilp, x), InvalidArgument);
}

TEST(Ilp, ConstructorValidates) {
  EXPECT_THROW(IlpInstance("x", {Rational(1)}, {}, {}), InvalidArgument);
  EXPECT_THROW(IlpInstance("x", {Rational(1)}, {}, {{3, 1}}), InvalidArgument);
  ConstraintRow wide{{Rational(1), Rational(1)}, Rational(0), Sense::LE};
  EXPECT_THROW(IlpInstance("x", {Rational(1)}, {wide}, {{0, 1}}), InvalidArgument);
}

TEST(Encoding, TrivialLayout) {
  auto ilp = trivial_ilp();
  auto enc = trivial_encoding(ilp);
  EXPECT_EQ(enc.n_q(), 13u);
  ASSERT_EQ(enc.spans().size(), 5u);
  EXPECT_EQ(enc.spans()[0].weights, (std::vector<std::uint64_t>{2, 1}));
  EXPECT_EQ(enc.spans()[1].weights, (std::vector<std::uint64_t>{2, 1}));
  for (std::size_t k = 2; k < 5; ++k) {
    EXPECT_EQ(enc.spans()[k].kind, SpanKind::Slack);
    EXPECT_EQ(enc.spans()[k].weights, (std::vector<std::uint64_t>{4, 2, 1}));
  }
}

TEST(Encoding, SingleBitIdentity) {
  IlpInstance one("one", {Rational(1)}, {}, {{0, 1}});
  auto enc = build_encoding(one, 1, 1);
  EXPECT_EQ(enc.n_q(), 1u);
  EXPECT_EQ(enc.spans()[0].weights, (std::vector<std::uint64_t>{1}));
}

TEST(Encoding, DecodeExamples) {
  auto enc = trivial_encoding(trivial_ilp());
  Bits q(13, 0);
  q[0] = q[1] = q[3] = 1;
  auto d = enc.decode(q);
  EXPECT_EQ(d.x, (std::vector<std::int64_t>{3, 1}));
  EXPECT_EQ(d.s, (std::vector<std::int64_t>{0, 0, 0}));
  auto z = enc.decode(Bits(13, 0));
  EXPECT_EQ(z.x, (std::vector<std::int64_t>{0, 0}));
  auto ones = enc.decode(Bits(13, 1));
  EXPECT_EQ(ones.x, (std::vector<std::int64_t>{3, 3}));
  EXPECT_EQ(ones.s, (std::vector<std::int64_t>{7, 7, 7}));
}

TEST(Encoding, ExhaustiveRoundTripMatchesHandDecoder) {
  auto enc = trivial_encoding(trivial_ilp());
  std::set<std::vector<std::int64_t>> seen;
  for (std::uint64_t k = 0; k < 8192; ++k) {
    auto q = bits_from_index(k, 13);
    auto d = enc.decode(q);
    auto t = oracle::trivial_decode(k);
    ASSERT_EQ(d.x[0], t.x1);
    ASSERT_EQ(d.x[1], t.x2);
    for (int r = 0; r < 3; ++r)
      ASSERT_EQ(d.s[r], t.s[r]);
    ASSERT_EQ(enc.encode(d.x, d.s), q);
    seen.insert({d.x[0], d.x[1], d.s[0], d.s[1], d.s[2]});
  }
  EXPECT_EQ(seen.size(), 8192u);
}

TEST(Encoding, RejectsMalformedSpans) {
  Span a{SpanKind::Variable, 0, 0, {2, 1}};
  Span gap{SpanKind::Variable, 1, 3, {1}};
  EXPECT_THROW(BinaryEncoding({a, gap}), InvalidArgument);
  Span notpow{SpanKind::Variable, 0, 0, {3, 1}};
  EXPECT_THROW(BinaryEncoding({notpow}), InvalidArgument);
}

TEST(Encoding, SlackBitsFromRange) {
  auto ilp = trivial_ilp();
  std::vector<std::size_t> vb{2, 2};
  auto sb = slack_bits_from_range(ilp, vb);
  ASSERT_EQ(sb.size(), 3u);
  // Largest slack needed: row 2 at x = (3,3) is 8 -> 4 bits; row 1 at x = 0 is 0.
  for (auto b : sb)
    EXPECT_GE(b, 1u);
}

TEST(Census, TrivialCountMatchesDecomposition) {
  auto ilp = trivial_ilp();
  auto enc = trivial_encoding(ilp);
  auto census = enumerate_feasible(ilp, enc);
  std::uint64_t oracle_count = 0;
  for (std::uint64_t k = 0; k < 8192; ++k) {
    auto t = oracle::trivial_decode(k);
    oracle_count += oracle::trivial_feasible(t.x1, t.x2) ? 1 : 0;
  }
  EXPECT_EQ(oracle_count, 1536u);
  EXPECT_EQ(census.total, 8192u);
  EXPECT_EQ(census.feasible, oracle_count);
  EXPECT_EQ(census.vectors.size(), 1536u);
  EXPECT_DOUBLE_EQ(census.ratio(), 0.1875);

  std::set<std::vector<std::int64_t>> xs;
  for (const auto &q : census.vectors)
    xs.insert(enc.decode_x(q));
  EXPECT_EQ(xs.size(), 3u);
  EXPECT_EQ(census.feasible, xs.size() * 512u);
}

TEST(Census, ContradictoryInstanceIsEmpty) {
  ConstraintRow row{{Rational(1)}, Rational(1), Sense::LE};
  IlpInstance bad("bad", {Rational(1)}, {row}, {{0, 3}});
  auto enc = build_encoding(bad, 2, 2);
  EXPECT_EQ(enumerate_feasible(bad, enc).feasible, 0u);
}

TEST(Census, RefusesOverLimit) {
  auto ilp = trivial_ilp();
  auto enc = trivial_encoding(ilp);
  EXPECT_THROW(enumerate_feasible(ilp, enc, 12), Refusal);
}
