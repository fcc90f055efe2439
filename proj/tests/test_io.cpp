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

#include "qopt/io.hpp"

using namespace qopt;

TEST(Io, RationalsKeepTheirForm) {
  EXPECT_EQ(io::rational_to_json(Rational(3)).dump(), "3");
  EXPECT_EQ(io::rational_to_json(Rational(-1, 3)).dump(), "\"-1/3\"");
  EXPECT_EQ(io::rational_from_json(io::json("-1/3")), Rational(-1, 3));
  EXPECT_EQ(io::rational_from_json(io::json(4.0)), Rational(4));
  EXPECT_THROW(io::rational_from_json(io::json(0.5)), InvalidArgument);
  EXPECT_THROW(io::rational_from_json(io::json("1/0")), InvalidArgument);
}

TEST(Io, IlpRoundTrip) {
  auto ilp = trivial_ilp();
  auto back = io::ilp_from_json(io::to_json(ilp));
  EXPECT_EQ(io::to_json(back), io::to_json(ilp));
  EXPECT_EQ(back.constraints()[0].a[0], Rational(-1, 3));
}

TEST(Io, IlpSchemaErrors) {
  auto j = io::to_json(trivial_ilp());
  j["constraints"][0]["sense"] = "GE";
  EXPECT_THROW(io::ilp_from_json(j), InvalidArgument);
  auto k = io::to_json(trivial_ilp());
  k.erase("c");
  EXPECT_THROW(io::ilp_from_json(k), InvalidArgument);
}

TEST(Io, EncodingRoundTrip) {
  auto enc = trivial_encoding(trivial_ilp());
  auto back = io::encoding_from_json(io::to_json(enc));
  EXPECT_EQ(back.n_q(), 13u);
  EXPECT_EQ(io::to_json(back), io::to_json(enc));
}

TEST(Io, QuboAndIsingRoundTrip) {
  auto ilp = trivial_ilp();
  auto q = build_qubo(ilp, trivial_encoding(ilp), 2.0);
  auto qb = io::qubo_from_json(io::parse_json(io::dump(io::to_json(q))));
  EXPECT_EQ(qubo_digest(qb), qubo_digest(q));
  EXPECT_DOUBLE_EQ(qb.penalty(), 2.0);
  auto s = to_ising(q);
  auto sb = io::ising_from_json(io::parse_json(io::dump(io::to_json(s))));
  for (std::uint64_t k = 0; k < 8192; k += 97) {
    auto sp = spin_of_bits(bits_from_index(k, 13));
    EXPECT_DOUBLE_EQ(ising_energy(sb, sp), ising_energy(s, sp));
  }
}

TEST(Io, TreeRoundTrip) {
  std::vector<TrainingSample> s{{1.0, true, {0, 1}}, {2.0, false, {1, 0}}, {2.0, true, {1, 1}}};
  auto tree = train(s);
  auto back = io::tree_from_json(io::to_json(tree));
  EXPECT_EQ(io::to_json(back), io::to_json(tree));
  for (const auto &x : s)
    EXPECT_EQ(back.predict(x.energy, x.feasible), tree.predict(x.energy, x.feasible));
}

TEST(Io, NetworkFiles) {
  auto t = three_node_default();
  auto tb = io::topology_from_json(io::to_json(t));
  EXPECT_EQ(tb.nodes, t.nodes);
  ASSERT_EQ(tb.edges.size(), 3u);
  EXPECT_DOUBLE_EQ(tb.edges[2].length_km, 424.0);

  auto p = default_params(t);
  auto pb = io::params_from_json(io::to_json(p, t), t);
  EXPECT_EQ(io::to_json(pb, t), io::to_json(p, t));

  auto partial = io::parse_json(R"({"eta": {"B": 0}, "w_bits": 3})");
  auto pp = io::params_from_json(partial, t);
  EXPECT_EQ(pp.eta, (std::vector<std::int64_t>{4, 0, 4}));
  EXPECT_EQ(pp.w_bits, 3u);
  EXPECT_EQ(pp.demands.size(), 6u);

  auto bad = io::parse_json(R"({"demands": [{"src": "A", "dst": "Q", "h": 1}]})");
  EXPECT_THROW(io::params_from_json(bad, t), InvalidArgument);
}

TEST(Io, ParseErrorCarriesLine) {
  try {
    io::parse_json("{\n  \"a\": 1,\n  oops\n}");
    FAIL() << "expected a parse error";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Io, SkEdgeList) {
  SkGraph g(1, {{0, 1, 0.5}}, SkSign::Hamiltonian);
  EXPECT_EQ(io::sk_edge_list(g), "nodes 2\n0 1 0.5\n");
}
