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

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <zlib.h>

#include "qopt/samplers.hpp"

using namespace qopt;

namespace {

QuboProblem trivial_qubo(double p) {
  auto ilp = trivial_ilp();
  return build_qubo(ilp, trivial_encoding(ilp), p);
}

std::string temp_path(const std::string &name) {
  auto dir = std::filesystem::temp_directory_path() / "qopt_test_samplers";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream(path, std::ios::binary) << text;
}

} // namespace

TEST(Brute, FullCubeInOrder) {
  auto q = trivial_qubo(2.0);
  auto set = brute_force_sample(q);
  ASSERT_EQ(set.records().size(), 8192u);
  EXPECT_EQ(set.n_samples(), 8192u);
  for (std::uint64_t k = 0; k < 8192; k += 101) {
    EXPECT_EQ(set.records()[k].bits, bits_from_index(k, 13));
    EXPECT_DOUBLE_EQ(set.records()[k].energy, q.energy(set.records()[k].bits));
  }
}

TEST(Brute, SingleBit) {
  auto set = brute_force_sample(QuboProblem(1, {1.0}, 0.0));
  ASSERT_EQ(set.records().size(), 2u);
  EXPECT_EQ(set.records()[0].bits, Bits{0});
  EXPECT_DOUBLE_EQ(set.records()[0].energy, 0.0);
  EXPECT_DOUBLE_EQ(set.records()[1].energy, 1.0);
}

TEST(Brute, MinimumRecordAtLargePenalty) {
  auto ilp = trivial_ilp();
  auto enc = trivial_encoding(ilp);
  auto set = brute_force_sample(build_qubo(ilp, enc, 100.0));
  const SampleRecord *best = &set.records().front();
  for (const auto &r : set.records())
    if (r.energy < best->energy)
      best = &r;
  EXPECT_EQ(enc.decode_x(best->bits), (std::vector<std::int64_t>{3, 1}));
}

TEST(Anneal, DeterministicForSeed) {
  auto q = trivial_qubo(2.0);
  AnnealConfig cfg;
  cfg.reads = 200;
  cfg.sweeps = 200;
  cfg.seed = 7;
  auto a = simulated_anneal(q, cfg), b = simulated_anneal(q, cfg);
  ASSERT_EQ(a.records().size(), 200u);
  EXPECT_EQ(sampleset_to_text(a), sampleset_to_text(b));
  cfg.seed = 8;
  EXPECT_NE(sampleset_to_text(simulated_anneal(q, cfg)), sampleset_to_text(a));
}

TEST(Anneal, IndependentOfWorkerCount) {
  auto q = trivial_qubo(2.0);
  AnnealConfig cfg;
  cfg.reads = 50;
  cfg.sweeps = 100;
  cfg.seed = 3;
  ::setenv("QOPT_THREADS", "1", 1);
  auto one = sampleset_to_text(simulated_anneal(q, cfg));
  ::setenv("QOPT_THREADS", "4", 1);
  auto four = sampleset_to_text(simulated_anneal(q, cfg));
  ::unsetenv("QOPT_THREADS");
  EXPECT_EQ(one, four);
}

TEST(Anneal, ZeroTemperatureSingleSweep) {
  QuboProblem q(1, {1.0}, 0.0);
  AnnealConfig cfg;
  cfg.sweeps = 1;
  cfg.beta_end = std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    cfg.seed = seed;
    auto set = simulated_anneal(q, cfg);
    ASSERT_EQ(set.records().size(), 1u);
    const auto &r = set.records()[0];
    EXPECT_DOUBLE_EQ(r.energy, q.energy(r.bits));
    // A greedy sweep from either start lands in the ground state.
    EXPECT_EQ(r.bits, Bits{0});
  }
}

TEST(Anneal, RecordsCarryLabelsAndSchedule) {
  AnnealConfig cfg;
  cfg.reads = 3;
  cfg.sweeps = 20;
  cfg.labels["anneal_time_us"] = std::int64_t{20};
  auto set = simulated_anneal(trivial_qubo(2.0), cfg);
  for (const auto &r : set.records()) {
    EXPECT_EQ(std::get<std::int64_t>(r.run_params.at("anneal_time_us")), 20);
    EXPECT_EQ(std::get<std::int64_t>(r.run_params.at("sweeps")), 20);
  }
  EXPECT_EQ(std::get<std::int64_t>(set.meta().config.at("reads")), 3);
}

TEST(Anneal, RejectsBadConfig) {
  auto q = trivial_qubo(2.0);
  AnnealConfig cfg;
  cfg.reads = 0;
  EXPECT_THROW(simulated_anneal(q, cfg), InvalidArgument);
  cfg.reads = 1;
  cfg.beta_start = 5.0;
  cfg.beta_end = 1.0;
  EXPECT_THROW(simulated_anneal(q, cfg), InvalidArgument);
}

TEST(Merge, IdentityAndAdditivity) {
  auto q = trivial_qubo(2.0);
  AnnealConfig cfg;
  cfg.reads = 200;
  cfg.sweeps = 50;
  auto a = simulated_anneal(q, cfg);
  SampleSet empty(13, qubo_digest(q), a.meta(), {});
  auto m = merge(a, empty);
  EXPECT_EQ(m.n_samples(), a.n_samples());
  cfg.reads = 400;
  cfg.seed = 1;
  auto b = simulated_anneal(q, cfg);
  EXPECT_EQ(merge(a, b).n_samples(), 600u);
}

TEST(Merge, CoalescesDuplicates) {
  auto q = trivial_qubo(2.0);
  SampleRecord r;
  r.bits = Bits(13, 0);
  r.energy = q.energy(r.bits);
  SampleSet one(13, qubo_digest(q), {"x", {}}, {r});
  auto m = merge(one, one);
  ASSERT_EQ(m.records().size(), 1u);
  EXPECT_EQ(m.records()[0].occurrences, 2u);
}

TEST(Merge, RejectsForeignProblem) {
  auto a = brute_force_sample(QuboProblem(1, {1.0}, 0.0));
  auto b = brute_force_sample(QuboProblem(1, {2.0}, 0.0));
  EXPECT_THROW(merge(a, b), InvalidArgument);
}

TEST(Ingest, RoundTripPlainAndGzip) {
  auto q = trivial_qubo(2.0);
  AnnealConfig cfg;
  cfg.reads = 3;
  cfg.sweeps = 10;
  auto set = simulated_anneal(q, cfg);
  auto plain = temp_path("three.jsonl"), gz = temp_path("three.jsonl.gz");
  write_sampleset(plain, set);
  write_sampleset(gz, set);
  auto a = ingest_sampleset(plain, &q), b = ingest_sampleset(gz, &q);
  EXPECT_EQ(a.n_samples(), 3u);
  EXPECT_EQ(sampleset_to_text(a), sampleset_to_text(set));
  EXPECT_EQ(sampleset_to_text(b), sampleset_to_text(set));
  // The .gz file really is compressed.
  std::ifstream raw(gz, std::ios::binary);
  unsigned char magic[2] = {0, 0};
  raw.read(reinterpret_cast<char *>(magic), 2);
  EXPECT_EQ(magic[0], 0x1f);
  EXPECT_EQ(magic[1], 0x8b);
}

TEST(Ingest, OccurrencesSum) {
  auto path = temp_path("occ.jsonl");
  write_file(path, "{\"n\":2,\"problem_digest\":\"d\",\"sampler\":\"hw\"}\n"
                   "{\"bits\":\"01\",\"energy\":1.0,\"occurrences\":3,\"params\":{}}\n"
                   "{\"bits\":\"11\",\"energy\":2.0,\"occurrences\":4,\"params\":{\"t\":20}}\n"
                   "{\"bits\":\"00\",\"energy\":0.0,\"occurrences\":1,\"params\":{}}\n");
  auto set = ingest_sampleset(path);
  EXPECT_EQ(set.records().size(), 3u);
  EXPECT_EQ(set.n_samples(), 8u);
  EXPECT_EQ(std::get<std::int64_t>(set.records()[1].run_params.at("t")), 20);
}

TEST(Ingest, FlagsEnergyMismatch) {
  auto ilp = trivial_ilp();
  auto enc = trivial_encoding(ilp);
  auto q = build_qubo(ilp, enc, 2.0);
  std::vector<std::int64_t> x{3, 1}, s{0, 4, 1};
  auto bits = enc.encode(x, s);
  auto path = temp_path("mismatch.jsonl");
  write_file(path, "{\"n\":13,\"problem_digest\":\"" + qubo_digest(q) +
                       "\",\"sampler\":\"hw\"}\n{\"bits\":\"" + to_string(bits) +
                       "\",\"energy\":0,\"occurrences\":1,\"params\":{}}\n");
  auto set = ingest_sampleset(path, &q);
  ASSERT_EQ(set.records().size(), 1u);
  EXPECT_TRUE(set.records()[0].energy_mismatch);
  EXPECT_FALSE(ingest_sampleset(path).records()[0].energy_mismatch);
}

TEST(Ingest, EmptyRecordList) {
  auto path = temp_path("empty.jsonl");
  write_file(path, "{\"n\":13,\"problem_digest\":\"d\",\"sampler\":\"hw\"}\n");
  auto set = ingest_sampleset(path);
  EXPECT_TRUE(set.empty());
  EXPECT_EQ(set.n_samples(), 0u);
}

TEST(Ingest, MalformedLineIsNumbered) {
  auto path = temp_path("bad.jsonl");
  write_file(path, "{\"n\":2,\"problem_digest\":\"d\",\"sampler\":\"hw\"}\n"
                   "{\"bits\":\"01\",\"energy\":1.0,\"occurrences\":1,\"params\":{}}\n"
                   "{\"bits\":\"0x\",\"energy\":1.0,\"occurrences\":1,\"params\":{}}\n");
  try {
    ingest_sampleset(path);
    FAIL() << "expected a parse error";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 3u);
  }
  write_file(path, "{\"n\":2,\"problem_digest\":\"d\",\"sampler\":\"hw\"}\nnot json\n");
  try {
    ingest_sampleset(path);
    FAIL() << "expected a parse error";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Ingest, MissingFile) {
  EXPECT_THROW(ingest_sampleset(temp_path("does_not_exist.jsonl")), IoError);
}
