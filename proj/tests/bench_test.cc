// Copyright 2026 The anonkey Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sstream>

#include "anonkey/bench/games.h"
#include "anonkey/bench/records.h"
#include "anonkey/bench/scenarios.h"
#include "anonkey/bench/stack.h"
#include "anonkey/core/kem.h"
#include "gtest/gtest.h"
#include "spdlog/spdlog.h"

namespace anonkey::bench {
namespace {

using zkp::BackendKind;

class QuietLogs : public ::testing::Environment {
 public:
  void SetUp() override { spdlog::set_level(spdlog::level::warn); }
};
const auto* const kQuiet =
    ::testing::AddGlobalTestEnvironment(new QuietLogs);

TEST(FitLineTest, TextbookExample) {
  // Worked example: slope 0.6, intercept 2.2, r^2 0.6.
  const std::vector<double> x{1, 2, 3, 4, 5}, y{2, 4, 5, 4, 5};
  const auto f = FitLine(x, y);
  EXPECT_NEAR(f.slope, 0.6, 1e-12);
  EXPECT_NEAR(f.intercept, 2.2, 1e-12);
  EXPECT_NEAR(f.r2, 0.6, 1e-12);
}

TEST(FitLineTest, ExactLineAndFlatSeries) {
  const std::vector<double> x{4, 8, 12, 16}, y{-3, 5, 13, 21};
  const auto f = FitLine(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, -11.0, 1e-12);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  const std::vector<double> flat{7, 7, 7, 7};
  EXPECT_EQ(FitLine(x, flat).r2, 1.0);
  const std::vector<double> same{1, 1};
  EXPECT_THROW(FitLine(same, std::vector<double>{1, 2}), PreconditionError);
  EXPECT_THROW(FitLine(std::vector<double>{1}, std::vector<double>{1}),
               PreconditionError);
}

TEST(FitLineTest, InvariantUnderAffineRescaling) {
  // r^2 does not change when x or y are rescaled.
  const std::vector<double> x{1, 3, 4, 9, 10}, y{5, 2, 8, 9, 30};
  const auto base = FitLine(x, y);
  std::vector<double> x2, y2;
  for (double v : x) x2.push_back(3 * v - 7);
  for (double v : y) y2.push_back(-0.5 * v + 100);
  EXPECT_NEAR(FitLine(x2, y2).r2, base.r2, 1e-12);
  EXPECT_NEAR(FitLine(x2, y2).slope, base.slope * -0.5 / 3, 1e-12);
}

TEST(MedianTest, OddEvenEmpty) {
  EXPECT_EQ(Median({3, 1, 2}), 2);
  EXPECT_EQ(Median({4, 1, 3, 2}), 2.5);
  EXPECT_EQ(Median({}), 0);
}

TEST(RecordsTest, JsonlAndCsv) {
  BenchRecord a{"prove-scaling", 9, {{"depth", 4}, {"backend", "mock"}},
                {{"prove_median", 1.5}}, 3105};
  BenchRecord b{"key-request", 9, {{"t", 32}, {"note", "a,b"}},
                {{"total", 2.0}, {"upload", 0.5}}, std::nullopt};
  std::vector<BenchRecord> recs{a, b};
  std::ostringstream jl;
  WriteJsonl(jl, recs);
  std::istringstream in(jl.str());
  std::string line;
  std::vector<nlohmann::json> parsed;
  while (std::getline(in, line)) parsed.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(parsed.size(), 3u);
  EXPECT_EQ(parsed[0]["scenario"], "meta");
  EXPECT_EQ(parsed[1]["constraints"], 3105);
  EXPECT_EQ(parsed[1]["params"]["depth"], 4);
  EXPECT_FALSE(parsed[2].contains("constraints"));
  EXPECT_EQ(parsed[2]["timings_ms"]["upload"], 0.5);

  std::ostringstream csv;
  WriteCsv(csv, recs);
  std::istringstream cin(csv.str());
  std::vector<std::string> lines;
  while (std::getline(cin, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0][0], '#');
  EXPECT_EQ(lines[1],
            "scenario,seed,backend,depth,note,t,constraints,prove_median_ms,"
            "total_ms,upload_ms");
  EXPECT_EQ(lines[2], "prove-scaling,9,mock,4,,,3105,1.5,,");
  EXPECT_EQ(lines[3], "key-request,9,,,\"a,b\",32,,,2,0.5");
}

StackOptions MockStack(unsigned depth = 3, uint64_t seed = 21) {
  StackOptions so;
  so.backend = BackendKind::kMock;
  so.depth = depth;
  so.seed = seed;
  return so;
}

TEST(StackTest, RedeemDeliversTheMockStream) {
  Stack st(MockStack());
  auto u = st.AddUser();
  st.Sync();
  auto red = st.Redeem(st.Prove(u, 48));
  ASSERT_TRUE(red.delivered()) << red.outcome();
  EXPECT_EQ(KemDecap(EncapsulatedKey{red.reply.payload}, u.note.sk).Copy(),
            MockEntropySource::StreamPrefix(21, 48));
  EXPECT_GT(red.session.upload_bytes, 0u);
  EXPECT_GT(red.session.delivery_bytes, 48u);
  EXPECT_EQ(st.Redeem(st.Prove(u, 48)).outcome(), "nullifier-spent");
}

TEST(StackTest, UserNotesDoNotReuseTheServerStream) {
  Stack st(MockStack());
  auto u = st.NewUser();
  const Bytes server = MockEntropySource::StreamPrefix(21, 4096);
  const Bytes rho(u.note.rho.begin(), u.note.rho.end());
  EXPECT_EQ(std::search(server.begin(), server.end(), rho.begin(), rho.end()),
            server.end());
}

TEST(ScenarioTest, ProveScalingMock) {
  ProveScalingOptions o;
  o.depths = {2, 3, 5};
  o.backend = BackendKind::kMock;
  o.repetitions = 3;
  o.users = 3;
  auto r = RunProveScaling(o);
  ASSERT_EQ(r.records.size(), 3u);
  EXPECT_EQ(r.proof_sizes.size(), 1u);
  // The circuit grows by a fixed number of constraints per level.
  EXPECT_NEAR(r.constraint_fit.r2, 1.0, 1e-12);
  EXPECT_GT(r.constraint_fit.slope, 0);
  for (const auto& rec : r.records) {
    EXPECT_TRUE(rec.constraints.has_value());
    EXPECT_TRUE(rec.timings_ms.count("prove_median"));
  }
}

TEST(ScenarioTest, KeyRequestTransferShareGrowsWithSizeUnderThrottle) {
  KeyRequestOptions o;
  o.sizes = {32, 1024, 4096};
  o.backend = BackendKind::kMock;
  o.tunnel_rate = 40000;
  o.repetitions = 1;
  auto recs = RunKeyRequest(o);
  ASSERT_EQ(recs.size(), 3u);
  double last = 0;
  size_t last_bytes = 0;
  for (const auto& r : recs) {
    const double share = r.params["transfer_share"].get<double>();
    EXPECT_GT(share, last);
    EXPECT_GT(r.params["delivery_bytes"].get<size_t>(), last_bytes);
    last = share;
    last_bytes = r.params["delivery_bytes"].get<size_t>();
  }
}

GameOptions SmallGames(BackendKind backend) {
  GameOptions o;
  o.seed = 5;
  o.backend = backend;
  o.trials = 30;
  o.honest_proofs = 3;
  o.mutated_bits = 12;
  o.statement_mutations = 4;
  o.fake_root_proofs = 2;
  o.scan_users = 5;
  return o;
}

TEST(GamesTest, UnforgeabilityMock) {
  auto r = RunUnforgeability(SmallGames(BackendKind::kMock));
  EXPECT_TRUE(r.passed) << r.ToJson().dump();
  EXPECT_EQ(r.successes, 0u);
  EXPECT_EQ(r.attacks["replay"].attempts, 30u);
  EXPECT_EQ(r.attacks["replay"].outcomes["nullifier-spent"], 30u);
  EXPECT_EQ(r.attacks["proof-mutation"].attempts, 36u);
  EXPECT_EQ(r.attacks["fake-root"].outcomes["root-invalid"], 2u);
  EXPECT_EQ(r.attacks["forged-path"].outcomes["prover-refused"], 30u);
  EXPECT_EQ(r.details["honest_redemptions"], 3);
}

TEST(GamesTest, UnforgeabilityGroth16ChecksTheCircuitToo) {
  auto o = SmallGames(BackendKind::kGroth16);
  o.honest_proofs = 2;
  o.trials = 26;
  auto r = RunUnforgeability(o);
  EXPECT_TRUE(r.passed) << r.ToJson().dump();
  EXPECT_EQ(r.attacks["forged-path-circuit"].attempts, 2u);
  EXPECT_EQ(r.attacks["forged-path-circuit"].outcomes["unsatisfied"], 2u);
  EXPECT_EQ(r.attacks["statement-mutation"].outcomes["proof-invalid"], 8u);
}

TEST(GamesTest, AnonymityRateNearHalf) {
  auto o = SmallGames(BackendKind::kMock);
  auto r = RunAnonymity(o, BackendKind::kMock, 400);
  EXPECT_EQ(r.details["linked_trials"], 0);
  EXPECT_EQ(r.trials, 400u);
  // 400 fair coins: 5 sigma is about 0.125.
  EXPECT_GT(r.rate, 0.375);
  EXPECT_LT(r.rate, 0.625);
}

TEST(GamesTest, ConfidentialityAndCrossScan) {
  auto o = SmallGames(BackendKind::kMock);
  auto c = RunConfidentiality(o);
  EXPECT_TRUE(c.passed) << c.ToJson().dump();
  EXPECT_EQ(c.attacks["wrong-key-decap"].attempts, 30u);
  auto s = RunStoreCrossScan(o);
  EXPECT_TRUE(s.passed) << s.ToJson().dump();
  EXPECT_EQ(s.details["records"], 5);
  EXPECT_EQ(s.details["records_with_known_root"], 5);
}

}  // namespace
}  // namespace anonkey::bench
