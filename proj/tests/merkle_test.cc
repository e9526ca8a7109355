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

#include <random>
#include <set>
#include <string>

#include "anonkey/core/errors.h"
#include "anonkey/merkle/merkle_tree.h"
#include "gtest/gtest.h"
#include "oracle.h"

namespace anonkey::merkle {
namespace {

// Bottom-up recomputation over the full, padded leaf list.
oracle::Digest32 BruteForceRoot(const std::string& profile, unsigned depth,
                                const std::vector<Digest>& leaves) {
  std::vector<oracle::Digest32> level(size_t{1} << depth,
                                      oracle::Hash(profile, {0x00}));
  for (size_t i = 0; i < leaves.size(); ++i) level[i] = leaves[i].bytes;
  while (level.size() > 1) {
    std::vector<oracle::Digest32> up(level.size() / 2);
    for (size_t j = 0; j < up.size(); ++j) {
      up[j] = oracle::HashNode(profile, level[2 * j], level[2 * j + 1]);
    }
    level = std::move(up);
  }
  return level[0];
}

Digest RandomLeaf(const Hasher& h, std::mt19937_64& rng) {
  Bytes seed(16);
  for (auto& b : seed) b = static_cast<uint8_t>(rng());
  return h.Hash(seed);
}

class MerkleTest : public ::testing::TestWithParam<const char*> {
 protected:
  std::string profile() const { return GetParam(); }
  HashProfile hp() const { return ParseHashProfile(GetParam()); }
};

TEST_P(MerkleTest, EmptyTreeDefinitions) {
  MerkleTree t1(hp(), 1);
  const auto h0 = oracle::Hash(profile(), {0x00});
  EXPECT_EQ(t1.Root().bytes, oracle::HashNode(profile(), h0, h0));
  MerkleTree t3(hp(), 3);
  EXPECT_EQ(t3.Node(1, 0), t3.Node(1, 1));
  EXPECT_EQ(t3.next_free(), 0u);
  MerkleTree t4(hp(), 4);
  EXPECT_EQ(t4.Root().bytes, BruteForceRoot(profile(), 4, {}));
  EXPECT_EQ(t4.Root(), t4.Root());
}

TEST_P(MerkleTest, DepthBounds) {
  EXPECT_THROW(MerkleTree(hp(), 0), PreconditionError);
  EXPECT_THROW(MerkleTree(hp(), 33), PreconditionError);
  MerkleTree deep(hp(), 32);
  EXPECT_EQ(deep.capacity(), uint64_t{1} << 32);
  deep.AddLeaf(deep.hasher().Hash(AsBytes("x")));
  EXPECT_EQ(deep.Validation(0).depth(), 32u);
}

TEST_P(MerkleTest, AddLeafAndLookups) {
  MerkleTree t(hp(), 4);
  std::mt19937_64 rng(1);
  std::set<Digest> roots = {t.Root()};
  std::vector<Digest> leaves;
  for (int i = 0; i < 16; ++i) {
    leaves.push_back(RandomLeaf(t.hasher(), rng));
    EXPECT_EQ(t.AddLeaf(leaves.back()), static_cast<uint64_t>(i));
    EXPECT_TRUE(roots.insert(t.Root()).second) << "root repeated at " << i;
    EXPECT_EQ(t.Root().bytes, BruteForceRoot(profile(), 4, leaves));
  }
  for (int i = 0; i < 16; ++i) EXPECT_EQ(t.IndexOf(leaves[i]), uint64_t(i));
  EXPECT_THROW(t.IndexOf(RandomLeaf(t.hasher(), rng)), AbsentLeafError);
  EXPECT_THROW(t.AddLeaf(RandomLeaf(t.hasher(), rng)), CapacityError);
}

TEST_P(MerkleTest, DuplicateRejected) {
  MerkleTree t(hp(), 3);
  Digest d = t.hasher().Hash(AsBytes("c"));
  t.AddLeaf(d);
  const Digest root = t.Root();
  EXPECT_THROW(t.AddLeaf(d), DuplicateLeafError);
  EXPECT_EQ(t.Root(), root);
  EXPECT_EQ(t.next_free(), 1u);
}

TEST_P(MerkleTest, DepthOneValidationList) {
  MerkleTree t(hp(), 1);
  Digest a = t.hasher().Hash(AsBytes("a"));
  Digest b = t.hasher().Hash(AsBytes("b"));
  t.AddLeaf(a);
  t.AddLeaf(b);
  ValidationList v = t.Validation(0);
  ASSERT_EQ(v.depth(), 1u);
  EXPECT_EQ(v.siblings[0], b);
  EXPECT_THROW(t.Validation(2), PreconditionError);
}

TEST_P(MerkleTest, ExhaustiveOracleEquivalence) {
  const unsigned max_depth = hp() == HashProfile::kSha256 ? 6 : 5;
  std::mt19937_64 rng(2);
  for (unsigned depth = 2; depth <= max_depth; ++depth) {
    MerkleTree t(hp(), depth);
    std::vector<Digest> leaves;
    for (uint64_t k = 0; k < t.capacity(); ++k) {
      leaves.push_back(RandomLeaf(t.hasher(), rng));
      t.AddLeaf(leaves.back());
      ASSERT_EQ(t.Root().bytes, BruteForceRoot(profile(), depth, leaves))
          << "depth " << depth << " after " << k + 1;
      const Digest root = t.Root();
      for (uint64_t i = 0; i < t.capacity(); ++i) {
        ValidationList v = t.Validation(i);
        ASSERT_EQ(v.depth(), depth);
        for (uint64_t j = 0; j <= k; ++j) {
          const bool expect = i == j;
          ASSERT_EQ(IsLeafOfTree(t.hasher(), leaves[j], i, v, root), expect)
              << depth << " " << i << " " << j;
        }
      }
    }
  }
}

TEST_P(MerkleTest, WrongIndexAndMutatedSiblingFail) {
  MerkleTree t(hp(), 4);
  std::mt19937_64 rng(3);
  std::vector<Digest> leaves;
  for (int i = 0; i < 11; ++i) {
    leaves.push_back(RandomLeaf(t.hasher(), rng));
    t.AddLeaf(leaves.back());
  }
  const Digest root = t.Root();
  for (uint64_t i = 0; i < leaves.size(); ++i) {
    ValidationList v = t.Validation(i);
    EXPECT_TRUE(IsLeafOfTree(t.hasher(), leaves[i], i, v, root));
    EXPECT_FALSE(IsLeafOfTree(t.hasher(), leaves[i], i + 1, v, root));
    if (i > 0) {
      EXPECT_FALSE(IsLeafOfTree(t.hasher(), leaves[i], i - 1, v, root));
    }
    for (size_t s = 0; s < v.siblings.size(); ++s) {
      for (size_t byte = 0; byte < Digest::kSize; byte += 5) {
        ValidationList bad = v;
        bad.siblings[s].bytes[byte] ^= 0x01;
        EXPECT_FALSE(IsLeafOfTree(t.hasher(), leaves[i], i, bad, root));
      }
    }
  }
}

TEST_P(MerkleTest, MalformedListsAreFalse) {
  MerkleTree t(hp(), 3);
  Digest d = t.hasher().Hash(AsBytes("z"));
  t.AddLeaf(d);
  EXPECT_FALSE(IsLeafOfTree(t.hasher(), t.Root(), 0, {}, t.Root()));
  ValidationList v = t.Validation(0);
  v.siblings.pop_back();
  EXPECT_FALSE(IsLeafOfTree(t.hasher(), d, 0, v, t.Root()));
  EXPECT_FALSE(IsLeafOfTree(t.hasher(), d, 8, t.Validation(0), t.Root()));
}

TEST_P(MerkleTest, PathLocality) {
  MerkleTree t(hp(), 5);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) {
    const uint64_t before = t.node_writes();
    std::vector<std::vector<uint64_t>> versions(t.depth() + 1);
    for (unsigned k = 0; k <= t.depth(); ++k) {
      for (uint64_t j = 0; j < (uint64_t{1} << k); ++j) {
        versions[k].push_back(t.NodeVersion(k, j));
      }
    }
    const uint64_t index = t.AddLeaf(RandomLeaf(t.hasher(), rng));
    EXPECT_EQ(t.node_writes() - before, t.depth() + 1);
    for (unsigned k = 0; k <= t.depth(); ++k) {
      const uint64_t on_path = index >> (t.depth() - k);
      for (uint64_t j = 0; j < (uint64_t{1} << k); ++j) {
        EXPECT_EQ(t.NodeVersion(k, j),
                  versions[k][j] + (j == on_path ? 1 : 0));
      }
    }
  }
}

TEST_P(MerkleTest, AppendOnly) {
  MerkleTree t(hp(), 6);
  std::mt19937_64 rng(5);
  std::vector<Digest> leaves;
  for (int i = 0; i < 40; ++i) {
    leaves.push_back(RandomLeaf(t.hasher(), rng));
    t.AddLeaf(leaves.back());
    for (int j = 0; j <= i; ++j) ASSERT_EQ(t.Leaf(j), leaves[j]);
  }
}

TEST_P(MerkleTest, SerializationRoundtrip) {
  MerkleTree t(hp(), 7);
  std::mt19937_64 rng(6);
  for (int i = 0; i < 37; ++i) t.AddLeaf(RandomLeaf(t.hasher(), rng));
  Bytes blob = t.Serialize();
  EXPECT_EQ(blob[0], 1);
  MerkleTree back = MerkleTree::Deserialize(blob, t.Root());
  EXPECT_EQ(back.Root(), t.Root());
  EXPECT_EQ(back.next_free(), 37u);
  EXPECT_EQ(back.IndexOf(t.Leaf(20)), 20u);
  for (uint64_t i = 0; i < 40; ++i) {
    EXPECT_EQ(back.Validation(i).siblings, t.Validation(i).siblings);
  }
  Digest wrong = t.Root();
  wrong.bytes[0] ^= 1;
  EXPECT_THROW(MerkleTree::Deserialize(blob, wrong), ParseError);
  Bytes truncated(blob.begin(), blob.end() - 1);
  EXPECT_THROW(MerkleTree::Deserialize(truncated), ParseError);
  back.AddLeaf(RandomLeaf(t.hasher(), rng));
  EXPECT_EQ(back.next_free(), 38u);
}

INSTANTIATE_TEST_SUITE_P(Profiles, MerkleTest,
                         ::testing::Values("sha256", "algebraic"));

}  // namespace
}  // namespace anonkey::merkle
