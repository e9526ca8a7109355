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

#include "anonkey/merkle/merkle_tree.h"

#include <spdlog/spdlog.h>

#include <string>

namespace anonkey::merkle {
namespace {

constexpr uint8_t kSnapshotVersion = 1;

}  // namespace

MerkleTree::MerkleTree(HashProfile profile, unsigned depth)
    : hasher_(profile), depth_(depth) {
  if (depth < kMinDepth || depth > kMaxDepth) {
    throw PreconditionError("tree depth must be in [1, 32], got " +
                            std::to_string(depth));
  }
  empty_.resize(depth + 1);
  empty_[depth] = hasher_.EmptyLeaf();
  for (unsigned k = depth; k-- > 0;) {
    empty_[k] = hasher_.HashNode(empty_[k + 1], empty_[k + 1]);
  }
  levels_.resize(depth + 1);
  versions_.resize(depth + 1);
}

void MerkleTree::SetNode(unsigned level, uint64_t index, const Digest& value) {
  auto& nodes = levels_[level];
  auto& vers = versions_[level];
  if (index == nodes.size()) {
    nodes.push_back(value);
    vers.push_back(1);
  } else {
    nodes[index] = value;
    ++vers[index];
  }
  ++node_writes_;
}

uint64_t MerkleTree::AddLeaf(const Digest& leaf) {
  if (full()) throw CapacityError("tree is full");
  if (Contains(leaf)) {
    throw DuplicateLeafError("leaf " + leaf.Hex() + " already present");
  }
  if (profile() == HashProfile::kAlgebraic) FrFromDigest(leaf);
  const uint64_t index = next_free_;
  SetNode(depth_, index, leaf);
  uint64_t j = index;
  for (unsigned k = depth_; k-- > 0;) {
    j >>= 1;
    SetNode(k, j, hasher_.HashNode(Node(k + 1, 2 * j), Node(k + 1, 2 * j + 1)));
  }
  index_.emplace(leaf, index);
  ++next_free_;
  return index;
}

Digest MerkleTree::Node(unsigned level, uint64_t index) const {
  if (level > depth_ || index >= (uint64_t{1} << level)) {
    throw PreconditionError("node position out of range");
  }
  const auto& nodes = levels_[level];
  return index < nodes.size() ? nodes[index] : empty_[level];
}

uint64_t MerkleTree::NodeVersion(unsigned level, uint64_t index) const {
  if (level > depth_) throw PreconditionError("level out of range");
  const auto& vers = versions_[level];
  return index < vers.size() ? vers[index] : 0;
}

std::optional<uint64_t> MerkleTree::FindIndex(const Digest& leaf) const {
  auto it = index_.find(leaf);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

uint64_t MerkleTree::IndexOf(const Digest& leaf) const {
  auto idx = FindIndex(leaf);
  if (!idx) throw AbsentLeafError("leaf " + leaf.Hex() + " not in tree");
  return *idx;
}

ValidationList MerkleTree::Validation(uint64_t index) const {
  if (index >= capacity()) {
    throw PreconditionError("leaf index " + std::to_string(index) +
                            " out of range");
  }
  ValidationList val;
  val.siblings.reserve(depth_);
  uint64_t j = index;
  for (unsigned k = depth_; k > 0; --k) {
    val.siblings.push_back(Node(k, j ^ 1));
    j >>= 1;
  }
  return val;
}

Bytes MerkleTree::Serialize() const {
  Bytes out;
  out.reserve(11 + next_free_ * Digest::kSize);
  out.push_back(kSnapshotVersion);
  out.push_back(static_cast<uint8_t>(profile()));
  out.push_back(static_cast<uint8_t>(depth_));
  AppendU64BE(out, next_free_);
  for (const Digest& d : leaves()) Append(out, d.span());
  return out;
}

MerkleTree MerkleTree::Deserialize(ByteSpan data,
                                   std::optional<Digest> expected_root) {
  ByteReader r(data);
  if (r.U8() != kSnapshotVersion) {
    throw ParseError("unsupported tree snapshot version");
  }
  const HashProfile profile = HashProfileFromByte(r.U8());
  const unsigned depth = r.U8();
  if (depth < kMinDepth || depth > kMaxDepth) {
    throw ParseError("tree snapshot depth out of range");
  }
  const uint64_t next_free = r.U64BE();
  if (next_free > (uint64_t{1} << depth) ||
      r.remaining() != next_free * Digest::kSize) {
    throw ParseError("tree snapshot leaf count mismatch");
  }
  MerkleTree tree(profile, depth);
  std::vector<Digest> leaves;
  leaves.reserve(next_free);
  for (uint64_t i = 0; i < next_free; ++i) {
    leaves.push_back(Digest::FromSpan(r.Take(Digest::kSize)));
    if (profile == HashProfile::kAlgebraic) FrFromDigest(leaves.back());
    if (!tree.index_.emplace(leaves.back(), i).second) {
      throw ParseError("tree snapshot has duplicate leaves");
    }
  }
  // Rebuild level by level rather than replaying AddLeaf.
  tree.levels_[depth] = std::move(leaves);
  tree.versions_[depth].assign(next_free, 1);
  for (unsigned k = depth; k-- > 0;) {
    const uint64_t n = (tree.levels_[k + 1].size() + 1) / 2;
    auto& level = tree.levels_[k];
    level.reserve(n);
    for (uint64_t j = 0; j < n; ++j) {
      level.push_back(tree.hasher_.HashNode(tree.Node(k + 1, 2 * j),
                                            tree.Node(k + 1, 2 * j + 1)));
    }
    tree.versions_[k].assign(n, 1);
  }
  tree.next_free_ = next_free;
  if (expected_root && tree.Root() != *expected_root) {
    throw ParseError("tree snapshot root mismatch");
  }
  return tree;
}

Digest FoldPath(const Hasher& hasher, const Digest& leaf, uint64_t index,
                const ValidationList& val) {
  Digest cur = leaf;
  for (const Digest& sibling : val.siblings) {
    cur = (index & 1) == 0 ? hasher.HashNode(cur, sibling)
                           : hasher.HashNode(sibling, cur);
    index >>= 1;
  }
  return cur;
}

bool IsLeafOfTree(const Hasher& hasher, const Digest& leaf, uint64_t index,
                  const ValidationList& val, const Digest& root) {
  const size_t depth = val.depth();
  if (depth < kMinDepth || depth > kMaxDepth) {
    spdlog::warn("validation list has invalid length {}", depth);
    return false;
  }
  if (depth < 64 && (index >> depth) != 0) {
    spdlog::warn("leaf index {} does not fit depth {}", index, depth);
    return false;
  }
  try {
    return FoldPath(hasher, leaf, index, val) == root;
  } catch (const ParseError& e) {
    spdlog::warn("validation list rejected: {}", e.what());
    return false;
  }
}

}  // namespace anonkey::merkle
