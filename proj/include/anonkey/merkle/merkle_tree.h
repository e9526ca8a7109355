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

#ifndef ANONKEY_MERKLE_MERKLE_TREE_H_
#define ANONKEY_MERKLE_MERKLE_TREE_H_

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "anonkey/core/digest.h"
#include "anonkey/core/errors.h"
#include "anonkey/core/hash.h"

namespace anonkey::merkle {

inline constexpr unsigned kMinDepth = 1;
inline constexpr unsigned kMaxDepth = 32;

class CapacityError : public Error {
 public:
  using Error::Error;
};
class DuplicateLeafError : public Error {
 public:
  using Error::Error;
};
class AbsentLeafError : public Error {
 public:
  using Error::Error;
};

// Sibling digests from the leaf level up to just below the root.
struct ValidationList {
  std::vector<Digest> siblings;

  size_t depth() const { return siblings.size(); }
};

// Fixed-depth, append-only binary tree. Level 0 is the root and level
// `depth` holds the leaves. Unappended leaf slots hold H(0x00); only the
// occupied prefix of each level is stored, the rest is covered by the
// per-level empty-subtree digests.
//
// Child order: the node at (k, j) is H(node(k+1, 2j) || node(k+1, 2j+1)).
// When folding a leaf upward, bit k of the index (low bit at the leaf level)
// set to 0 means the running digest is the left input.
//
// Not internally synchronized: one writer, or any number of readers.
class MerkleTree {
 public:
  // Throws PreconditionError unless kMinDepth <= depth <= kMaxDepth.
  MerkleTree(HashProfile profile, unsigned depth);

  unsigned depth() const { return depth_; }
  HashProfile profile() const { return hasher_.profile(); }
  const Hasher& hasher() const { return hasher_; }
  uint64_t capacity() const { return uint64_t{1} << depth_; }
  uint64_t next_free() const { return next_free_; }
  bool full() const { return next_free_ == capacity(); }

  // Appends at index next_free and returns that index. Throws CapacityError
  // when full and DuplicateLeafError if `leaf` is already present.
  uint64_t AddLeaf(const Digest& leaf);

  Digest Root() const { return Node(0, 0); }

  // Throws AbsentLeafError if `leaf` was never appended.
  uint64_t IndexOf(const Digest& leaf) const;
  std::optional<uint64_t> FindIndex(const Digest& leaf) const;
  bool Contains(const Digest& leaf) const { return index_.count(leaf) != 0; }

  // Throws PreconditionError if index >= capacity().
  ValidationList Validation(uint64_t index) const;

  // Node value at (level, index), including empty slots.
  Digest Node(unsigned level, uint64_t index) const;
  Digest Leaf(uint64_t index) const { return Node(depth_, index); }
  const std::vector<Digest>& leaves() const { return levels_[depth_]; }
  // Digest of an all-empty subtree whose root sits at `level`.
  const Digest& EmptyNode(unsigned level) const { return empty_[level]; }

  // Number of times the stored value at (level, index) has been written.
  uint64_t NodeVersion(unsigned level, uint64_t index) const;
  // Total node writes since construction (leaves included).
  uint64_t node_writes() const { return node_writes_; }

  // version || profile || depth || next_free:u64be || leaf digests. Internal
  // nodes are recomputed on load.
  Bytes Serialize() const;
  // Throws ParseError on malformed input, or when `expected_root` is given
  // and the rebuilt root differs.
  static MerkleTree Deserialize(ByteSpan data,
                                std::optional<Digest> expected_root = {});

 private:
  void SetNode(unsigned level, uint64_t index, const Digest& value);

  Hasher hasher_;
  unsigned depth_;
  uint64_t next_free_ = 0;
  std::vector<Digest> empty_;
  // levels_[k] holds the occupied prefix of level k.
  std::vector<std::vector<Digest>> levels_;
  std::vector<std::vector<uint64_t>> versions_;
  std::unordered_map<Digest, uint64_t> index_;
  uint64_t node_writes_ = 0;
};

// Folds `leaf` upward along `val` using the bits of `index` and compares the
// result to `root`. Returns false, after logging the reason, when the list
// length is outside [kMinDepth, kMaxDepth], the index does not fit, or a
// digest is not valid for the profile.
bool IsLeafOfTree(const Hasher& hasher, const Digest& leaf, uint64_t index,
                  const ValidationList& val, const Digest& root);

// Root obtained by folding; exposed for tests and the circuit witness.
Digest FoldPath(const Hasher& hasher, const Digest& leaf, uint64_t index,
                const ValidationList& val);

}  // namespace anonkey::merkle

#endif  // ANONKEY_MERKLE_MERKLE_TREE_H_
