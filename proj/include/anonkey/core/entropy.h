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

#ifndef ANONKEY_CORE_ENTROPY_H_
#define ANONKEY_CORE_ENTROPY_H_

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "anonkey/core/bytes.h"

namespace anonkey {

enum class EntropyKind { kMock, kOs, kExternal };

std::string_view EntropyKindName(EntropyKind k);
// Accepts "mock", "os" or "external"; throws ConfigError otherwise.
EntropyKind ParseEntropyKind(std::string_view name);

// Source of key material. Calls are serialized internally, so one source can
// be shared between threads. Failures throw EntropyError and never return a
// partially filled buffer.
class EntropySource {
 public:
  virtual ~EntropySource() = default;

  SecretBytes Draw(size_t n);
  void Fill(std::span<uint8_t> out);

  virtual EntropyKind kind() const = 0;
  // Nominal throughput in bytes per second, 0 when unbounded.
  virtual double rate_bytes_per_second() const { return 0; }
  uint64_t bytes_served() const;

 protected:
  virtual void FillLocked(std::span<uint8_t> out) = 0;

 private:
  mutable std::mutex mu_;
  uint64_t served_ = 0;
};

// Deterministic, consuming stream for tests. Block i of the stream is
// SHA-256("anonkey-mock-entropy" || u64be(seed) || u64be(i)); successive draws
// continue where the previous one stopped.
class MockEntropySource : public EntropySource {
 public:
  explicit MockEntropySource(uint64_t seed) : seed_(seed) {}

  EntropyKind kind() const override { return EntropyKind::kMock; }

  // The first `n` bytes of the stream for `seed`, independent of any
  // instance state. Used as the test oracle.
  static Bytes StreamPrefix(uint64_t seed, size_t n);
  // Bytes [offset, offset + n) of the stream for `seed`.
  static Bytes StreamSlice(uint64_t seed, uint64_t offset, size_t n);

  // Makes the next draw fail (once), to exercise error paths.
  void FailNextDraw() { fail_next_ = true; }

 protected:
  void FillLocked(std::span<uint8_t> out) override;

 private:
  uint64_t seed_;
  uint64_t position_ = 0;
  bool fail_next_ = false;
};

// Platform CSPRNG (getrandom).
class OsEntropySource : public EntropySource {
 public:
  EntropyKind kind() const override { return EntropyKind::kOs; }

 protected:
  void FillLocked(std::span<uint8_t> out) override;
};

// Reads a byte stream from an endpoint, opened afresh for every request to
// model a remote generator. The endpoint is either a filesystem path (file,
// device or FIFO) or "tcp://host:port". An artificial setup latency is added
// per request and reads are paced to `rate_bytes_per_second` when non-zero.
class ExternalEntropySource : public EntropySource {
 public:
  struct Options {
    std::string endpoint;
    std::chrono::microseconds setup_latency{0};
    double rate_bytes_per_second = 0;
  };

  explicit ExternalEntropySource(Options options)
      : options_(std::move(options)) {}

  EntropyKind kind() const override { return EntropyKind::kExternal; }
  double rate_bytes_per_second() const override {
    return options_.rate_bytes_per_second;
  }

 protected:
  void FillLocked(std::span<uint8_t> out) override;

 private:
  Options options_;
  uint64_t offset_ = 0;
};

struct EntropyConfig {
  EntropyKind kind = EntropyKind::kOs;
  uint64_t mock_seed = 0;
  ExternalEntropySource::Options external;
};

std::unique_ptr<EntropySource> MakeEntropySource(const EntropyConfig& config);

// Empirical Shannon entropy of the byte histogram, in bits per byte.
double ShannonBitsPerByte(ByteSpan data);

}  // namespace anonkey

#endif  // ANONKEY_CORE_ENTROPY_H_
