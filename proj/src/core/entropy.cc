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

#include "anonkey/core/entropy.h"

#include <fcntl.h>
#include <netdb.h>
#include <sys/random.h>
#include <sys/socket.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <thread>

#include "anonkey/core/errors.h"
#include "anonkey/core/hash.h"

namespace anonkey {
namespace {

constexpr std::string_view kMockLabel = "anonkey-mock-entropy";

Digest MockBlock(uint64_t seed, uint64_t index) {
  Bytes input(kMockLabel.begin(), kMockLabel.end());
  AppendU64BE(input, seed);
  AppendU64BE(input, index);
  return Sha256(input);
}

class FdCloser {
 public:
  explicit FdCloser(int fd) : fd_(fd) {}
  ~FdCloser() {
    if (fd_ >= 0) ::close(fd_);
  }
  int get() const { return fd_; }

 private:
  int fd_;
};

int ConnectTcp(const std::string& hostport) {
  const auto colon = hostport.rfind(':');
  if (colon == std::string::npos) {
    throw EntropyError("external endpoint needs host:port: " + hostport);
  }
  const std::string host = hostport.substr(0, colon);
  const std::string port = hostport.substr(colon + 1);
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (::getaddrinfo(host.c_str(), port.c_str(), &hints, &res) != 0) {
    throw EntropyError("cannot resolve external endpoint " + hostport);
  }
  int fd = -1;
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) throw EntropyError("cannot connect to " + hostport);
  return fd;
}

}  // namespace

std::string_view EntropyKindName(EntropyKind k) {
  switch (k) {
    case EntropyKind::kMock:
      return "mock";
    case EntropyKind::kOs:
      return "os";
    case EntropyKind::kExternal:
      return "external";
  }
  return "unknown";
}

EntropyKind ParseEntropyKind(std::string_view name) {
  if (name == "mock") return EntropyKind::kMock;
  if (name == "os") return EntropyKind::kOs;
  if (name == "external") return EntropyKind::kExternal;
  throw ConfigError("unknown entropy kind '" + std::string(name) + "'");
}

SecretBytes EntropySource::Draw(size_t n) {
  SecretBytes out{Bytes(n)};
  Fill(out.mutable_span());
  return out;
}

void EntropySource::Fill(std::span<uint8_t> out) {
  std::lock_guard<std::mutex> lock(mu_);
  try {
    FillLocked(out);
  } catch (...) {
    SecureZero(out);
    throw;
  }
  served_ += out.size();
}

uint64_t EntropySource::bytes_served() const {
  std::lock_guard<std::mutex> lock(mu_);
  return served_;
}

Bytes MockEntropySource::StreamSlice(uint64_t seed, uint64_t offset,
                                     size_t n) {
  Bytes out;
  out.reserve(n);
  uint64_t pos = offset;
  while (out.size() < n) {
    const Digest block = MockBlock(seed, pos / Digest::kSize);
    const size_t skip = pos % Digest::kSize;
    const size_t take = std::min(Digest::kSize - skip, n - out.size());
    out.insert(out.end(), block.bytes.begin() + skip,
               block.bytes.begin() + skip + take);
    pos += take;
  }
  return out;
}

Bytes MockEntropySource::StreamPrefix(uint64_t seed, size_t n) {
  return StreamSlice(seed, 0, n);
}

void MockEntropySource::FillLocked(std::span<uint8_t> out) {
  if (fail_next_) {
    fail_next_ = false;
    throw EntropyError("mock entropy source: injected failure");
  }
  Bytes slice = StreamSlice(seed_, position_, out.size());
  std::copy(slice.begin(), slice.end(), out.begin());
  SecureZero(slice);
  position_ += out.size();
}

void OsEntropySource::FillLocked(std::span<uint8_t> out) {
  size_t done = 0;
  while (done < out.size()) {
    const ssize_t r = ::getrandom(out.data() + done, out.size() - done, 0);
    if (r < 0) {
      if (errno == EINTR) continue;
      throw EntropyError(std::string("getrandom failed: ") +
                         std::strerror(errno));
    }
    done += static_cast<size_t>(r);
  }
}

void ExternalEntropySource::FillLocked(std::span<uint8_t> out) {
  if (options_.setup_latency.count() > 0) {
    std::this_thread::sleep_for(options_.setup_latency);
  }
  constexpr std::string_view kTcp = "tcp://";
  int fd;
  if (options_.endpoint.starts_with(kTcp)) {
    fd = ConnectTcp(options_.endpoint.substr(kTcp.size()));
  } else {
    fd = ::open(options_.endpoint.c_str(), O_RDONLY | O_CLOEXEC);
    if (fd < 0) {
      throw EntropyError("cannot open external endpoint " +
                         options_.endpoint);
    }
  }
  FdCloser closer(fd);
  // Regular files are consumed like a stream across requests.
  if (!options_.endpoint.starts_with(kTcp) && offset_ > 0) {
    ::lseek(fd, static_cast<off_t>(offset_), SEEK_SET);
  }
  const auto start = std::chrono::steady_clock::now();
  size_t done = 0;
  while (done < out.size()) {
    const ssize_t r = ::read(fd, out.data() + done, out.size() - done);
    if (r < 0 && errno == EINTR) continue;
    if (r <= 0) {
      throw EntropyError("external endpoint ended after " +
                         std::to_string(done) + " bytes");
    }
    done += static_cast<size_t>(r);
    if (options_.rate_bytes_per_second > 0) {
      const auto due = start + std::chrono::duration<double>(
                                   done / options_.rate_bytes_per_second);
      std::this_thread::sleep_until(due);
    }
  }
  offset_ += done;
}

std::unique_ptr<EntropySource> MakeEntropySource(const EntropyConfig& config) {
  switch (config.kind) {
    case EntropyKind::kMock:
      return std::make_unique<MockEntropySource>(config.mock_seed);
    case EntropyKind::kOs:
      return std::make_unique<OsEntropySource>();
    case EntropyKind::kExternal:
      if (config.external.endpoint.empty()) {
        throw ConfigError("external entropy source needs an endpoint");
      }
      return std::make_unique<ExternalEntropySource>(config.external);
  }
  throw ConfigError("bad entropy kind");
}

double ShannonBitsPerByte(ByteSpan data) {
  if (data.empty()) return 0;
  std::array<uint64_t, 256> counts{};
  for (uint8_t b : data) ++counts[b];
  double h = 0;
  const double n = static_cast<double>(data.size());
  for (uint64_t c : counts) {
    if (c == 0) continue;
    const double p = c / n;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace anonkey
