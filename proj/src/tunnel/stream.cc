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

#include "anonkey/tunnel/stream.h"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <thread>

#include "anonkey/tunnel/apdu.h"

namespace anonkey::tunnel {
namespace {

struct Queue {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<Bytes> frames;
  bool closed = false;
};

class PipeEnd : public FrameStream {
 public:
  PipeEnd(std::shared_ptr<Queue> in, std::shared_ptr<Queue> out)
      : in_(std::move(in)), out_(std::move(out)) {}
  ~PipeEnd() override { Close(); }

  void Send(ByteSpan frame) override {
    std::lock_guard lock(out_->mu);
    if (out_->closed) throw TransportError("pipe closed");
    out_->frames.emplace_back(frame.begin(), frame.end());
    out_->cv.notify_all();
  }

  std::optional<Bytes> Receive() override {
    std::unique_lock lock(in_->mu);
    auto ready = [&] { return !in_->frames.empty() || in_->closed; };
    if (timeout_.count() > 0) {
      if (!in_->cv.wait_for(lock, timeout_, ready)) {
        throw TransportError("receive timed out");
      }
    } else {
      in_->cv.wait(lock, ready);
    }
    if (in_->frames.empty()) return std::nullopt;
    Bytes f = std::move(in_->frames.front());
    in_->frames.pop_front();
    return f;
  }

  void Close() override {
    for (auto* q : {in_.get(), out_.get()}) {
      std::lock_guard lock(q->mu);
      q->closed = true;
      q->cv.notify_all();
    }
  }

  void SetReceiveTimeout(std::chrono::milliseconds t) override {
    timeout_ = t;
  }

 private:
  std::shared_ptr<Queue> in_;
  std::shared_ptr<Queue> out_;
  std::chrono::milliseconds timeout_{0};
};

class SocketStream : public FrameStream {
 public:
  explicit SocketStream(int fd) : fd_(fd) {
    int one = 1;
    setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  }
  ~SocketStream() override {
    if (fd_ >= 0) ::close(fd_);
  }

  void Send(ByteSpan frame) override {
    if (frame.size() > 0xffff) throw TransportError("frame too large");
    Bytes buf;
    AppendU16BE(buf, static_cast<uint16_t>(frame.size()));
    Append(buf, frame);
    size_t off = 0;
    while (off < buf.size()) {
      ssize_t n = ::send(fd_, buf.data() + off, buf.size() - off, MSG_NOSIGNAL);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) throw TransportError("send failed: " + Errno());
      off += static_cast<size_t>(n);
    }
  }

  std::optional<Bytes> Receive() override {
    uint8_t hdr[2];
    if (!ReadFull(hdr, 2, true)) return std::nullopt;
    Bytes frame(static_cast<size_t>((hdr[0] << 8) | hdr[1]));
    if (!frame.empty()) ReadFull(frame.data(), frame.size(), false);
    return frame;
  }

  void Close() override {
    if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
  }

  void SetReceiveTimeout(std::chrono::milliseconds t) override {
    timeval tv{};
    tv.tv_sec = static_cast<time_t>(t.count() / 1000);
    tv.tv_usec = static_cast<suseconds_t>((t.count() % 1000) * 1000);
    setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
  }

 private:
  static std::string Errno() { return std::strerror(errno); }

  // False on a clean EOF before the first byte when `eof_ok`.
  bool ReadFull(uint8_t* p, size_t n, bool eof_ok) {
    size_t off = 0;
    while (off < n) {
      ssize_t r = ::recv(fd_, p + off, n - off, 0);
      if (r < 0 && errno == EINTR) continue;
      if (r < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
        throw TransportError("receive timed out");
      }
      if (r < 0) throw TransportError("receive failed: " + Errno());
      if (r == 0) {
        if (off == 0 && eof_ok) return false;
        throw TransportError("connection closed mid-frame");
      }
      off += static_cast<size_t>(r);
    }
    return true;
  }

  int fd_;
};

}  // namespace

std::pair<std::unique_ptr<FrameStream>, std::unique_ptr<FrameStream>>
MakePipe() {
  auto a = std::make_shared<Queue>();
  auto b = std::make_shared<Queue>();
  return {std::make_unique<PipeEnd>(a, b), std::make_unique<PipeEnd>(b, a)};
}

std::unique_ptr<FrameStream> MakeSocketStream(int fd) {
  return std::make_unique<SocketStream>(fd);
}

std::unique_ptr<FrameStream> ConnectTcp(const std::string& host,
                                        uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string port_str = std::to_string(port);
  if (getaddrinfo(host.c_str(), port_str.c_str(), &hints, &res) != 0) {
    throw TransportError("cannot resolve " + host);
  }
  int fd = -1;
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  freeaddrinfo(res);
  if (fd < 0) {
    throw TransportError("cannot connect to " + host + ":" + port_str);
  }
  return MakeSocketStream(fd);
}

TcpListener::TcpListener(const std::string& host, uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw TransportError("socket failed");
  int one = 1;
  setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (inet_pton(AF_INET, host == "localhost" ? "127.0.0.1" : host.c_str(),
                &addr.sin_addr) != 1) {
    ::close(fd_);
    throw TransportError("bad listen address " + host);
  }
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(fd_, 16) != 0) {
    const std::string err = std::strerror(errno);
    ::close(fd_);
    throw TransportError("cannot listen on " + host + ":" +
                         std::to_string(port) + ": " + err);
  }
  socklen_t len = sizeof(addr);
  getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() {
  Close();
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<FrameStream> TcpListener::Accept() {
  for (;;) {
    int c = ::accept(fd_, nullptr, nullptr);
    if (c >= 0) return MakeSocketStream(c);
    if (errno == EINTR || errno == ECONNABORTED) continue;
    return nullptr;
  }
}

void TcpListener::Close() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

std::pair<std::string, uint16_t> ParseHostPort(const std::string& addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos || colon == 0) {
    throw ConfigError("expected host:port, got '" + addr + "'");
  }
  const std::string port_str = addr.substr(colon + 1);
  unsigned long port = 0;
  try {
    size_t used = 0;
    port = std::stoul(port_str, &used);
    if (used != port_str.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ConfigError("bad port in '" + addr + "'");
  }
  if (port > 65535) throw ConfigError("bad port in '" + addr + "'");
  return {addr.substr(0, colon), static_cast<uint16_t>(port)};
}

RateLimitedStream::RateLimitedStream(std::unique_ptr<FrameStream> inner,
                                     double bytes_per_second)
    : inner_(std::move(inner)), bytes_per_second_(bytes_per_second) {
  if (!(bytes_per_second > 0)) {
    throw PreconditionError("rate must be positive");
  }
}

void RateLimitedStream::Delay(size_t bytes) {
  std::this_thread::sleep_for(
      std::chrono::duration<double>(bytes / bytes_per_second_));
}

void RateLimitedStream::Send(ByteSpan frame) {
  Delay(frame.size());
  inner_->Send(frame);
}

std::optional<Bytes> RateLimitedStream::Receive() {
  auto f = inner_->Receive();
  if (f) Delay(f->size());
  return f;
}

void Transcript::Record(Direction d, ByteSpan frame) {
  std::lock_guard lock(mu_);
  entries_.push_back({d, Bytes(frame.begin(), frame.end())});
}

std::vector<Transcript::Entry> Transcript::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

void Transcript::Clear() {
  std::lock_guard lock(mu_);
  entries_.clear();
}

RecordingStream::RecordingStream(std::unique_ptr<FrameStream> inner,
                                 std::shared_ptr<Transcript> transcript)
    : inner_(std::move(inner)), transcript_(std::move(transcript)) {}

void RecordingStream::Send(ByteSpan frame) {
  transcript_->Record(Transcript::Direction::kCommand, frame);
  inner_->Send(frame);
}

std::optional<Bytes> RecordingStream::Receive() {
  auto f = inner_->Receive();
  if (f) transcript_->Record(Transcript::Direction::kResponse, *f);
  return f;
}

FaultInjectingStream::FaultInjectingStream(std::unique_ptr<FrameStream> inner,
                                           size_t frames_before_drop)
    : inner_(std::move(inner)), remaining_(frames_before_drop) {}

void FaultInjectingStream::Send(ByteSpan frame) {
  if (remaining_ == 0) {
    inner_->Close();
    throw TransportError("link dropped (injected)");
  }
  --remaining_;
  inner_->Send(frame);
}

std::optional<Bytes> FaultInjectingStream::Receive() {
  return inner_->Receive();
}

std::optional<std::string> CheckReaderInitiates(
    const std::vector<Transcript::Entry>& entries) {
  for (size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    const bool want_command = i % 2 == 0;
    if (want_command != (e.direction == Transcript::Direction::kCommand)) {
      return "frame " + std::to_string(i) + ": expected " +
             (want_command ? "a command" : "a response");
    }
    const bool parses = want_command
                            ? ApduCommand::Decode(e.frame).has_value()
                            : ApduResponse::Decode(e.frame).has_value();
    if (!parses) return "frame " + std::to_string(i) + " does not parse";
  }
  return std::nullopt;
}

}  // namespace anonkey::tunnel
