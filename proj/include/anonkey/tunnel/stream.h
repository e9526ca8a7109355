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

#ifndef ANONKEY_TUNNEL_STREAM_H_
#define ANONKEY_TUNNEL_STREAM_H_

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "anonkey/core/bytes.h"
#include "anonkey/core/errors.h"

// Message-framed byte streams carrying APDU frames between a reader and a
// card. Frames are delivered whole and in order.
namespace anonkey::tunnel {

class TransportError : public Error {
 public:
  using Error::Error;
};

class FrameStream {
 public:
  virtual ~FrameStream() = default;
  // Throws TransportError if the stream is closed or broken.
  virtual void Send(ByteSpan frame) = 0;
  // nullopt once the peer has closed. Throws TransportError on timeout.
  virtual std::optional<Bytes> Receive() = 0;
  virtual void Close() = 0;
  // Zero disables the timeout.
  virtual void SetReceiveTimeout(std::chrono::milliseconds timeout) = 0;
};

// Two connected in-process endpoints.
std::pair<std::unique_ptr<FrameStream>, std::unique_ptr<FrameStream>>
MakePipe();

// Frames over a connected socket, each prefixed with a big-endian u16
// length. Takes ownership of `fd`.
std::unique_ptr<FrameStream> MakeSocketStream(int fd);

// Throws TransportError when the connection fails.
std::unique_ptr<FrameStream> ConnectTcp(const std::string& host,
                                        uint16_t port);

class TcpListener {
 public:
  // Port 0 picks a free port.
  TcpListener(const std::string& host, uint16_t port);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  uint16_t port() const { return port_; }
  // nullptr once the listener is closed.
  std::unique_ptr<FrameStream> Accept();
  void Close();

 private:
  int fd_ = -1;
  uint16_t port_ = 0;
};

// "host:port" -> pair. Throws ConfigError.
std::pair<std::string, uint16_t> ParseHostPort(const std::string& addr);

// Delays each frame by size / bytes_per_second in both directions, emulating
// a slow half-duplex radio link.
class RateLimitedStream : public FrameStream {
 public:
  RateLimitedStream(std::unique_ptr<FrameStream> inner,
                    double bytes_per_second);
  void Send(ByteSpan frame) override;
  std::optional<Bytes> Receive() override;
  void Close() override { inner_->Close(); }
  void SetReceiveTimeout(std::chrono::milliseconds t) override {
    inner_->SetReceiveTimeout(t);
  }

 private:
  void Delay(size_t bytes);
  std::unique_ptr<FrameStream> inner_;
  double bytes_per_second_;
};

// Full APDU log of one endpoint's traffic.
class Transcript {
 public:
  enum class Direction { kCommand, kResponse };
  struct Entry {
    Direction direction;
    Bytes frame;
  };

  void Record(Direction d, ByteSpan frame);
  std::vector<Entry> entries() const;
  void Clear();

 private:
  mutable std::mutex mu_;
  std::vector<Entry> entries_;
};

// Records frames as seen from the reader: sent frames are commands, received
// frames are responses.
class RecordingStream : public FrameStream {
 public:
  RecordingStream(std::unique_ptr<FrameStream> inner,
                  std::shared_ptr<Transcript> transcript);
  void Send(ByteSpan frame) override;
  std::optional<Bytes> Receive() override;
  void Close() override { inner_->Close(); }
  void SetReceiveTimeout(std::chrono::milliseconds t) override {
    inner_->SetReceiveTimeout(t);
  }

 private:
  std::unique_ptr<FrameStream> inner_;
  std::shared_ptr<Transcript> transcript_;
};

// Closes the stream after `frames_before_drop` successful sends, emulating
// the card leaving the field.
class FaultInjectingStream : public FrameStream {
 public:
  FaultInjectingStream(std::unique_ptr<FrameStream> inner,
                       size_t frames_before_drop);
  void Send(ByteSpan frame) override;
  std::optional<Bytes> Receive() override;
  void Close() override { inner_->Close(); }
  void SetReceiveTimeout(std::chrono::milliseconds t) override {
    inner_->SetReceiveTimeout(t);
  }

 private:
  std::unique_ptr<FrameStream> inner_;
  size_t remaining_;
};

// Checks that the transcript alternates command, response, command, ...
// starting with a command and every frame parses. Returns a description of
// the first violation.
std::optional<std::string> CheckReaderInitiates(
    const std::vector<Transcript::Entry>& entries);

}  // namespace anonkey::tunnel

#endif  // ANONKEY_TUNNEL_STREAM_H_
