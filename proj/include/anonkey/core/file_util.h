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

#ifndef ANONKEY_CORE_FILE_UTIL_H_
#define ANONKEY_CORE_FILE_UTIL_H_

#include <filesystem>
#include <optional>

#include "anonkey/core/bytes.h"

namespace anonkey {

// All functions throw IoError on failure.
Bytes ReadFileBytes(const std::filesystem::path& path);
std::string ReadFileText(const std::filesystem::path& path);

// Writes to a temporary sibling, fsyncs and renames over `path`, so readers
// see either the old or the new content. `mode` sets the file permissions
// (e.g. 0600) when given.
void WriteFileAtomic(const std::filesystem::path& path, ByteSpan data,
                     std::optional<unsigned> mode = std::nullopt);

// Appends and fsyncs.
void AppendFileSync(const std::filesystem::path& path, ByteSpan data);

// Exclusive advisory lock on `path` (created if missing), held for the
// object's lifetime. Throws IoError if another process holds it.
class FileLock {
 public:
  explicit FileLock(const std::filesystem::path& path);
  ~FileLock();
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace anonkey

#endif  // ANONKEY_CORE_FILE_UTIL_H_
