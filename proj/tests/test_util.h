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

#ifndef ANONKEY_TESTS_TEST_UTIL_H_
#define ANONKEY_TESTS_TEST_UTIL_H_

#include <stdlib.h>

#include <filesystem>
#include <string>

#include "anonkey/core/certificate.h"
#include "anonkey/core/entropy.h"

namespace anonkey::testing {

// mkdtemp directory removed on destruction.
class ScopedTempDir {
 public:
  ScopedTempDir() {
    std::string tmpl =
        (std::filesystem::temp_directory_path() / "anonkey_XXXXXX").string();
    if (!mkdtemp(tmpl.data())) abort();
    path_ = tmpl;
  }
  ~ScopedTempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScopedTempDir(const ScopedTempDir&) = delete;
  ScopedTempDir& operator=(const ScopedTempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// A user holding a CA-issued certificate and its signing key.
struct Enrolled {
  SigningKeyPair keys;
  Certificate cert;
};

inline Enrolled Enroll(const TestCa& ca, const std::string& subject,
                       EntropySource& entropy) {
  SigningKeyPair keys = GenerateSigningKey(entropy);
  Certificate cert = ca.Issue(subject, keys.verify_key);
  return {std::move(keys), std::move(cert)};
}

}  // namespace anonkey::testing

#endif  // ANONKEY_TESTS_TEST_UTIL_H_
