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

#ifndef ANONKEY_CORE_ERRORS_H_
#define ANONKEY_CORE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace anonkey {

// Root of every exception thrown by this project.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed wire or file data.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Caller violated a documented precondition (bad parameter, wrong state).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class EntropyError : public Error {
 public:
  using Error::Error;
};

class CryptoError : public Error {
 public:
  using Error::Error;
};

// KEM decapsulation failed: wrong key or tampered ciphertext.
class DecryptionError : public CryptoError {
 public:
  using CryptoError::CryptoError;
};

class CertificateParseError : public ParseError {
 public:
  using ParseError::ParseError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace anonkey

#endif  // ANONKEY_CORE_ERRORS_H_
