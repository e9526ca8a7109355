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

#include "anonkey/core/digest.h"

#include <algorithm>
#include <string>

#include "anonkey/core/errors.h"

namespace anonkey {

Digest Digest::FromSpan(ByteSpan data) {
  if (data.size() != kSize) {
    throw ParseError("digest must be 32 bytes, got " +
                     std::to_string(data.size()));
  }
  Digest d;
  std::copy(data.begin(), data.end(), d.bytes.begin());
  return d;
}

Digest Digest::FromHex(std::string_view hex) {
  return FromSpan(anonkey::FromHex(hex));
}

}  // namespace anonkey
