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

#include "anonkey/core/encoding.h"

#include <limits>

#include "anonkey/core/errors.h"

namespace anonkey {

Bytes Encode(ByteSpan value) {
  if (value.size() > std::numeric_limits<uint32_t>::max()) {
    throw PreconditionError("value too long to encode");
  }
  Bytes out;
  out.reserve(4 + value.size());
  AppendU32BE(out, static_cast<uint32_t>(value.size()));
  Append(out, value);
  return out;
}

Bytes EncodePair(ByteSpan a, ByteSpan b) {
  Bytes out = Encode(a);
  Append(out, Encode(b));
  return out;
}

}  // namespace anonkey
