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

#ifndef ANONKEY_CORE_ENCODING_H_
#define ANONKEY_CORE_ENCODING_H_

#include "anonkey/core/bytes.h"

namespace anonkey {

// Canonical component encoding used wherever values are concatenated before
// hashing or signing: u32be(length) || bytes.
Bytes Encode(ByteSpan value);

// encode(a) || encode(b).
Bytes EncodePair(ByteSpan a, ByteSpan b);

}  // namespace anonkey

#endif  // ANONKEY_CORE_ENCODING_H_
