// Copyright 2026 The effcorp Authors.
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

#ifndef EFFCORP_DIGEST_H_
#define EFFCORP_DIGEST_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace effcorp {

// Lowercase hex SHA-256 of `bytes`.
std::string Sha256Hex(std::string_view bytes);

// 64-bit FNV-1a; stable across platforms, used for seeding.
uint64_t Fnv1a64(std::string_view bytes);

// Whole-file helpers. Both throw IoError.
std::string ReadFile(const std::string &path);
void WriteFile(const std::string &path, std::string_view bytes);

}  // namespace effcorp

#endif  // EFFCORP_DIGEST_H_
