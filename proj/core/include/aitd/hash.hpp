/*
 * Copyright 2026 The aitd Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef AITD_HASH_HPP_
#define AITD_HASH_HPP_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace aitd {

// Lowercase hex SHA-256 digests.
std::string sha256_hex(std::span<const std::byte> bytes);
std::string sha256_hex(std::string_view text);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace aitd

#endif  // AITD_HASH_HPP_
