/* Copyright 2026 The ascnet Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef ASCNET_COMMON_FILES_HPP_
#define ASCNET_COMMON_FILES_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace ascnet {

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

// 64-bit FNV-1a, used for content-addressed cache names.
std::uint64_t fnv1a64(std::string_view data);

}  // namespace ascnet

#endif  // ASCNET_COMMON_FILES_HPP_
