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

#ifndef ASCNET_COMMON_ERROR_HPP_
#define ASCNET_COMMON_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ascnet {

// Values are part of the C ABI (see include/ascnet/ascnet.h); append only.
enum class ErrorCode : int {
  kArgument = 1,
  kDecode = 2,
  kUnsupportedFormat = 3,
  kShape = 4,
  kState = 5,
  kOptimizer = 6,
  kParse = 7,
  kFormat = 8,
  kSelection = 9,
  kAlignment = 10,
  kIo = 11,
  kUsage = 12,
  kInvariant = 13,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) throw Error(code, message);
}

}  // namespace ascnet

#endif  // ASCNET_COMMON_ERROR_HPP_
