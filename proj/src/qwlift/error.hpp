// Copyright 2026 The qwlift Authors.
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

#ifndef QWLIFT_ERROR_HPP_
#define QWLIFT_ERROR_HPP_

#include <sstream>
#include <stdexcept>
#include <string>

namespace qwlift {

// Mirrors the status codes of the C API one-to-one.
enum class ErrorCode {
  kInvalidArgument = 1,
  kDimensionMismatch = 2,
  kInfeasible = 3,
  kNotConverged = 4,
  kTooLarge = 5,
  kIo = 6,
  kParse = 7,
  kInvariant = 8,
  kInternal = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

namespace detail {

template <typename... Args>
[[noreturn]] void fail(ErrorCode code, const Args&... args) {
  std::ostringstream os;
  (os << ... << args);
  throw Error(code, os.str());
}

}  // namespace detail

#define QWLIFT_REQUIRE(cond, code, ...)                    \
  do {                                                     \
    if (!(cond)) ::qwlift::detail::fail(code, __VA_ARGS__); \
  } while (0)

}  // namespace qwlift

#endif  // QWLIFT_ERROR_HPP_
