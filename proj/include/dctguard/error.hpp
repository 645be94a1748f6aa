// Copyright 2026 The dctguard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace dctguard {

// Broad failure classes. The CLI maps each one onto a process exit status.
enum class ErrorKind {
  kUsage = 1,
  kIo = 2,
  kValidation = 3,
  kEvaluator = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised when an input image carries an alpha channel.
class AlphaChannelError : public Error {
 public:
  explicit AlphaChannelError(const std::string& path)
      : Error(ErrorKind::kIo, "image has an alpha channel: " + path) {}
};

inline Error usage_error(const std::string& what) {
  return Error(ErrorKind::kUsage, what);
}
inline Error io_error(const std::string& what) {
  return Error(ErrorKind::kIo, what);
}
inline Error validation_error(const std::string& what) {
  return Error(ErrorKind::kValidation, what);
}

}  // namespace dctguard
