// Copyright 2026 The eonkit authors
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

#ifndef EONKIT_ERRORS_HPP_
#define EONKIT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace eonkit {

// Error categories map 1:1 onto CLI exit codes: config 2, oracle 3, data 4.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a classification or transcription backend cannot produce a
// result (plugin timeout, malformed response, dead process, ...). Scores are
// never silently substituted.
class OracleError : public std::runtime_error {
 public:
  explicit OracleError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace eonkit

#endif  // EONKIT_ERRORS_HPP_
