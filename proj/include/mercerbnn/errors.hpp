// Copyright 2026 The mercerbnn Authors
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

#ifndef MERCERBNN_ERRORS_HPP_
#define MERCERBNN_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace mbn {

// Bad configuration, schema violation, dimension mismatch. Maps to exit
// code 2 at the CLI boundary.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Runtime numerical failure (non-finite gradient, factorization failure,
// solver breakdown). Maps to exit code 3 at the CLI boundary.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mbn

#endif  // MERCERBNN_ERRORS_HPP_
