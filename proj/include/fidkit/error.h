// Copyright 2026 The fidkit Authors.
// SPDX-License-Identifier: Apache-2.0
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

#ifndef FIDKIT_ERROR_H_
#define FIDKIT_ERROR_H_

#include <stdexcept>
#include <string>

namespace fidkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when two scores were produced under incompatible extractors or
// preprocessing and must not be compared. The CLI maps it to exit code 2.
class IncomparableError : public Error {
 public:
  using Error::Error;
};

}  // namespace fidkit

#define FIDKIT_CHECK(cond, msg)                      \
  do {                                               \
    if (!(cond)) throw ::fidkit::Error(msg);         \
  } while (0)

#endif  // FIDKIT_ERROR_H_
