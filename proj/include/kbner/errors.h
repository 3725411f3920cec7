// Copyright 2026 The kbner Authors
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

#ifndef KBNER_ERRORS_H_
#define KBNER_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kbner {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input file or record violates its documented format. Carries the 1-based
// line number when known (0 otherwise).
class FormatError : public Error {
 public:
  explicit FormatError(const std::string &message, size_t line = 0)
      : Error(line == 0 ? message
                        : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  size_t line() const { return line_; }

 private:
  size_t line_;
};

// A referenced entity, task or annotator does not exist.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

// Well-formed input rejected by a domain rule (invalid label, empty surface,
// unresolvable entity, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace kbner

#endif  // KBNER_ERRORS_H_
