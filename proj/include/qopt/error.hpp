// Copyright 2026 The qopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QOPT_ERROR_HPP_INCLUDED
#define QOPT_ERROR_HPP_INCLUDED

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qopt {

// Rejected input or configuration (dimension mismatch, bad parameter).
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A documented limit would be exceeded; the caller may raise the limit.
class Refusal : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class Infeasible : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string &what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

} // namespace qopt

#endif // QOPT_ERROR_HPP_INCLUDED
