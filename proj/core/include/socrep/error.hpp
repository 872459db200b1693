// Copyright 2026 The socrep Authors
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

#ifndef SOCREP_ERROR_HPP_
#define SOCREP_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace socrep {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: empty weights, non-positive entries, bad dimensions.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Argument is well formed but outside the domain of the operation, e.g. a
// lattice point outside the scaled simplex.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Text input (JSON, LP solution files) could not be interpreted.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Integer overflow in exact arithmetic.
class OverflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace socrep

#endif  // SOCREP_ERROR_HPP_
