// Copyright 2026 The speechscale Authors. All Rights Reserved.
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

#pragma once

#include <stdexcept>
#include <string>

namespace speechscale {

// Base class for every failure raised by the library. Anything derived from
// Error is caused by the caller's inputs (bad parameters, unusable data,
// unreadable files); the CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated (non-positive length, f outside
// a warp domain, mismatched sizes, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The data is well-formed but carries no information to estimate from,
// e.g. a shift matrix with no speaker variation.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

// Estimation finished but produced an unusable result (non-monotone scale).
class EstimationError : public Error {
 public:
  using Error::Error;
};

// Corpus or artifact text could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Filesystem failure; the message carries the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace speechscale
