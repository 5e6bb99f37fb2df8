// common/check.h

// Copyright 2026  The msrnnt authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef MSRNNT_COMMON_CHECK_H_
#define MSRNNT_COMMON_CHECK_H_

#include <sstream>
#include <stdexcept>
#include <string>

namespace msrnnt {

// Base class for all errors raised by the library. Maps to CLI exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dimension / topology mismatches.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Malformed files (corpus manifests, checkpoints, configs).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Numerical failures (non-finite loss or gradient). Maps to CLI exit code 2.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace msrnnt

// Validation checks stay on in release builds; they guard user input and
// inter-module contracts, not hot inner loops.
#define MSRNNT_CHECK(cond, msg)                   \
  do {                                            \
    if (!(cond)) {                                \
      std::ostringstream os__;                    \
      os__ << msg;                                \
      throw ::msrnnt::Error(os__.str());          \
    }                                             \
  } while (0)

#define MSRNNT_CHECK_AS(cond, ExType, msg)        \
  do {                                            \
    if (!(cond)) {                                \
      std::ostringstream os__;                    \
      os__ << msg;                                \
      throw ExType(os__.str());                   \
    }                                             \
  } while (0)

#define MSRNNT_SHAPE_CHECK(cond, msg) MSRNNT_CHECK_AS(cond, ::msrnnt::ShapeError, msg)

#endif  // MSRNNT_COMMON_CHECK_H_
