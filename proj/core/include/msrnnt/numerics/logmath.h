// numerics/logmath.h

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

#ifndef MSRNNT_NUMERICS_LOGMATH_H_
#define MSRNNT_NUMERICS_LOGMATH_H_

#include <cmath>
#include <limits>
#include <span>

#include "msrnnt/common/check.h"

namespace msrnnt {

template <typename T>
inline constexpr T kLogZero = -std::numeric_limits<T>::infinity();

// log(exp(a) + exp(b)) with max-subtraction; -inf is the neutral element.
template <typename T>
T log_add(T a, T b) {
  if (a == kLogZero<T>) return b;
  if (b == kLogZero<T>) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

// log sum_i exp(v_i) with max-subtraction; never overflows for finite input.
template <typename T>
T log_sum_exp(std::span<const T> values) {
  MSRNNT_CHECK(!values.empty(), "empty reduction");
  T max = kLogZero<T>;
  for (T v : values)
    if (v > max) max = v;
  if (max == kLogZero<T>) return kLogZero<T>;
  T sum = T(0);
  for (T v : values) sum += std::exp(v - max);
  return max + std::log(sum);
}

}  // namespace msrnnt

#endif  // MSRNNT_NUMERICS_LOGMATH_H_
