// numerics/parameter.h

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

#ifndef MSRNNT_NUMERICS_PARAMETER_H_
#define MSRNNT_NUMERICS_PARAMETER_H_

#include <cmath>
#include <string>

#include "msrnnt/common/matrix.h"
#include "msrnnt/common/rng.h"

namespace msrnnt {

// A trainable weight with its gradient buffer. Vectors are 1 x n matrices.
// The name is a dotted path ("mixenc.layer0.w_ih") used by the optimizer's
// error reporting and as the checkpoint key.
template <typename T>
struct Parameter {
  std::string name;
  Matrix<T> value;
  Matrix<T> grad;

  Parameter() = default;
  Parameter(std::string name_in, int rows, int cols)
      : name(std::move(name_in)), value(rows, cols), grad(rows, cols) {}

  void zero_grad() { grad.zero(); }

  // Uniform in [-k, k] with k = 1/sqrt(fan_in); fan_in is the column count.
  void init_uniform(Rng& rng) {
    const double k = 1.0 / std::sqrt(static_cast<double>(value.cols() > 0 ? value.cols() : 1));
    T* v = value.data();
    for (std::size_t i = 0; i < value.size(); ++i)
      v[i] = static_cast<T>(rng.uniform(-k, k));
  }
};

}  // namespace msrnnt

#endif  // MSRNNT_NUMERICS_PARAMETER_H_
