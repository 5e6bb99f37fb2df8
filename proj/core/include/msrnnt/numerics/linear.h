// numerics/linear.h

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

#ifndef MSRNNT_NUMERICS_LINEAR_H_
#define MSRNNT_NUMERICS_LINEAR_H_

#include <string>

#include "msrnnt/common/matrix.h"
#include "msrnnt/numerics/parameter.h"

namespace msrnnt {

// Affine map applied row-wise: out[r] = W in[r] + b.
template <typename T>
class Linear {
 public:
  Linear() = default;
  Linear(const std::string& prefix, int output_dim, int input_dim)
      : w(prefix + ".w", output_dim, input_dim), b(prefix + ".b", 1, output_dim) {}

  int input_dim() const { return w.value.cols(); }
  int output_dim() const { return w.value.rows(); }

  void init(Rng& rng) {
    w.init_uniform(rng);
    b.value.zero();
  }

  Matrix<T> forward(const Matrix<T>& in) const {
    MSRNNT_SHAPE_CHECK(in.cols() == input_dim(),
                       w.name << ": input dim " << in.cols() << " != " << input_dim());
    Matrix<T> out(in.rows(), output_dim());
    for (int r = 0; r < in.rows(); ++r) {
      T* o = out.row(r);
      for (int c = 0; c < output_dim(); ++c) o[c] = b.value(0, c);
      matvec(w.value, in.row(r), o, /*accumulate=*/true);
    }
    return out;
  }

  // Accumulates parameter gradients and returns d input. `in` must be the
  // matrix the matching forward call saw.
  Matrix<T> backward(const Matrix<T>& in, const Matrix<T>& dout) {
    MSRNNT_SHAPE_CHECK(dout.rows() == in.rows() && dout.cols() == output_dim(),
                       w.name << ": backward shape mismatch");
    Matrix<T> din(in.rows(), input_dim());
    for (int r = 0; r < in.rows(); ++r) {
      const T* d = dout.row(r);
      add_outer(w.grad, d, in.row(r));
      T* bg = b.grad.row(0);
      for (int c = 0; c < output_dim(); ++c) bg[c] += d[c];
      matvec_transposed(w.value, d, din.row(r), /*accumulate=*/false);
    }
    return din;
  }

  Parameter<T> w;
  Parameter<T> b;
};

}  // namespace msrnnt

#endif  // MSRNNT_NUMERICS_LINEAR_H_
