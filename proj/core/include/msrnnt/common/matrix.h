// common/matrix.h

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

#ifndef MSRNNT_COMMON_MATRIX_H_
#define MSRNNT_COMMON_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

#include "msrnnt/common/check.h"

namespace msrnnt {

// Dense row-major matrix. The only container the numeric kernels use; all
// higher-rank data is Tensor3 below. Rows are contiguous so kernels can work
// on raw row pointers.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * cols, T(0)) {
    MSRNNT_SHAPE_CHECK(rows >= 0 && cols >= 0,
                       "matrix dims must be non-negative, got " << rows << "x" << cols);
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T* row(int r) { return data_.data() + static_cast<std::size_t>(r) * cols_; }
  const T* row(int r) const {
    return data_.data() + static_cast<std::size_t>(r) * cols_;
  }
  std::span<T> row_span(int r) { return {row(r), static_cast<std::size_t>(cols_)}; }
  std::span<const T> row_span(int r) const {
    return {row(r), static_cast<std::size_t>(cols_)};
  }

  T& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  const T& operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  void zero() { std::fill(data_.begin(), data_.end(), T(0)); }
  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

// Dense rank-3 tensor, used for the (frames x label-positions x symbols)
// transducer lattices and the joint activations.
template <typename T>
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(int d0, int d1, int d2)
      : d0_(d0), d1_(d1), d2_(d2),
        data_(static_cast<std::size_t>(d0) * d1 * d2, T(0)) {
    MSRNNT_SHAPE_CHECK(d0 >= 0 && d1 >= 0 && d2 >= 0,
                       "tensor dims must be non-negative, got " << d0 << "x" << d1 << "x" << d2);
  }

  int dim0() const { return d0_; }
  int dim1() const { return d1_; }
  int dim2() const { return d2_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T* at(int i, int j) {
    return data_.data() + (static_cast<std::size_t>(i) * d1_ + j) * d2_;
  }
  const T* at(int i, int j) const {
    return data_.data() + (static_cast<std::size_t>(i) * d1_ + j) * d2_;
  }

  T& operator()(int i, int j, int k) { return at(i, j)[k]; }
  const T& operator()(int i, int j, int k) const { return at(i, j)[k]; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  void zero() { std::fill(data_.begin(), data_.end(), T(0)); }

  bool same_shape(const Tensor3& other) const {
    return d0_ == other.d0_ && d1_ == other.d1_ && d2_ == other.d2_;
  }

 private:
  int d0_ = 0;
  int d1_ = 0;
  int d2_ = 0;
  std::vector<T> data_;
};

// y (+)= W x, with W of shape (out x in).
template <typename T>
void matvec(const Matrix<T>& w, const T* x, T* y, bool accumulate) {
  const int out = w.rows(), in = w.cols();
  for (int r = 0; r < out; ++r) {
    const T* wr = w.row(r);
    T acc = accumulate ? y[r] : T(0);
    for (int c = 0; c < in; ++c) acc += wr[c] * x[c];
    y[r] = acc;
  }
}

// y (+)= W^T x, with W of shape (out x in); x has length out, y length in.
template <typename T>
void matvec_transposed(const Matrix<T>& w, const T* x, T* y, bool accumulate) {
  const int out = w.rows(), in = w.cols();
  if (!accumulate) std::fill(y, y + in, T(0));
  for (int r = 0; r < out; ++r) {
    const T* wr = w.row(r);
    const T xr = x[r];
    for (int c = 0; c < in; ++c) y[c] += xr * wr[c];
  }
}

// W += a b^T, with W of shape (|a| x |b|).
template <typename T>
void add_outer(Matrix<T>& w, const T* a, const T* b) {
  const int out = w.rows(), in = w.cols();
  for (int r = 0; r < out; ++r) {
    T* wr = w.row(r);
    const T ar = a[r];
    for (int c = 0; c < in; ++c) wr[c] += ar * b[c];
  }
}

template <typename T>
void axpy(T alpha, std::span<const T> x, std::span<T> y) {
  MSRNNT_SHAPE_CHECK(x.size() == y.size(), "axpy size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

template <typename To, typename From>
Matrix<To> matrix_cast(const Matrix<From>& m) {
  Matrix<To> out(m.rows(), m.cols());
  const From* src = m.data();
  To* dst = out.data();
  for (std::size_t i = 0; i < m.size(); ++i) dst[i] = static_cast<To>(src[i]);
  return out;
}

}  // namespace msrnnt

#endif  // MSRNNT_COMMON_MATRIX_H_
