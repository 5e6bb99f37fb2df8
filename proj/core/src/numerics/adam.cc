// numerics/adam.cc

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

#include "msrnnt/numerics/adam.h"

#include <cmath>

#include "msrnnt/common/check.h"

namespace msrnnt {

template <typename T>
AdamOptimizer<T>::AdamOptimizer(const AdamOptions& opts,
                                std::vector<Parameter<T>*> params)
    : opts_(opts), params_(std::move(params)) {
  MSRNNT_CHECK(opts_.beta1 >= 0.0 && opts_.beta1 < 1.0, "beta1 must be in [0,1)");
  MSRNNT_CHECK(opts_.beta2 >= 0.0 && opts_.beta2 < 1.0, "beta2 must be in [0,1)");
  MSRNNT_CHECK(opts_.epsilon > 0.0, "epsilon must be positive");
  first_moment_.reserve(params_.size());
  second_moment_.reserve(params_.size());
  for (const Parameter<T>* p : params_) {
    first_moment_.emplace_back(p->value.rows(), p->value.cols());
    second_moment_.emplace_back(p->value.rows(), p->value.cols());
  }
}

template <typename T>
void AdamOptimizer<T>::zero_grad() {
  for (Parameter<T>* p : params_) p->zero_grad();
}

template <typename T>
void AdamOptimizer<T>::scale_grads(double factor) {
  for (Parameter<T>* p : params_) {
    T* g = p->grad.data();
    for (std::size_t i = 0; i < p->grad.size(); ++i)
      g[i] = static_cast<T>(g[i] * factor);
  }
}

template <typename T>
double AdamOptimizer<T>::clip_global_norm(double max_norm) {
  double sq = 0.0;
  for (const Parameter<T>* p : params_) {
    const T* g = p->grad.data();
    for (std::size_t i = 0; i < p->grad.size(); ++i)
      sq += static_cast<double>(g[i]) * static_cast<double>(g[i]);
  }
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double scale = max_norm / norm;
    for (Parameter<T>* p : params_) {
      T* g = p->grad.data();
      for (std::size_t i = 0; i < p->grad.size(); ++i)
        g[i] = static_cast<T>(g[i] * scale);
    }
  }
  return norm;
}

template <typename T>
void AdamOptimizer<T>::step(double lr) {
  ++step_;
  const double bc1 = 1.0 - std::pow(opts_.beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(opts_.beta2, static_cast<double>(step_));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    Parameter<T>* p = params_[k];
    T* value = p->value.data();
    const T* grad = p->grad.data();
    T* m = first_moment_[k].data();
    T* v = second_moment_[k].data();
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      const double g = static_cast<double>(grad[i]);
      if (!std::isfinite(g))
        throw NumericError("non-finite gradient in parameter " + p->name);
      const double mi = opts_.beta1 * static_cast<double>(m[i]) + (1.0 - opts_.beta1) * g;
      const double vi = opts_.beta2 * static_cast<double>(v[i]) + (1.0 - opts_.beta2) * g * g;
      m[i] = static_cast<T>(mi);
      v[i] = static_cast<T>(vi);
      const double m_hat = mi / bc1;
      const double v_hat = vi / bc2;
      value[i] = static_cast<T>(static_cast<double>(value[i]) -
                                lr * m_hat / (std::sqrt(v_hat) + opts_.epsilon));
      if (!std::isfinite(static_cast<double>(value[i])))
        throw NumericError("non-finite value in parameter " + p->name + " after update");
    }
  }
}

template class AdamOptimizer<float>;
template class AdamOptimizer<double>;

}  // namespace msrnnt
