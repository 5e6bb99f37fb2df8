// numerics/adam.h

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

#ifndef MSRNNT_NUMERICS_ADAM_H_
#define MSRNNT_NUMERICS_ADAM_H_

#include <cstdint>
#include <vector>

#include "msrnnt/numerics/parameter.h"

namespace msrnnt {

struct AdamOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Bias-corrected Adam over a fixed parameter list. Moment buffers are kept
// per parameter in list order; the parameter objects must outlive the
// optimizer and keep stable addresses.
template <typename T>
class AdamOptimizer {
 public:
  AdamOptimizer(const AdamOptions& opts, std::vector<Parameter<T>*> params);

  void zero_grad();

  // Scales every gradient by `factor` (batch averaging).
  void scale_grads(double factor);

  // Returns the global gradient norm before clipping; scales gradients down
  // if the norm exceeds max_norm. max_norm <= 0 disables clipping.
  double clip_global_norm(double max_norm);

  // One update. Throws NumericError naming the first parameter with a
  // non-finite gradient. Parameters stay finite afterwards.
  void step(double lr);

  std::int64_t step_count() const { return step_; }
  const AdamOptions& options() const { return opts_; }

 private:
  AdamOptions opts_;
  std::vector<Parameter<T>*> params_;
  std::vector<Matrix<T>> first_moment_;
  std::vector<Matrix<T>> second_moment_;
  std::int64_t step_ = 0;
};

}  // namespace msrnnt

#endif  // MSRNNT_NUMERICS_ADAM_H_
