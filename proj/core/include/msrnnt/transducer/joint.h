// transducer/joint.h

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

#ifndef MSRNNT_TRANSDUCER_JOINT_H_
#define MSRNNT_TRANSDUCER_JOINT_H_

#include <functional>
#include <vector>

#include "msrnnt/common/matrix.h"
#include "msrnnt/numerics/parameter.h"

namespace msrnnt {

// Joint forward activations kept for the backward pass, including copies of
// the input rows so the tape is self-contained.
template <typename T>
struct JointTape {
  Matrix<T> encoder_in;     // T x encoder_dim
  Matrix<T> prediction_in;  // (U+1) x prediction_dim
  Tensor3<T> hidden;        // T x (U+1) x hidden, tanh-activated
};

// One-layer feed-forward joint network. For every (frame t, label context u)
// pair: z = W_out tanh(W_enc h_t + W_pred g_u + b) + b_out, then log-softmax
// over the V+1 symbols. The two projections are computed once per row, so a
// full lattice costs O(T*U*hidden) rather than O(T*U*hidden*dim).
template <typename T>
class JointNetwork {
 public:
  JointNetwork() = default;
  JointNetwork(const std::string& prefix, int encoder_dim, int prediction_dim,
               int hidden_dim, int num_outputs);

  int encoder_dim() const { return w_enc.value.cols(); }
  int prediction_dim() const { return w_pred.value.cols(); }
  int hidden_dim() const { return w_enc.value.rows(); }
  int num_outputs() const { return w_out.value.rows(); }

  void init(Rng& rng);

  // Full lattice of normalized log-probabilities, T x (U+1) x (V+1).
  Tensor3<T> log_probs(const Matrix<T>& encoder_rows, const Matrix<T>& prediction_rows,
                       JointTape<T>* tape) const;

  // Accumulates parameter gradients; adds input gradients into d_encoder /
  // d_prediction (both must be pre-sized; pass nullptr to skip either).
  void backward(const JointTape<T>& tape, const Tensor3<T>& log_probs,
                const Tensor3<T>& d_log_probs, Matrix<T>* d_encoder,
                Matrix<T>* d_prediction);

  // Single-node normalized log-probabilities for the decoder.
  std::vector<T> log_probs_row(const T* encoder_row, const T* prediction_row) const;

  void for_each_parameter(const std::function<void(Parameter<T>&)>& fn);

  Parameter<T> w_enc;   // hidden x encoder_dim
  Parameter<T> w_pred;  // hidden x prediction_dim
  Parameter<T> b;       // 1 x hidden
  Parameter<T> w_out;   // (V+1) x hidden
  Parameter<T> b_out;   // 1 x (V+1)
};

}  // namespace msrnnt

#endif  // MSRNNT_TRANSDUCER_JOINT_H_
