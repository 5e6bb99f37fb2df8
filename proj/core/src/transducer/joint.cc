// transducer/joint.cc

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

#include "msrnnt/transducer/joint.h"

#include <cmath>

#include "msrnnt/numerics/logmath.h"

namespace msrnnt {

namespace {

// In-place log-softmax over `n` entries.
template <typename T>
void log_softmax(T* z, int n) {
  T max = z[0];
  for (int k = 1; k < n; ++k)
    if (z[k] > max) max = z[k];
  T sum = T(0);
  for (int k = 0; k < n; ++k) sum += std::exp(z[k] - max);
  const T lse = max + std::log(sum);
  for (int k = 0; k < n; ++k) z[k] -= lse;
}

}  // namespace

template <typename T>
JointNetwork<T>::JointNetwork(const std::string& prefix, int encoder_dim,
                              int prediction_dim, int hidden_dim, int num_outputs)
    : w_enc(prefix + ".enc_proj.w", hidden_dim, encoder_dim),
      w_pred(prefix + ".pred_proj.w", hidden_dim, prediction_dim),
      b(prefix + ".b", 1, hidden_dim),
      w_out(prefix + ".out.w", num_outputs, hidden_dim),
      b_out(prefix + ".out.b", 1, num_outputs) {
  MSRNNT_SHAPE_CHECK(num_outputs >= 2, prefix << ": need at least blank + one symbol");
}

template <typename T>
void JointNetwork<T>::init(Rng& rng) {
  w_enc.init_uniform(rng);
  w_pred.init_uniform(rng);
  b.value.zero();
  w_out.init_uniform(rng);
  b_out.value.zero();
}

template <typename T>
Tensor3<T> JointNetwork<T>::log_probs(const Matrix<T>& encoder_rows,
                                      const Matrix<T>& prediction_rows,
                                      JointTape<T>* tape) const {
  MSRNNT_SHAPE_CHECK(encoder_rows.cols() == encoder_dim(),
                     "joint: encoder dim " << encoder_rows.cols() << " != "
                                           << encoder_dim());
  MSRNNT_SHAPE_CHECK(prediction_rows.cols() == prediction_dim(),
                     "joint: prediction dim " << prediction_rows.cols() << " != "
                                              << prediction_dim());
  const int frames = encoder_rows.rows();
  const int rows = prediction_rows.rows();
  const int hidden = hidden_dim();
  const int outputs = num_outputs();

  Matrix<T> enc_proj(frames, hidden);
  for (int t = 0; t < frames; ++t)
    matvec(w_enc.value, encoder_rows.row(t), enc_proj.row(t), /*accumulate=*/false);
  Matrix<T> pred_proj(rows, hidden);
  for (int u = 0; u < rows; ++u) {
    T* p = pred_proj.row(u);
    for (int j = 0; j < hidden; ++j) p[j] = b.value(0, j);
    matvec(w_pred.value, prediction_rows.row(u), p, /*accumulate=*/true);
  }

  Tensor3<T> out(frames, rows, outputs);
  Tensor3<T> hidden_act;
  if (tape != nullptr) hidden_act = Tensor3<T>(frames, rows, hidden);
  std::vector<T> h(hidden);
  for (int t = 0; t < frames; ++t) {
    const T* e = enc_proj.row(t);
    for (int u = 0; u < rows; ++u) {
      const T* p = pred_proj.row(u);
      for (int j = 0; j < hidden; ++j) h[j] = std::tanh(e[j] + p[j]);
      if (tape != nullptr) {
        T* ha = hidden_act.at(t, u);
        for (int j = 0; j < hidden; ++j) ha[j] = h[j];
      }
      T* z = out.at(t, u);
      for (int k = 0; k < outputs; ++k) z[k] = b_out.value(0, k);
      matvec(w_out.value, h.data(), z, /*accumulate=*/true);
      log_softmax(z, outputs);
    }
  }

  if (tape != nullptr) {
    tape->encoder_in = encoder_rows;
    tape->prediction_in = prediction_rows;
    tape->hidden = std::move(hidden_act);
  }
  return out;
}

template <typename T>
void JointNetwork<T>::backward(const JointTape<T>& tape, const Tensor3<T>& log_probs,
                               const Tensor3<T>& d_log_probs, Matrix<T>* d_encoder,
                               Matrix<T>* d_prediction) {
  MSRNNT_SHAPE_CHECK(log_probs.same_shape(d_log_probs), "joint backward: shape mismatch");
  const int frames = log_probs.dim0();
  const int rows = log_probs.dim1();
  const int hidden = hidden_dim();
  const int outputs = num_outputs();
  MSRNNT_SHAPE_CHECK(tape.hidden.dim0() == frames && tape.hidden.dim1() == rows,
                     "joint backward: stale tape");

  MSRNNT_SHAPE_CHECK(d_encoder == nullptr || (d_encoder->rows() == frames &&
                                              d_encoder->cols() == encoder_dim()),
                     "joint backward: d_encoder shape");
  MSRNNT_SHAPE_CHECK(d_prediction == nullptr || (d_prediction->rows() == rows &&
                                                 d_prediction->cols() == prediction_dim()),
                     "joint backward: d_prediction shape");

  std::vector<T> dz(outputs);
  std::vector<T> dh(hidden);
  // Per-node outer products factor through the projection rows, so aggregate
  // d(enc_proj[t]) over u and d(pred_proj[u]) over t first.
  Matrix<T> d_enc_proj(frames, hidden);
  Matrix<T> d_pred_proj(rows, hidden);

  for (int t = 0; t < frames; ++t) {
    for (int u = 0; u < rows; ++u) {
      const T* dlp = d_log_probs.at(t, u);
      bool touched = false;
      for (int k = 0; k < outputs; ++k)
        if (dlp[k] != T(0)) {
          touched = true;
          break;
        }
      if (!touched) continue;

      const T* lp = log_probs.at(t, u);
      T dsum = T(0);
      for (int k = 0; k < outputs; ++k) dsum += dlp[k];
      // log-softmax backward: dz_k = dlp_k - exp(lp_k) * sum_j dlp_j
      for (int k = 0; k < outputs; ++k) dz[k] = dlp[k] - std::exp(lp[k]) * dsum;

      const T* ha = tape.hidden.at(t, u);
      add_outer(w_out.grad, dz.data(), ha);
      {
        T* bg = b_out.grad.row(0);
        for (int k = 0; k < outputs; ++k) bg[k] += dz[k];
      }
      matvec_transposed(w_out.value, dz.data(), dh.data(), /*accumulate=*/false);
      for (int j = 0; j < hidden; ++j) dh[j] *= (T(1) - ha[j] * ha[j]);

      T* de = d_enc_proj.row(t);
      T* dp = d_pred_proj.row(u);
      T* bg = b.grad.row(0);
      for (int j = 0; j < hidden; ++j) {
        de[j] += dh[j];
        dp[j] += dh[j];
        bg[j] += dh[j];  // bias feeds every node directly
      }
    }
  }

  for (int t = 0; t < frames; ++t) {
    add_outer(w_enc.grad, d_enc_proj.row(t), tape.encoder_in.row(t));
    if (d_encoder != nullptr)
      matvec_transposed(w_enc.value, d_enc_proj.row(t), d_encoder->row(t),
                        /*accumulate=*/true);
  }
  for (int u = 0; u < rows; ++u) {
    add_outer(w_pred.grad, d_pred_proj.row(u), tape.prediction_in.row(u));
    if (d_prediction != nullptr)
      matvec_transposed(w_pred.value, d_pred_proj.row(u), d_prediction->row(u),
                        /*accumulate=*/true);
  }
}

template <typename T>
std::vector<T> JointNetwork<T>::log_probs_row(const T* encoder_row,
                                              const T* prediction_row) const {
  const int hidden = hidden_dim();
  const int outputs = num_outputs();
  std::vector<T> h(hidden);
  for (int j = 0; j < hidden; ++j) h[j] = b.value(0, j);
  matvec(w_enc.value, encoder_row, h.data(), /*accumulate=*/true);
  matvec(w_pred.value, prediction_row, h.data(), /*accumulate=*/true);
  for (int j = 0; j < hidden; ++j) h[j] = std::tanh(h[j]);
  std::vector<T> z(outputs);
  for (int k = 0; k < outputs; ++k) z[k] = b_out.value(0, k);
  matvec(w_out.value, h.data(), z.data(), /*accumulate=*/true);
  log_softmax(z.data(), outputs);
  return z;
}

template <typename T>
void JointNetwork<T>::for_each_parameter(const std::function<void(Parameter<T>&)>& fn) {
  fn(w_enc);
  fn(w_pred);
  fn(b);
  fn(w_out);
  fn(b_out);
}

template class JointNetwork<float>;
template class JointNetwork<double>;

}  // namespace msrnnt
