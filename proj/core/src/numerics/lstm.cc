// numerics/lstm.cc

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

#include "msrnnt/numerics/lstm.h"

#include <cmath>

namespace msrnnt {

namespace {

template <typename T>
inline T sigmoid(T z) {
  return T(1) / (T(1) + std::exp(-z));
}

}  // namespace

template <typename T>
LstmLayer<T>::LstmLayer(const std::string& prefix, int input_dim, int hidden_dim)
    : w_ih(prefix + ".w_ih", 4 * hidden_dim, input_dim),
      w_hh(prefix + ".w_hh", 4 * hidden_dim, hidden_dim),
      b(prefix + ".b", 1, 4 * hidden_dim),
      input_dim_(input_dim),
      hidden_dim_(hidden_dim) {
  MSRNNT_SHAPE_CHECK(input_dim > 0 && hidden_dim > 0,
                     prefix << ": dims must be positive");
}

template <typename T>
void LstmLayer<T>::init(Rng& rng) {
  w_ih.init_uniform(rng);
  w_hh.init_uniform(rng);
  b.value.zero();
  // Forget-gate bias 1.0 so cells retain state early in training.
  for (int j = hidden_dim_; j < 2 * hidden_dim_; ++j) b.value(0, j) = T(1);
}

template <typename T>
Matrix<T> LstmLayer<T>::forward(const Matrix<T>& inputs, std::vector<T>* h_state,
                                std::vector<T>* c_state,
                                LstmLayerTape<T>* tape) const {
  MSRNNT_SHAPE_CHECK(inputs.cols() == input_dim_,
                     w_ih.name << ": input dim " << inputs.cols()
                               << " != expected " << input_dim_);
  const int frames = inputs.rows();
  const int H = hidden_dim_;

  std::vector<T> h = h_state ? *h_state : std::vector<T>(H, T(0));
  std::vector<T> c = c_state ? *c_state : std::vector<T>(H, T(0));
  MSRNNT_SHAPE_CHECK(static_cast<int>(h.size()) == H && static_cast<int>(c.size()) == H,
                     w_ih.name << ": state size mismatch");

  Matrix<T> out(frames, H);
  if (tape != nullptr) {
    tape->inputs = inputs;
    tape->h = Matrix<T>(frames, H);
    tape->c = Matrix<T>(frames, H);
    tape->gates = Matrix<T>(frames, 4 * H);
    tape->h0 = h;
    tape->c0 = c;
  }

  std::vector<T> pre(4 * H);
  for (int t = 0; t < frames; ++t) {
    for (int j = 0; j < 4 * H; ++j) pre[j] = b.value(0, j);
    matvec(w_ih.value, inputs.row(t), pre.data(), /*accumulate=*/true);
    matvec(w_hh.value, h.data(), pre.data(), /*accumulate=*/true);

    T* gates_row = tape ? tape->gates.row(t) : nullptr;
    for (int j = 0; j < H; ++j) {
      const T gi = sigmoid(pre[j]);
      const T gf = sigmoid(pre[H + j]);
      const T gg = std::tanh(pre[2 * H + j]);
      const T go = sigmoid(pre[3 * H + j]);
      const T cj = gf * c[j] + gi * gg;
      c[j] = cj;
      h[j] = go * std::tanh(cj);
      if (gates_row != nullptr) {
        gates_row[j] = gi;
        gates_row[H + j] = gf;
        gates_row[2 * H + j] = gg;
        gates_row[3 * H + j] = go;
      }
    }
    T* o = out.row(t);
    for (int j = 0; j < H; ++j) o[j] = h[j];
    if (tape != nullptr) {
      T* th = tape->h.row(t);
      T* tc = tape->c.row(t);
      for (int j = 0; j < H; ++j) {
        th[j] = h[j];
        tc[j] = c[j];
      }
    }
  }

  if (h_state != nullptr) *h_state = std::move(h);
  if (c_state != nullptr) *c_state = std::move(c);
  return out;
}

template <typename T>
Matrix<T> LstmLayer<T>::backward(const LstmLayerTape<T>& tape, const Matrix<T>& dout) {
  const int frames = tape.inputs.rows();
  const int H = hidden_dim_;
  MSRNNT_SHAPE_CHECK(dout.rows() == frames && dout.cols() == H,
                     w_ih.name << ": backward tape/grad mismatch ("
                               << dout.rows() << "x" << dout.cols() << " vs "
                               << frames << "x" << H << ")");

  Matrix<T> din(frames, input_dim_);
  std::vector<T> dh(H, T(0));   // carried from t+1
  std::vector<T> dc(H, T(0));
  std::vector<T> dpre(4 * H);

  for (int t = frames - 1; t >= 0; --t) {
    const T* gates = tape.gates.row(t);
    const T* c_t = tape.c.row(t);
    const T* c_prev = (t > 0) ? tape.c.row(t - 1) : tape.c0.data();
    const T* h_prev = (t > 0) ? tape.h.row(t - 1) : tape.h0.data();
    const T* dout_t = dout.row(t);

    for (int j = 0; j < H; ++j) {
      const T gi = gates[j];
      const T gf = gates[H + j];
      const T gg = gates[2 * H + j];
      const T go = gates[3 * H + j];
      const T tc = std::tanh(c_t[j]);

      const T dh_total = dout_t[j] + dh[j];
      const T dcj = dc[j] + dh_total * go * (T(1) - tc * tc);

      dpre[j] = dcj * gg * gi * (T(1) - gi);                 // input gate
      dpre[H + j] = dcj * c_prev[j] * gf * (T(1) - gf);      // forget gate
      dpre[2 * H + j] = dcj * gi * (T(1) - gg * gg);         // cell candidate
      dpre[3 * H + j] = dh_total * tc * go * (T(1) - go);    // output gate

      dc[j] = dcj * gf;
    }

    add_outer(w_ih.grad, dpre.data(), tape.inputs.row(t));
    add_outer(w_hh.grad, dpre.data(), h_prev);
    {
      T* bg = b.grad.row(0);
      for (int j = 0; j < 4 * H; ++j) bg[j] += dpre[j];
    }
    matvec_transposed(w_ih.value, dpre.data(), din.row(t), /*accumulate=*/false);
    matvec_transposed(w_hh.value, dpre.data(), dh.data(), /*accumulate=*/false);
  }
  return din;
}

template <typename T>
LstmStack<T>::LstmStack(const std::string& prefix, int input_dim, int num_layers,
                        int hidden_dim) {
  MSRNNT_SHAPE_CHECK(num_layers >= 1, prefix << ": need at least one layer");
  layers_.reserve(num_layers);
  int dim = input_dim;
  for (int i = 0; i < num_layers; ++i) {
    layers_.emplace_back(prefix + ".layer" + std::to_string(i), dim, hidden_dim);
    dim = hidden_dim;
  }
}

template <typename T>
void LstmStack<T>::init(Rng& rng) {
  for (auto& layer : layers_) layer.init(rng);
}

template <typename T>
LstmState<T> LstmStack<T>::zero_state() const {
  LstmState<T> state;
  state.h.resize(layers_.size());
  state.c.resize(layers_.size());
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    state.h[i].assign(layers_[i].hidden_dim(), T(0));
    state.c[i].assign(layers_[i].hidden_dim(), T(0));
  }
  return state;
}

template <typename T>
Matrix<T> LstmStack<T>::forward(const Matrix<T>& inputs, LstmState<T>* state,
                                LstmTape<T>* tape) const {
  if (tape != nullptr) {
    tape->layers.resize(layers_.size());
    tape->frames = inputs.rows();
  }
  Matrix<T> x = inputs;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    std::vector<T>* h = state ? &state->h[i] : nullptr;
    std::vector<T>* c = state ? &state->c[i] : nullptr;
    x = layers_[i].forward(x, h, c, tape ? &tape->layers[i] : nullptr);
  }
  return x;
}

template <typename T>
Matrix<T> LstmStack<T>::backward(const LstmTape<T>& tape, const Matrix<T>& dout) {
  MSRNNT_SHAPE_CHECK(tape.layers.size() == layers_.size(),
                     "lstm stack: stale or mismatched tape");
  Matrix<T> d = dout;
  for (int i = static_cast<int>(layers_.size()) - 1; i >= 0; --i)
    d = layers_[i].backward(tape.layers[i], d);
  return d;
}

template <typename T>
void LstmStack<T>::for_each_parameter(const std::function<void(Parameter<T>&)>& fn) {
  for (auto& layer : layers_) {
    fn(layer.w_ih);
    fn(layer.w_hh);
    fn(layer.b);
  }
}

template class LstmLayer<float>;
template class LstmLayer<double>;
template class LstmStack<float>;
template class LstmStack<double>;

}  // namespace msrnnt
