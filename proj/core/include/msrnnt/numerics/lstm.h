// numerics/lstm.h

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

#ifndef MSRNNT_NUMERICS_LSTM_H_
#define MSRNNT_NUMERICS_LSTM_H_

#include <functional>
#include <string>
#include <vector>

#include "msrnnt/common/matrix.h"
#include "msrnnt/numerics/parameter.h"

namespace msrnnt {

// Per-layer hidden and cell vectors, for incremental (streaming) use.
template <typename T>
struct LstmState {
  std::vector<std::vector<T>> h;
  std::vector<std::vector<T>> c;
  bool empty() const { return h.empty(); }
};

// Forward activations recorded for exact backpropagation through time.
// Gate storage order along the 4H axis is [input, forget, cell, output].
template <typename T>
struct LstmLayerTape {
  Matrix<T> inputs;  // frames x input_dim
  Matrix<T> h;       // frames x hidden_dim
  Matrix<T> c;       // frames x hidden_dim
  Matrix<T> gates;   // frames x 4*hidden_dim (post-activation)
  std::vector<T> h0, c0;
};

template <typename T>
struct LstmTape {
  std::vector<LstmLayerTape<T>> layers;
  int frames = 0;
};

// One LSTM layer with merged bias and standard gating:
//   pre = W_ih x_t + W_hh h_{t-1} + b
//   i = sig(pre_i), f = sig(pre_f), g = tanh(pre_g), o = sig(pre_o)
//   c_t = f*c_{t-1} + i*g,  h_t = o*tanh(c_t)
template <typename T>
class LstmLayer {
 public:
  LstmLayer(const std::string& prefix, int input_dim, int hidden_dim);

  int input_dim() const { return input_dim_; }
  int hidden_dim() const { return hidden_dim_; }

  // Uniform [-k, k] weights with k = 1/sqrt(fan_in); forget-gate bias 1.0.
  void init(Rng& rng);

  // Runs the sequence from (h_state, c_state), which are updated in place to
  // the final state; zero vectors mean a fresh start. Strictly causal. With a
  // tape the call records what backward() needs.
  Matrix<T> forward(const Matrix<T>& inputs, std::vector<T>* h_state,
                    std::vector<T>* c_state, LstmLayerTape<T>* tape) const;

  // Accumulates parameter gradients and returns d inputs. Gradients w.r.t.
  // the initial state are discarded.
  Matrix<T> backward(const LstmLayerTape<T>& tape, const Matrix<T>& dout);

  Parameter<T> w_ih;  // 4H x input_dim
  Parameter<T> w_hh;  // 4H x hidden_dim
  Parameter<T> b;     // 1 x 4H

 private:
  int input_dim_ = 0;
  int hidden_dim_ = 0;
};

// Stack of LSTM layers; layer i feeds layer i+1.
template <typename T>
class LstmStack {
 public:
  LstmStack() = default;
  LstmStack(const std::string& prefix, int input_dim, int num_layers, int hidden_dim);

  int num_layers() const { return static_cast<int>(layers_.size()); }
  int input_dim() const { return layers_.front().input_dim(); }
  int output_dim() const { return layers_.back().hidden_dim(); }
  LstmLayer<T>& layer(int i) { return layers_[i]; }
  const LstmLayer<T>& layer(int i) const { return layers_[i]; }

  void init(Rng& rng);

  LstmState<T> zero_state() const;

  // state == nullptr runs from the zero state and discards the final state.
  Matrix<T> forward(const Matrix<T>& inputs, LstmState<T>* state,
                    LstmTape<T>* tape) const;

  Matrix<T> backward(const LstmTape<T>& tape, const Matrix<T>& dout);

  void for_each_parameter(const std::function<void(Parameter<T>&)>& fn);

 private:
  std::vector<LstmLayer<T>> layers_;
};

}  // namespace msrnnt

#endif  // MSRNNT_NUMERICS_LSTM_H_
