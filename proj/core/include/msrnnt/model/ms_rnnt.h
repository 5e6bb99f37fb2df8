// model/ms_rnnt.h

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

#ifndef MSRNNT_MODEL_MS_RNNT_H_
#define MSRNNT_MODEL_MS_RNNT_H_

#include <filesystem>
#include <memory>
#include <vector>

#include "msrnnt/model/config.h"
#include "msrnnt/numerics/checkpoint.h"
#include "msrnnt/numerics/linear.h"
#include "msrnnt/numerics/lstm.h"
#include "msrnnt/transducer/decoder.h"
#include "msrnnt/transducer/joint.h"
#include "msrnnt/transducer/vocabulary.h"

namespace msrnnt {

// One-hot order label for 1-based speaker index, length num_speakers.
template <typename T>
std::vector<T> speaker_order_vector(int speaker, int num_speakers);

// Everything encode() recorded for the encoder backward pass.
template <typename T>
struct EncodeTape {
  Matrix<T> stacked;
  LstmTape<T> mixture_tape;
  Matrix<T> mixture_out;
  std::vector<Matrix<T>> sd_inputs;
  std::vector<LstmTape<T>> sd_tapes;
  std::vector<LstmTape<T>> recognition_tapes;
  std::vector<Matrix<T>> recognition_outs;  // pre-projection
};

template <typename T>
struct PredictionTape {
  Matrix<T> embedded;  // (U+1) x embedding_dim
  LstmTape<T> lstm_tape;
  Matrix<T> lstm_out;
  TokenSequence labels;
};

// Multi-speaker RNN-T: a shared mixture encoder, per-speaker SD encoders, a
// shared recognition encoder applied to every branch, and shared prediction
// and joint networks. With num_speakers = 1 this is exactly the
// single-speaker baseline topology.
template <typename T>
class MsRnntModel {
 public:
  explicit MsRnntModel(const MsRnntConfig& config);

  const MsRnntConfig& config() const { return config_; }
  int num_speakers() const { return config_.num_speakers; }

  void init(Rng& rng);

  // Causal frame stacking + decimation: output row k is the concatenation of
  // input frames [k*factor - factor + 1, k*factor], zero-padded before the
  // start. ceil(frames/factor) rows; row k is available once input frame
  // k*factor has been consumed.
  static Matrix<T> stack_frames(const Matrix<T>& features, int factor);

  // Full speaker-discriminative encoder; returns num_speakers branch outputs
  // of identical frame count ceil(frames/downsample_factor).
  std::vector<Matrix<T>> encode(const Matrix<T>& features, EncodeTape<T>* tape) const;

  // Accumulates parameter gradients from per-branch output gradients.
  // Gradients w.r.t. the input features are discarded.
  void encode_backward(const EncodeTape<T>& tape,
                       const std::vector<Matrix<T>>& d_branches);

  // Prediction-network rows for teacher-forced labels: row 0 is the start
  // context, row u the context after labels[0..u). U+1 rows.
  Matrix<T> prediction_features(const TokenSequence& labels,
                                PredictionTape<T>* tape) const;

  void prediction_backward(const PredictionTape<T>& tape, const Matrix<T>& d_out);

  JointNetwork<T>& joint() { return joint_; }
  const JointNetwork<T>& joint() const { return joint_; }

  // Per-output lattice log-probabilities for a given branch-to-target
  // assignment (assignment[s] is the target index paired with branch s).
  std::vector<Tensor3<T>> forward_lattices(const Matrix<T>& features,
                                           const std::vector<TokenSequence>& targets,
                                           const std::vector<int>& assignment) const;

  std::unique_ptr<PredictionStepper<T>> make_stepper() const;

  void for_each_parameter(const std::function<void(Parameter<T>&)>& fn);
  std::vector<Parameter<T>*> parameters();

  CheckpointMap to_checkpoint() const;
  void load_checkpoint(const CheckpointMap& map);

  // Builds a model for `config` from a single-speaker seed: shared modules
  // are copied; every SD encoder starts from the seed's SD branch. Without
  // order labels (and more than one speaker) each SD copy gets independent
  // Gaussian noise (sigma 0.01) to break branch symmetry; with order labels
  // the extra label input columns are zero-initialized and weights copied
  // bit-exactly.
  static MsRnntModel<T> init_from_seed(const MsRnntModel<T>& seed,
                                       const MsRnntConfig& config, Rng& rng);

  // Internal structure, exposed for tests and the seed-transfer logic.
  LstmStack<T>& mixture_encoder() { return mixture_encoder_; }
  const LstmStack<T>& mixture_encoder() const { return mixture_encoder_; }
  LstmStack<T>& sd_encoder(int s) { return sd_encoders_[s]; }
  const LstmStack<T>& sd_encoder(int s) const { return sd_encoders_[s]; }
  LstmStack<T>& recognition_encoder() { return recognition_encoder_; }
  const LstmStack<T>& recognition_encoder() const { return recognition_encoder_; }
  Linear<T>& recognition_proj() { return recognition_proj_; }
  const Linear<T>& recognition_proj() const { return recognition_proj_; }
  Parameter<T>& embedding() { return embedding_; }
  const Parameter<T>& embedding() const { return embedding_; }
  LstmStack<T>& prediction_lstm() { return prediction_lstm_; }
  const LstmStack<T>& prediction_lstm() const { return prediction_lstm_; }
  Linear<T>& prediction_proj() { return prediction_proj_; }
  const Linear<T>& prediction_proj() const { return prediction_proj_; }

 private:
  int start_context_row() const { return config_.vocab_size(); }

  MsRnntConfig config_;
  LstmStack<T> mixture_encoder_;
  std::vector<LstmStack<T>> sd_encoders_;
  LstmStack<T> recognition_encoder_;
  Linear<T> recognition_proj_;
  Parameter<T> embedding_;  // (V+1) x embedding_dim; last row = start context
  LstmStack<T> prediction_lstm_;
  Linear<T> prediction_proj_;
  JointNetwork<T> joint_;
};

template <typename T>
void save_model(const std::filesystem::path& path, const MsRnntModel<T>& model);

template <typename T>
MsRnntModel<T> load_model(const std::filesystem::path& path);

}  // namespace msrnnt

#endif  // MSRNNT_MODEL_MS_RNNT_H_
