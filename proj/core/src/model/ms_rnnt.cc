// model/ms_rnnt.cc

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

#include "msrnnt/model/ms_rnnt.h"

#include <string>

namespace msrnnt {

template <typename T>
std::vector<T> speaker_order_vector(int speaker, int num_speakers) {
  MSRNNT_CHECK(speaker >= 1 && speaker <= num_speakers,
               "speaker index " << speaker << " out of range [1," << num_speakers << "]");
  std::vector<T> v(num_speakers, T(0));
  v[speaker - 1] = T(1);
  return v;
}

template <typename T>
MsRnntModel<T>::MsRnntModel(const MsRnntConfig& config)
    : config_(config),
      mixture_encoder_("mixenc", config.stacked_feature_dim(),
                       config.mixture_encoder.layers, config.mixture_encoder.units),
      recognition_encoder_("recenc", config.sd_encoder.units,
                           config.recognition_encoder.layers,
                           config.recognition_encoder.units),
      recognition_proj_("recenc.proj", config.encoder_output_dim,
                        config.recognition_encoder.units),
      embedding_("pred.embedding", config.vocab_size() + 1, config.embedding_dim),
      prediction_lstm_("pred", config.embedding_dim, config.prediction.layers,
                       config.prediction.units),
      prediction_proj_("pred.proj", config.prediction_output_dim,
                       config.prediction.units),
      joint_("joint", config.encoder_output_dim, config.prediction_output_dim,
             config.joint_hidden_dim, config.vocab_size() + 1) {
  config_.validate();
  sd_encoders_.reserve(config.num_speakers);
  for (int s = 0; s < config.num_speakers; ++s) {
    sd_encoders_.emplace_back("sdenc" + std::to_string(s), config.sd_input_dim(),
                              config.sd_encoder.layers, config.sd_encoder.units);
  }
}

template <typename T>
void MsRnntModel<T>::init(Rng& rng) {
  mixture_encoder_.init(rng);
  for (auto& sd : sd_encoders_) sd.init(rng);
  recognition_encoder_.init(rng);
  recognition_proj_.init(rng);
  {
    const double k = 1.0 / std::sqrt(static_cast<double>(config_.embedding_dim));
    T* e = embedding_.value.data();
    for (std::size_t i = 0; i < embedding_.value.size(); ++i)
      e[i] = static_cast<T>(rng.uniform(-k, k));
  }
  prediction_lstm_.init(rng);
  prediction_proj_.init(rng);
  joint_.init(rng);
}

template <typename T>
Matrix<T> MsRnntModel<T>::stack_frames(const Matrix<T>& features, int factor) {
  MSRNNT_SHAPE_CHECK(features.rows() >= 1, "stack_frames: empty input");
  MSRNNT_CHECK(factor >= 1, "stack_frames: factor must be >= 1");
  const int frames = features.rows();
  const int dim = features.cols();
  const int out_frames = (frames + factor - 1) / factor;
  Matrix<T> out(out_frames, dim * factor);
  for (int k = 0; k < out_frames; ++k) {
    T* dst = out.row(k);
    for (int i = 0; i < factor; ++i) {
      const int src = k * factor - (factor - 1) + i;
      if (src >= 0 && src < frames) {
        const T* s = features.row(src);
        for (int c = 0; c < dim; ++c) dst[i * dim + c] = s[c];
      }
      // else: leave the zero padding
    }
  }
  return out;
}

template <typename T>
std::vector<Matrix<T>> MsRnntModel<T>::encode(const Matrix<T>& features,
                                              EncodeTape<T>* tape) const {
  MSRNNT_SHAPE_CHECK(features.cols() == config_.feature_dim,
                     "encode: feature dim " << features.cols() << " != "
                                            << config_.feature_dim);
  const int S = config_.num_speakers;
  Matrix<T> stacked = stack_frames(features, config_.downsample_factor);
  const int frames = stacked.rows();

  if (tape != nullptr) {
    tape->sd_inputs.resize(S);
    tape->sd_tapes.resize(S);
    tape->recognition_tapes.resize(S);
    tape->recognition_outs.resize(S);
  }

  Matrix<T> mix_out = mixture_encoder_.forward(
      stacked, nullptr, tape ? &tape->mixture_tape : nullptr);

  std::vector<Matrix<T>> branches;
  branches.reserve(S);
  for (int s = 0; s < S; ++s) {
    Matrix<T> sd_in;
    if (config_.use_speaker_order_label) {
      const std::vector<T> label = speaker_order_vector<T>(s + 1, S);
      sd_in = Matrix<T>(frames, mix_out.cols() + S);
      for (int t = 0; t < frames; ++t) {
        T* dst = sd_in.row(t);
        const T* src = mix_out.row(t);
        for (int c = 0; c < mix_out.cols(); ++c) dst[c] = src[c];
        for (int c = 0; c < S; ++c) dst[mix_out.cols() + c] = label[c];
      }
    } else {
      sd_in = mix_out;
    }

    Matrix<T> sd_out = sd_encoders_[s].forward(
        sd_in, nullptr, tape ? &tape->sd_tapes[s] : nullptr);
    Matrix<T> rec_out = recognition_encoder_.forward(
        sd_out, nullptr, tape ? &tape->recognition_tapes[s] : nullptr);
    branches.push_back(recognition_proj_.forward(rec_out));

    if (tape != nullptr) {
      tape->sd_inputs[s] = std::move(sd_in);
      tape->recognition_outs[s] = std::move(rec_out);
    }
  }

  if (tape != nullptr) {
    tape->stacked = std::move(stacked);
    tape->mixture_out = std::move(mix_out);
  }
  return branches;
}

template <typename T>
void MsRnntModel<T>::encode_backward(const EncodeTape<T>& tape,
                                     const std::vector<Matrix<T>>& d_branches) {
  const int S = config_.num_speakers;
  MSRNNT_SHAPE_CHECK(static_cast<int>(d_branches.size()) == S,
                     "encode_backward: expected " << S << " branch gradients");
  const int frames = tape.mixture_out.rows();
  const int mix_dim = tape.mixture_out.cols();

  Matrix<T> d_mix(frames, mix_dim);
  for (int s = 0; s < S; ++s) {
    Matrix<T> d_rec = recognition_proj_.backward(tape.recognition_outs[s], d_branches[s]);
    Matrix<T> d_sd_out = recognition_encoder_.backward(tape.recognition_tapes[s], d_rec);
    Matrix<T> d_sd_in = sd_encoders_[s].backward(tape.sd_tapes[s], d_sd_out);
    // Order-label columns carry no gradient back to the mixture encoder.
    for (int t = 0; t < frames; ++t) {
      const T* src = d_sd_in.row(t);
      T* dst = d_mix.row(t);
      for (int c = 0; c < mix_dim; ++c) dst[c] += src[c];
    }
  }
  mixture_encoder_.backward(tape.mixture_tape, d_mix);
}

template <typename T>
Matrix<T> MsRnntModel<T>::prediction_features(const TokenSequence& labels,
                                              PredictionTape<T>* tape) const {
  const int V = config_.vocab_size();
  for (int label : labels)
    MSRNNT_CHECK(label >= 0 && label < V, "blank or out-of-range label "
                                              << label << " in prediction input");
  const int rows = static_cast<int>(labels.size()) + 1;
  Matrix<T> embedded(rows, config_.embedding_dim);
  for (int u = 0; u < rows; ++u) {
    const int row = (u == 0) ? start_context_row() : labels[u - 1];
    const T* src = embedding_.value.row(row);
    T* dst = embedded.row(u);
    for (int c = 0; c < config_.embedding_dim; ++c) dst[c] = src[c];
  }

  Matrix<T> lstm_out = prediction_lstm_.forward(
      embedded, nullptr, tape ? &tape->lstm_tape : nullptr);
  Matrix<T> out = prediction_proj_.forward(lstm_out);
  if (tape != nullptr) {
    tape->embedded = std::move(embedded);
    tape->lstm_out = std::move(lstm_out);
    tape->labels = labels;
  }
  return out;
}

template <typename T>
void MsRnntModel<T>::prediction_backward(const PredictionTape<T>& tape,
                                         const Matrix<T>& d_out) {
  Matrix<T> d_lstm = prediction_proj_.backward(tape.lstm_out, d_out);
  Matrix<T> d_embedded = prediction_lstm_.backward(tape.lstm_tape, d_lstm);
  for (int u = 0; u < d_embedded.rows(); ++u) {
    const int row = (u == 0) ? start_context_row() : tape.labels[u - 1];
    T* dst = embedding_.grad.row(row);
    const T* src = d_embedded.row(u);
    for (int c = 0; c < config_.embedding_dim; ++c) dst[c] += src[c];
  }
}

template <typename T>
std::vector<Tensor3<T>> MsRnntModel<T>::forward_lattices(
    const Matrix<T>& features, const std::vector<TokenSequence>& targets,
    const std::vector<int>& assignment) const {
  const int S = config_.num_speakers;
  MSRNNT_SHAPE_CHECK(static_cast<int>(assignment.size()) == S,
                     "forward_lattices: assignment size != num_speakers");
  const std::vector<Matrix<T>> branches = encode(features, nullptr);
  std::vector<Tensor3<T>> lattices;
  lattices.reserve(S);
  for (int s = 0; s < S; ++s) {
    const int j = assignment[s];
    MSRNNT_CHECK(j >= 0 && j < static_cast<int>(targets.size()),
                 "forward_lattices: assignment target " << j << " out of range");
    const Matrix<T> pred = prediction_features(targets[j], nullptr);
    lattices.push_back(joint_.log_probs(branches[s], pred, nullptr));
  }
  return lattices;
}

namespace {

template <typename T>
class ModelPredictionStepper : public PredictionStepper<T> {
 public:
  explicit ModelPredictionStepper(const MsRnntModel<T>* model) : model_(model) {}

  std::vector<T> start() override {
    state_ = model_->prediction_lstm().zero_state();
    return step(model_->config().vocab_size());  // start-context row
  }

  std::vector<T> advance(int token) override {
    MSRNNT_CHECK(token >= 0 && token < model_->config().vocab_size(),
                 "stepper: token " << token << " out of range");
    return step(token);
  }

 private:
  std::vector<T> step(int embedding_row) {
    Matrix<T> in(1, model_->config().embedding_dim);
    const T* src = model_->embedding().value.row(embedding_row);
    for (int c = 0; c < in.cols(); ++c) in(0, c) = src[c];
    Matrix<T> lstm_out = model_->prediction_lstm().forward(in, &state_, nullptr);
    Matrix<T> out = model_->prediction_proj().forward(lstm_out);
    return std::vector<T>(out.row(0), out.row(0) + out.cols());
  }

  const MsRnntModel<T>* model_;
  LstmState<T> state_;
};

}  // namespace

template <typename T>
std::unique_ptr<PredictionStepper<T>> MsRnntModel<T>::make_stepper() const {
  return std::make_unique<ModelPredictionStepper<T>>(this);
}

template <typename T>
void MsRnntModel<T>::for_each_parameter(const std::function<void(Parameter<T>&)>& fn) {
  mixture_encoder_.for_each_parameter(fn);
  for (auto& sd : sd_encoders_) sd.for_each_parameter(fn);
  recognition_encoder_.for_each_parameter(fn);
  fn(recognition_proj_.w);
  fn(recognition_proj_.b);
  fn(embedding_);
  prediction_lstm_.for_each_parameter(fn);
  fn(prediction_proj_.w);
  fn(prediction_proj_.b);
  joint_.for_each_parameter(fn);
}

template <typename T>
std::vector<Parameter<T>*> MsRnntModel<T>::parameters() {
  std::vector<Parameter<T>*> out;
  for_each_parameter([&out](Parameter<T>& p) { out.push_back(&p); });
  return out;
}

template <typename T>
CheckpointMap MsRnntModel<T>::to_checkpoint() const {
  CheckpointMap map;
  const_cast<MsRnntModel<T>*>(this)->for_each_parameter([&map](Parameter<T>& p) {
    CheckpointEntry entry;
    entry.dims = {p.value.rows(), p.value.cols()};
    entry.values.resize(p.value.size());
    const T* v = p.value.data();
    for (std::size_t i = 0; i < p.value.size(); ++i)
      entry.values[i] = static_cast<float>(v[i]);
    map.emplace(p.name, std::move(entry));
  });
  return map;
}

template <typename T>
void MsRnntModel<T>::load_checkpoint(const CheckpointMap& map) {
  std::size_t used = 0;
  for_each_parameter([&map, &used](Parameter<T>& p) {
    auto it = map.find(p.name);
    MSRNNT_CHECK_AS(it != map.end(), ParseError,
                    "checkpoint missing parameter " << p.name);
    const CheckpointEntry& entry = it->second;
    MSRNNT_CHECK_AS(entry.dims.size() == 2 && entry.dims[0] == p.value.rows() &&
                        entry.dims[1] == p.value.cols(),
                    ParseError, "checkpoint shape mismatch for " << p.name);
    T* v = p.value.data();
    for (std::size_t i = 0; i < p.value.size(); ++i)
      v[i] = static_cast<T>(entry.values[i]);
    ++used;
  });
  MSRNNT_CHECK_AS(used == map.size(), ParseError,
                  "checkpoint has " << map.size() << " entries, model expects " << used);
}

namespace {

template <typename T>
void copy_values(const Parameter<T>& src, Parameter<T>& dst) {
  MSRNNT_SHAPE_CHECK(src.value.same_shape(dst.value),
                     "seed transfer: shape mismatch between " << src.name << " and "
                                                              << dst.name);
  const T* s = src.value.data();
  T* d = dst.value.data();
  for (std::size_t i = 0; i < src.value.size(); ++i) d[i] = s[i];
}

template <typename T>
void copy_stack(const LstmStack<T>& src, LstmStack<T>& dst) {
  MSRNNT_SHAPE_CHECK(src.num_layers() == dst.num_layers(), "seed transfer: layer count");
  for (int i = 0; i < src.num_layers(); ++i) {
    copy_values(src.layer(i).w_ih, dst.layer(i).w_ih);
    copy_values(src.layer(i).w_hh, dst.layer(i).w_hh);
    copy_values(src.layer(i).b, dst.layer(i).b);
  }
}

template <typename T>
void add_noise(Parameter<T>& p, double sigma, Rng& rng) {
  T* v = p.value.data();
  for (std::size_t i = 0; i < p.value.size(); ++i)
    v[i] += static_cast<T>(sigma * rng.gaussian());
}

}  // namespace

template <typename T>
MsRnntModel<T> MsRnntModel<T>::init_from_seed(const MsRnntModel<T>& seed,
                                              const MsRnntConfig& config, Rng& rng) {
  const MsRnntConfig& sc = seed.config();
  MSRNNT_CHECK(sc.num_speakers == 1, "seed model must be single-speaker");
  MSRNNT_CHECK(!sc.use_speaker_order_label, "seed model must not use order labels");
  MSRNNT_CHECK(sc.feature_dim == config.feature_dim &&
                   sc.downsample_factor == config.downsample_factor &&
                   sc.mixture_encoder == config.mixture_encoder &&
                   sc.sd_encoder == config.sd_encoder &&
                   sc.recognition_encoder == config.recognition_encoder &&
                   sc.prediction == config.prediction &&
                   sc.encoder_output_dim == config.encoder_output_dim &&
                   sc.prediction_output_dim == config.prediction_output_dim &&
                   sc.embedding_dim == config.embedding_dim &&
                   sc.joint_hidden_dim == config.joint_hidden_dim &&
                   sc.vocabulary == config.vocabulary,
               "seed topology does not match target config");

  MsRnntModel<T> model(config);
  copy_stack(seed.mixture_encoder_, model.mixture_encoder_);
  copy_stack(seed.recognition_encoder_, model.recognition_encoder_);
  copy_values(seed.recognition_proj_.w, model.recognition_proj_.w);
  copy_values(seed.recognition_proj_.b, model.recognition_proj_.b);
  copy_values(seed.embedding_, model.embedding_);
  copy_stack(seed.prediction_lstm_, model.prediction_lstm_);
  copy_values(seed.prediction_proj_.w, model.prediction_proj_.w);
  copy_values(seed.prediction_proj_.b, model.prediction_proj_.b);
  copy_values(seed.joint_.w_enc, model.joint_.w_enc);
  copy_values(seed.joint_.w_pred, model.joint_.w_pred);
  copy_values(seed.joint_.b, model.joint_.b);
  copy_values(seed.joint_.w_out, model.joint_.w_out);
  copy_values(seed.joint_.b_out, model.joint_.b_out);

  const LstmStack<T>& seed_sd = seed.sd_encoders_[0];
  for (int s = 0; s < config.num_speakers; ++s) {
    LstmStack<T>& dst = model.sd_encoders_[s];
    for (int i = 0; i < seed_sd.num_layers(); ++i) {
      const LstmLayer<T>& src_layer = seed_sd.layer(i);
      LstmLayer<T>& dst_layer = dst.layer(i);
      if (i == 0 && config.use_speaker_order_label) {
        // Label columns appended to the input: copy the seed weights into
        // the leading columns, keep the label columns zero.
        MSRNNT_SHAPE_CHECK(dst_layer.w_ih.value.cols() ==
                               src_layer.w_ih.value.cols() + config.num_speakers,
                           "seed transfer: sd input width");
        dst_layer.w_ih.value.zero();
        for (int r = 0; r < src_layer.w_ih.value.rows(); ++r) {
          const T* srow = src_layer.w_ih.value.row(r);
          T* drow = dst_layer.w_ih.value.row(r);
          for (int c = 0; c < src_layer.w_ih.value.cols(); ++c) drow[c] = srow[c];
        }
      } else {
        copy_values(src_layer.w_ih, dst_layer.w_ih);
      }
      copy_values(src_layer.w_hh, dst_layer.w_hh);
      copy_values(src_layer.b, dst_layer.b);
    }
    // Symmetry breaking: without order labels the branches would otherwise
    // compute identical functions forever.
    if (!config.use_speaker_order_label && config.num_speakers > 1) {
      dst.for_each_parameter([&rng](Parameter<T>& p) { add_noise(p, 0.01, rng); });
    }
  }
  return model;
}

template <typename T>
void save_model(const std::filesystem::path& path, const MsRnntModel<T>& model) {
  write_checkpoint(path, model.config().to_json(), model.to_checkpoint());
}

template <typename T>
MsRnntModel<T> load_model(const std::filesystem::path& path) {
  auto [config_json, params] = read_checkpoint(path);
  MsRnntModel<T> model(MsRnntConfig::from_json(config_json));
  model.load_checkpoint(params);
  return model;
}

template std::vector<float> speaker_order_vector<float>(int, int);
template std::vector<double> speaker_order_vector<double>(int, int);
template class MsRnntModel<float>;
template class MsRnntModel<double>;
template void save_model(const std::filesystem::path&, const MsRnntModel<float>&);
template void save_model(const std::filesystem::path&, const MsRnntModel<double>&);
template MsRnntModel<float> load_model(const std::filesystem::path&);
template MsRnntModel<double> load_model(const std::filesystem::path&);

}  // namespace msrnnt
