// model/config.h

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

#ifndef MSRNNT_MODEL_CONFIG_H_
#define MSRNNT_MODEL_CONFIG_H_

#include <string>
#include <vector>

namespace msrnnt {

struct StackSpec {
  int layers = 1;
  int units = 32;
};

// Architecture hyperparameters of the multi-speaker transducer. The encoder
// is a mixture encoder feeding num_speakers speaker-dependent encoders, each
// followed by the shared recognition encoder; prediction and joint networks
// are shared across speakers.
struct MsRnntConfig {
  int num_speakers = 1;
  int feature_dim = 16;
  int downsample_factor = 3;  // frames stacked and decimated before the mixture encoder

  StackSpec mixture_encoder{1, 32};
  StackSpec sd_encoder{1, 32};
  StackSpec recognition_encoder{1, 32};
  StackSpec prediction{1, 32};

  int encoder_output_dim = 24;     // recognition-encoder projection size
  int prediction_output_dim = 24;  // prediction-network projection size
  int embedding_dim = 16;
  int joint_hidden_dim = 32;

  std::vector<std::string> vocabulary;  // non-blank symbols; blank appended internally

  // When set, each SD encoder sees a per-speaker one-hot order label
  // concatenated to every input frame.
  bool use_speaker_order_label = false;

  int vocab_size() const { return static_cast<int>(vocabulary.size()); }
  int stacked_feature_dim() const { return feature_dim * downsample_factor; }
  int sd_input_dim() const {
    return mixture_encoder.units + (use_speaker_order_label ? num_speakers : 0);
  }

  void validate() const;

  std::string to_json() const;
  static MsRnntConfig from_json(const std::string& text);

  // Desk-scale default: trains in minutes on a laptop.
  static MsRnntConfig toy(int num_speakers, bool order_labels);
  // Production-scale constants, kept as a documented preset only.
  static MsRnntConfig full_scale(int num_speakers, bool order_labels);
};

bool operator==(const StackSpec& a, const StackSpec& b);
bool operator==(const MsRnntConfig& a, const MsRnntConfig& b);

}  // namespace msrnnt

#endif  // MSRNNT_MODEL_CONFIG_H_
