// model/config.cc

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

#include "msrnnt/model/config.h"

#include <nlohmann/json.hpp>

#include "msrnnt/common/check.h"
#include "msrnnt/transducer/vocabulary.h"

namespace msrnnt {

using nlohmann::json;

void MsRnntConfig::validate() const {
  MSRNNT_CHECK(num_speakers >= 1, "num_speakers must be >= 1");
  MSRNNT_CHECK(feature_dim >= 1, "feature_dim must be >= 1");
  MSRNNT_CHECK(downsample_factor >= 1, "downsample_factor must be >= 1");
  for (const StackSpec& s : {mixture_encoder, sd_encoder, recognition_encoder, prediction})
    MSRNNT_CHECK(s.layers >= 1 && s.units >= 1, "stack specs must be positive");
  MSRNNT_CHECK(encoder_output_dim >= 1 && prediction_output_dim >= 1 &&
                   embedding_dim >= 1 && joint_hidden_dim >= 1,
               "projection dims must be positive");
  MSRNNT_CHECK(!vocabulary.empty(), "vocabulary must not be empty");
  Vocabulary check_unique(vocabulary);  // throws on duplicates/empties
}

namespace {

json stack_to_json(const StackSpec& s) {
  return json{{"layers", s.layers}, {"units", s.units}};
}

StackSpec stack_from_json(const json& j) {
  StackSpec s;
  s.layers = j.at("layers").get<int>();
  s.units = j.at("units").get<int>();
  return s;
}

}  // namespace

std::string MsRnntConfig::to_json() const {
  json j;
  j["num_speakers"] = num_speakers;
  j["feature_dim"] = feature_dim;
  j["downsample_factor"] = downsample_factor;
  j["mixture_encoder"] = stack_to_json(mixture_encoder);
  j["sd_encoder"] = stack_to_json(sd_encoder);
  j["recognition_encoder"] = stack_to_json(recognition_encoder);
  j["prediction"] = stack_to_json(prediction);
  j["encoder_output_dim"] = encoder_output_dim;
  j["prediction_output_dim"] = prediction_output_dim;
  j["embedding_dim"] = embedding_dim;
  j["joint_hidden_dim"] = joint_hidden_dim;
  j["vocabulary"] = vocabulary;
  j["use_speaker_order_label"] = use_speaker_order_label;
  return j.dump(2);
}

MsRnntConfig MsRnntConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model config: ") + e.what());
  }
  MsRnntConfig cfg;
  try {
    cfg.num_speakers = j.at("num_speakers").get<int>();
    cfg.feature_dim = j.at("feature_dim").get<int>();
    cfg.downsample_factor = j.at("downsample_factor").get<int>();
    cfg.mixture_encoder = stack_from_json(j.at("mixture_encoder"));
    cfg.sd_encoder = stack_from_json(j.at("sd_encoder"));
    cfg.recognition_encoder = stack_from_json(j.at("recognition_encoder"));
    cfg.prediction = stack_from_json(j.at("prediction"));
    cfg.encoder_output_dim = j.at("encoder_output_dim").get<int>();
    cfg.prediction_output_dim = j.at("prediction_output_dim").get<int>();
    cfg.embedding_dim = j.at("embedding_dim").get<int>();
    cfg.joint_hidden_dim = j.at("joint_hidden_dim").get<int>();
    cfg.vocabulary = j.at("vocabulary").get<std::vector<std::string>>();
    cfg.use_speaker_order_label = j.at("use_speaker_order_label").get<bool>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("model config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

MsRnntConfig MsRnntConfig::toy(int num_speakers, bool order_labels) {
  MsRnntConfig cfg;
  cfg.num_speakers = num_speakers;
  cfg.feature_dim = 16;
  cfg.downsample_factor = 3;
  cfg.mixture_encoder = {1, 32};
  cfg.sd_encoder = {1, 32};
  cfg.recognition_encoder = {1, 32};
  cfg.prediction = {1, 32};
  cfg.encoder_output_dim = 24;
  cfg.prediction_output_dim = 24;
  cfg.embedding_dim = 16;
  cfg.joint_hidden_dim = 32;
  cfg.vocabulary = Vocabulary::characters(8).symbols();
  cfg.use_speaker_order_label = order_labels;
  return cfg;
}

MsRnntConfig MsRnntConfig::full_scale(int num_speakers, bool order_labels) {
  MsRnntConfig cfg;
  cfg.num_speakers = num_speakers;
  cfg.feature_dim = 64;  // log-mel filterbanks at 10 ms shift
  cfg.downsample_factor = 3;
  cfg.mixture_encoder = {2, 1024};
  cfg.sd_encoder = {2, 1024};
  cfg.recognition_encoder = {2, 1024};
  cfg.prediction = {2, 1024};
  cfg.encoder_output_dim = 640;
  cfg.prediction_output_dim = 640;
  cfg.embedding_dim = 640;
  cfg.joint_hidden_dim = 512;
  // 2500 word pieces at production scale; a placeholder character set here
  // since the word-piece inventory is corpus-dependent.
  cfg.vocabulary = Vocabulary::characters(26).symbols();
  cfg.use_speaker_order_label = order_labels;
  return cfg;
}

bool operator==(const StackSpec& a, const StackSpec& b) {
  return a.layers == b.layers && a.units == b.units;
}

bool operator==(const MsRnntConfig& a, const MsRnntConfig& b) {
  return a.num_speakers == b.num_speakers && a.feature_dim == b.feature_dim &&
         a.downsample_factor == b.downsample_factor &&
         a.mixture_encoder == b.mixture_encoder && a.sd_encoder == b.sd_encoder &&
         a.recognition_encoder == b.recognition_encoder && a.prediction == b.prediction &&
         a.encoder_output_dim == b.encoder_output_dim &&
         a.prediction_output_dim == b.prediction_output_dim &&
         a.embedding_dim == b.embedding_dim && a.joint_hidden_dim == b.joint_hidden_dim &&
         a.vocabulary == b.vocabulary &&
         a.use_speaker_order_label == b.use_speaker_order_label;
}

}  // namespace msrnnt
