// data/synth.h

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

#ifndef MSRNNT_DATA_SYNTH_H_
#define MSRNNT_DATA_SYNTH_H_

#include <filesystem>

#include "msrnnt/common/rng.h"
#include "msrnnt/data/corpus.h"

namespace msrnnt {

// Synthetic acoustic stand-in: every token has a fixed feature template;
// utterance features are the templates repeated frames_per_token times with
// additive Gaussian noise.
struct SynthEmissionModel {
  Matrix<float> templates;  // vocab_size x feature_dim, pairwise distinct rows
  int frames_per_token = 20;
  float noise_sigma = 0.05f;
};

// Templates are scaled one-hot vectors plus a fixed per-corpus jitter, so
// any two-token sum stays identifiable.
SynthEmissionModel make_toy_emission_model(int vocab_size, int feature_dim,
                                           int frames_per_token, float noise_sigma,
                                           float template_jitter, Rng& rng);

Utterance synth_utterance(const SynthEmissionModel& emission,
                          const TokenSequence& transcript, double frame_shift_ms,
                          Rng& rng, const std::string& id);

// Deterministic mix of u2 starting delay_frames after u1: features summed
// frame-wise with zero-padding, refs ordered by onset, overlap stats from
// interval arithmetic. Requires 0 <= delay_frames < frames(u1).
MixtureExample mix_at_delay(const Utterance& u1, const Utterance& u2, int delay_frames);

// Mixes two utterances. The second speaker's delay is drawn uniformly from
// [min_delay_s, min_delay_s + delay_fraction * (dur(u1) - min_delay_s)), so
// the default delay_fraction = 1 samples the full feasible range and every
// mixture has a positive overlap. Throws if dur(u1) <= min_delay_s.
MixtureExample simulate_mixture(const Utterance& u1, const Utterance& u2, Rng& rng,
                                double min_delay_s = 0.5, double delay_fraction = 1.0);

// Total overlapped time divided by total mixture time.
double corpus_overlap_ratio(const std::vector<MixtureExample>& examples);

// Desk-scale corpus family: single-speaker and 2-speaker train/dev/test
// splits. Train mixtures enforce the 0.5 s minimum delay; dev/test relax it
// to 0 (overlap still required). delay_fraction is tuned so the train split
// lands near a 0.28 overlap ratio.
struct ToyCorpusConfig {
  std::uint64_t seed = 17;
  int vocab_size = 8;
  int feature_dim = 16;
  int frames_per_token = 20;
  int transcript_len_min = 3;
  int transcript_len_max = 8;
  float noise_sigma = 0.05f;
  float template_jitter = 0.1f;
  double frame_shift_ms = 10.0;
  double train_min_delay_s = 0.5;
  double eval_min_delay_s = 0.0;
  double delay_fraction = 0.33;       // train split, tuned for ~0.28 overlap
  double eval_delay_fraction = 1.0;   // dev/test sample the full delay range
  int train_single = 500, dev_single = 50, test_single = 50;
  int train_multi = 500, dev_multi = 50, test_multi = 50;
};

// Per-mixture RNG streams derive from (seed, split, index), so any subset of
// examples can be regenerated independently with identical bytes.
Corpus make_toy_single_corpus(const ToyCorpusConfig& config, const std::string& split,
                              int count);
Corpus make_toy_mixture_corpus(const ToyCorpusConfig& config, const std::string& split,
                               int count, double min_delay_s, double delay_fraction);

// Writes {train,dev,test}_{1spk,2spk} corpora under out_dir.
void generate_toy_corpora(const ToyCorpusConfig& config,
                          const std::filesystem::path& out_dir);

}  // namespace msrnnt

#endif  // MSRNNT_DATA_SYNTH_H_
