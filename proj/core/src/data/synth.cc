// data/synth.cc

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

#include "msrnnt/data/synth.h"

#include <cmath>
#include <cstdio>

namespace msrnnt {

namespace {

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string indexed_id(const std::string& prefix, int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%05d", prefix.c_str(), index);
  return buf;
}

}  // namespace

MixtureExample mix_at_delay(const Utterance& u1, const Utterance& u2,
                            int delay_frames) {
  MSRNNT_SHAPE_CHECK(u1.features.cols() == u2.features.cols(),
                     "mixture: feature dims differ");
  MSRNNT_CHECK(u1.frame_shift_ms == u2.frame_shift_ms,
               "mixture: frame shifts differ");
  const int frames1 = u1.features.rows();
  const int frames2 = u2.features.rows();
  MSRNNT_CHECK(delay_frames >= 0 && delay_frames < frames1,
               "mixture: delay " << delay_frames << " frames leaves no overlap");

  const int mix_frames = std::max(frames1, delay_frames + frames2);
  const int overlap_frames = std::min(frames1, delay_frames + frames2) - delay_frames;
  const double shift_s = u1.frame_shift_ms / 1000.0;

  MixtureExample ex;
  ex.id = u1.id + "+" + u2.id;
  ex.frame_shift_ms = u1.frame_shift_ms;
  ex.features = Matrix<float>(mix_frames, u1.features.cols());
  for (int t = 0; t < frames1; ++t) {
    const float* src = u1.features.row(t);
    float* dst = ex.features.row(t);
    for (int c = 0; c < ex.features.cols(); ++c) dst[c] += src[c];
  }
  for (int t = 0; t < frames2; ++t) {
    const float* src = u2.features.row(t);
    float* dst = ex.features.row(delay_frames + t);
    for (int c = 0; c < ex.features.cols(); ++c) dst[c] += src[c];
  }
  ex.refs = {u1.transcript, u2.transcript};
  ex.delays_s = {0.0, delay_frames * shift_s};
  ex.durations_s = {u1.duration_s(), u2.duration_s()};
  ex.overlap_s = overlap_frames * shift_s;
  ex.overlap_ratio = static_cast<double>(overlap_frames) / mix_frames;
  return ex;
}

SynthEmissionModel make_toy_emission_model(int vocab_size, int feature_dim,
                                           int frames_per_token, float noise_sigma,
                                           float template_jitter, Rng& rng) {
  MSRNNT_CHECK(vocab_size >= 1 && feature_dim >= 1, "emission model dims");
  MSRNNT_CHECK(frames_per_token >= 1, "frames_per_token must be >= 1");
  MSRNNT_CHECK(noise_sigma >= 0.0f && template_jitter >= 0.0f, "sigma must be >= 0");
  MSRNNT_CHECK(template_jitter > 0.0f || vocab_size <= feature_dim,
               "one-hot templates need vocab_size <= feature_dim when jitter is 0");
  SynthEmissionModel emission;
  emission.frames_per_token = frames_per_token;
  emission.noise_sigma = noise_sigma;
  emission.templates = Matrix<float>(vocab_size, feature_dim);
  for (int v = 0; v < vocab_size; ++v) {
    float* row = emission.templates.row(v);
    row[v % feature_dim] = 1.0f;
    for (int c = 0; c < feature_dim; ++c)
      row[c] += template_jitter * static_cast<float>(rng.gaussian());
  }
  return emission;
}

Utterance synth_utterance(const SynthEmissionModel& emission,
                          const TokenSequence& transcript, double frame_shift_ms,
                          Rng& rng, const std::string& id) {
  MSRNNT_CHECK(!transcript.empty(), "empty transcript");
  for (int token : transcript)
    MSRNNT_CHECK(token >= 0 && token < emission.templates.rows(),
                 "transcript token " << token << " outside emission model");

  Utterance utt;
  utt.id = id;
  utt.frame_shift_ms = frame_shift_ms;
  utt.transcript = transcript;
  const int fpt = emission.frames_per_token;
  const int dim = emission.templates.cols();
  utt.features = Matrix<float>(static_cast<int>(transcript.size()) * fpt, dim);
  int t = 0;
  for (int token : transcript) {
    const float* tmpl = emission.templates.row(token);
    for (int k = 0; k < fpt; ++k, ++t) {
      float* dst = utt.features.row(t);
      for (int c = 0; c < dim; ++c)
        dst[c] = tmpl[c] + emission.noise_sigma * static_cast<float>(rng.gaussian());
    }
  }
  return utt;
}

MixtureExample simulate_mixture(const Utterance& u1, const Utterance& u2, Rng& rng,
                                double min_delay_s, double delay_fraction) {
  MSRNNT_CHECK(min_delay_s >= 0.0, "min_delay_s must be >= 0");
  MSRNNT_CHECK(delay_fraction > 0.0 && delay_fraction <= 1.0,
               "delay_fraction must be in (0, 1]");
  const double shift_s = u1.frame_shift_ms / 1000.0;
  const int frames1 = u1.features.rows();
  const int min_delay_frames =
      static_cast<int>(std::llround(min_delay_s / shift_s));
  MSRNNT_CHECK(min_delay_frames < frames1, "utterance too short to overlap: "
                                               << u1.id << " (" << u1.duration_s()
                                               << " s <= " << min_delay_s << " s)");
  // Uniform over the integer frame delays in the tuned window.
  const double window = delay_fraction * (frames1 - min_delay_frames);
  int delay_frames = min_delay_frames + static_cast<int>(rng.uniform() * window);
  if (delay_frames >= frames1) delay_frames = frames1 - 1;
  return mix_at_delay(u1, u2, delay_frames);
}

double corpus_overlap_ratio(const std::vector<MixtureExample>& examples) {
  MSRNNT_CHECK(!examples.empty(), "empty corpus");
  double overlap = 0.0, duration = 0.0;
  for (const MixtureExample& ex : examples) {
    overlap += ex.overlap_s;
    duration += ex.duration_s();
  }
  return overlap / duration;
}

namespace {

SynthEmissionModel corpus_emission_model(const ToyCorpusConfig& config) {
  // One template set for the whole corpus family; all splits must share the
  // token-to-feature mapping.
  Rng rng = Rng(config.seed).derive(fnv1a64("emission-templates"));
  return make_toy_emission_model(config.vocab_size, config.feature_dim,
                                 config.frames_per_token, config.noise_sigma,
                                 config.template_jitter, rng);
}

TokenSequence random_transcript(const ToyCorpusConfig& config, Rng& rng) {
  const int len = rng.uniform_int(config.transcript_len_min, config.transcript_len_max);
  TokenSequence transcript(len);
  int prev = -1;
  for (int& token : transcript) {
    // No immediate repeats: a repeated token would concatenate two identical
    // templates into one indistinguishable block, leaving the boundary
    // recoverable only by frame counting.
    do {
      token = rng.uniform_int(0, config.vocab_size - 1);
    } while (token == prev && config.vocab_size > 1);
    prev = token;
  }
  return transcript;
}

}  // namespace

Corpus make_toy_single_corpus(const ToyCorpusConfig& config, const std::string& split,
                              int count) {
  const SynthEmissionModel emission = corpus_emission_model(config);
  const Rng root(config.seed);
  const std::uint64_t salt = fnv1a64(split + "_1spk");

  Corpus corpus;
  corpus.vocabulary = Vocabulary::characters(config.vocab_size).symbols();
  corpus.frame_shift_ms = config.frame_shift_ms;
  corpus.feature_dim = config.feature_dim;
  corpus.examples.reserve(count);
  for (int i = 0; i < count; ++i) {
    Rng rng = root.derive(salt + static_cast<std::uint64_t>(i));
    const std::string id = indexed_id(split + "1_", i);
    const Utterance utt =
        synth_utterance(emission, random_transcript(config, rng),
                        config.frame_shift_ms, rng, id);
    MixtureExample ex;
    ex.id = utt.id;
    ex.features = utt.features;
    ex.frame_shift_ms = utt.frame_shift_ms;
    ex.refs = {utt.transcript};
    ex.delays_s = {0.0};
    ex.durations_s = {utt.duration_s()};
    corpus.examples.push_back(std::move(ex));
  }
  return corpus;
}

Corpus make_toy_mixture_corpus(const ToyCorpusConfig& config, const std::string& split,
                               int count, double min_delay_s, double delay_fraction) {
  const SynthEmissionModel emission = corpus_emission_model(config);
  const Rng root(config.seed);
  const std::uint64_t salt = fnv1a64(split + "_2spk");

  Corpus corpus;
  corpus.vocabulary = Vocabulary::characters(config.vocab_size).symbols();
  corpus.frame_shift_ms = config.frame_shift_ms;
  corpus.feature_dim = config.feature_dim;
  corpus.examples.reserve(count);
  for (int i = 0; i < count; ++i) {
    Rng rng = root.derive(salt + static_cast<std::uint64_t>(i));
    const std::string base = indexed_id(split + "2_", i);
    const Utterance u1 = synth_utterance(emission, random_transcript(config, rng),
                                         config.frame_shift_ms, rng, base + "a");
    const Utterance u2 = synth_utterance(emission, random_transcript(config, rng),
                                         config.frame_shift_ms, rng, base + "b");
    MixtureExample ex = simulate_mixture(u1, u2, rng, min_delay_s, delay_fraction);
    ex.id = base;
    corpus.examples.push_back(std::move(ex));
  }
  return corpus;
}

void generate_toy_corpora(const ToyCorpusConfig& config,
                          const std::filesystem::path& out_dir) {
  write_corpus(make_toy_single_corpus(config, "train", config.train_single),
               out_dir / "train_1spk");
  write_corpus(make_toy_single_corpus(config, "dev", config.dev_single),
               out_dir / "dev_1spk");
  write_corpus(make_toy_single_corpus(config, "test", config.test_single),
               out_dir / "test_1spk");
  write_corpus(make_toy_mixture_corpus(config, "train", config.train_multi,
                                       config.train_min_delay_s,
                                       config.delay_fraction),
               out_dir / "train_2spk");
  write_corpus(make_toy_mixture_corpus(config, "dev", config.dev_multi,
                                       config.eval_min_delay_s,
                                       config.eval_delay_fraction),
               out_dir / "dev_2spk");
  write_corpus(make_toy_mixture_corpus(config, "test", config.test_multi,
                                       config.eval_min_delay_s,
                                       config.eval_delay_fraction),
               out_dir / "test_2spk");
}

}  // namespace msrnnt
