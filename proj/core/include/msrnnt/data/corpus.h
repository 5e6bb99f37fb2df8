// data/corpus.h

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

#ifndef MSRNNT_DATA_CORPUS_H_
#define MSRNNT_DATA_CORPUS_H_

#include <filesystem>
#include <string>
#include <vector>

#include "msrnnt/common/matrix.h"
#include "msrnnt/transducer/vocabulary.h"

namespace msrnnt {

// A single-speaker utterance with synthetic features.
struct Utterance {
  std::string id;
  Matrix<float> features;  // frames x feature_dim
  double frame_shift_ms = 10.0;
  TokenSequence transcript;  // blank-free, non-empty

  double duration_s() const { return features.rows() * frame_shift_ms / 1000.0; }
};

// One corpus record: mixed (or single-speaker, when num_speakers() == 1)
// features plus per-speaker references ordered by speech onset.
struct MixtureExample {
  std::string id;
  Matrix<float> features;
  double frame_shift_ms = 10.0;
  std::vector<TokenSequence> refs;   // ordered by onset; refs[0] starts first
  std::vector<double> delays_s;      // speaker start offsets; delays_s[0] == 0
  std::vector<double> durations_s;
  double overlap_s = 0.0;
  double overlap_ratio = 0.0;  // overlap_s / mixture duration

  int num_speakers() const { return static_cast<int>(refs.size()); }
  double duration_s() const { return features.rows() * frame_shift_ms / 1000.0; }
};

// On disk: a directory holding manifest.jsonl (one JSON header line with
// vocabulary and corpus stats, then one JSON record per example) plus one
// raw little-endian float32 feature matrix per example.
struct Corpus {
  std::vector<std::string> vocabulary;
  double frame_shift_ms = 10.0;
  int feature_dim = 0;
  std::vector<MixtureExample> examples;

  std::size_t size() const { return examples.size(); }
};

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);

// Round-trip exact: features bit-identical, metadata equal. Throws ParseError
// naming the record index on malformed or truncated input.
Corpus read_corpus(const std::filesystem::path& dir);

}  // namespace msrnnt

#endif  // MSRNNT_DATA_CORPUS_H_
