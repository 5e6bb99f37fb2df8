// tests/test_util.h

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

#ifndef MSRNNT_TESTS_TEST_UTIL_H_
#define MSRNNT_TESTS_TEST_UTIL_H_

#include <cmath>

#include "msrnnt/common/matrix.h"
#include "msrnnt/common/rng.h"
#include "msrnnt/model/config.h"
#include "msrnnt/transducer/vocabulary.h"

namespace msrnnt::test {

// Random per-node normalized log-distributions over `outputs` symbols.
inline Tensor3<double> random_log_probs(int frames, int rows, int outputs, Rng& rng,
                                        double logit_range = 2.0) {
  Tensor3<double> lp(frames, rows, outputs);
  for (int t = 0; t < frames; ++t) {
    for (int u = 0; u < rows; ++u) {
      double* z = lp.at(t, u);
      double max = -1e300;
      for (int k = 0; k < outputs; ++k) {
        z[k] = rng.uniform(-logit_range, logit_range);
        max = std::max(max, z[k]);
      }
      double sum = 0.0;
      for (int k = 0; k < outputs; ++k) sum += std::exp(z[k] - max);
      const double lse = max + std::log(sum);
      for (int k = 0; k < outputs; ++k) z[k] -= lse;
    }
  }
  return lp;
}

inline TokenSequence random_labels(int count, int vocab, Rng& rng) {
  TokenSequence labels(count);
  for (int& label : labels) label = rng.uniform_int(0, vocab - 1);
  return labels;
}

inline Matrix<double> random_matrix(int rows, int cols, Rng& rng, double range = 1.0) {
  Matrix<double> m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = rng.uniform(-range, range);
  return m;
}

// Small architecture for gradient checks and causality probes.
inline MsRnntConfig tiny_config(int num_speakers, bool order_labels) {
  MsRnntConfig cfg;
  cfg.num_speakers = num_speakers;
  cfg.feature_dim = 3;
  cfg.downsample_factor = 2;
  cfg.mixture_encoder = {1, 4};
  cfg.sd_encoder = {1, 4};
  cfg.recognition_encoder = {1, 4};
  cfg.prediction = {1, 4};
  cfg.encoder_output_dim = 3;
  cfg.prediction_output_dim = 3;
  cfg.embedding_dim = 3;
  cfg.joint_hidden_dim = 4;
  cfg.vocabulary = Vocabulary::characters(3).symbols();
  cfg.use_speaker_order_label = order_labels;
  return cfg;
}

inline double rel_err(double a, double b, double floor = 1e-4) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace msrnnt::test

#endif  // MSRNNT_TESTS_TEST_UTIL_H_
