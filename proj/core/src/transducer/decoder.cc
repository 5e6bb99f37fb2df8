// transducer/decoder.cc

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

#include "msrnnt/transducer/decoder.h"

namespace msrnnt {

template <typename T>
Hypothesis greedy_decode(const Matrix<T>& encoder_rows, PredictionStepper<T>& stepper,
                         const JointNetwork<T>& joint, int max_symbols_per_frame) {
  MSRNNT_CHECK(max_symbols_per_frame >= 1, "max_symbols_per_frame must be >= 1");
  MSRNNT_SHAPE_CHECK(encoder_rows.cols() == joint.encoder_dim(),
                     "decoder: encoder dim " << encoder_rows.cols() << " != "
                                             << joint.encoder_dim());
  const int blank = joint.num_outputs() - 1;

  Hypothesis hyp;
  std::vector<T> context = stepper.start();
  for (int t = 0; t < encoder_rows.rows(); ++t) {
    for (int emitted = 0; emitted < max_symbols_per_frame; ++emitted) {
      const std::vector<T> lp = joint.log_probs_row(encoder_rows.row(t), context.data());
      int best = 0;
      for (int k = 1; k < static_cast<int>(lp.size()); ++k)
        if (lp[k] > lp[best]) best = k;
      hyp.score += static_cast<double>(lp[best]);
      if (best == blank) break;
      hyp.tokens.push_back(best);
      hyp.frames.push_back(t);
      context = stepper.advance(best);
    }
  }
  return hyp;
}

template Hypothesis greedy_decode(const Matrix<float>&, PredictionStepper<float>&,
                                  const JointNetwork<float>&, int);
template Hypothesis greedy_decode(const Matrix<double>&, PredictionStepper<double>&,
                                  const JointNetwork<double>&, int);

}  // namespace msrnnt
