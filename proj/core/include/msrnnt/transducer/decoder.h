// transducer/decoder.h

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

#ifndef MSRNNT_TRANSDUCER_DECODER_H_
#define MSRNNT_TRANSDUCER_DECODER_H_

#include <vector>

#include "msrnnt/common/matrix.h"
#include "msrnnt/transducer/joint.h"
#include "msrnnt/transducer/vocabulary.h"

namespace msrnnt {

// Incremental prediction-network interface the decoder drives. start()
// resets to the start context and returns its feature row; advance() feeds
// one emitted non-blank token and returns the next row.
template <typename T>
class PredictionStepper {
 public:
  virtual ~PredictionStepper() = default;
  virtual std::vector<T> start() = 0;
  virtual std::vector<T> advance(int token) = 0;
};

// Greedy decode result. frames[i] is the (downsampled) encoder frame at
// which tokens[i] was emitted; non-decreasing by construction. score is the
// summed log-probability of every greedy choice, blanks included.
struct Hypothesis {
  TokenSequence tokens;
  std::vector<int> frames;
  double score = 0.0;
};

// Frame-synchronous greedy decoding: at each encoder frame take the argmax
// symbol; emit non-blank tokens (advancing the prediction context) until
// blank wins or max_symbols_per_frame emissions, then move to the next
// frame. Output after consuming t frames equals decoding the t-frame prefix.
template <typename T>
Hypothesis greedy_decode(const Matrix<T>& encoder_rows, PredictionStepper<T>& stepper,
                         const JointNetwork<T>& joint, int max_symbols_per_frame = 5);

}  // namespace msrnnt

#endif  // MSRNNT_TRANSDUCER_DECODER_H_
