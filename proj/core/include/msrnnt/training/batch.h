// training/batch.h

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

#ifndef MSRNNT_TRAINING_BATCH_H_
#define MSRNNT_TRAINING_BATCH_H_

#include "msrnnt/common/rng.h"
#include "msrnnt/data/corpus.h"

namespace msrnnt {

// One training example with its targets padded to the model's speaker-slot
// count: slot order follows speech onset, and single-speaker examples carry
// empty targets (trained to emit only blanks) in the surplus slots.
struct TrainExample {
  const MixtureExample* source = nullptr;
  std::vector<TokenSequence> targets;
};

struct TrainBatch {
  std::vector<TrainExample> examples;
};

// Draws examples with replacement: multi-speaker with probability
// mix_fraction, single-speaker otherwise. Deterministic given the rng seed.
class MultiStyleBatcher {
 public:
  MultiStyleBatcher(const Corpus* single_corpus, const Corpus* multi_corpus,
                    double mix_fraction, int num_speakers, int batch_size, Rng rng);

  TrainBatch next();

 private:
  const Corpus* single_;
  const Corpus* multi_;
  double mix_fraction_;
  int num_speakers_;
  int batch_size_;
  Rng rng_;
};

// Pads an example's references to `num_speakers` target slots.
TrainExample pad_to_slots(const MixtureExample& example, int num_speakers);

}  // namespace msrnnt

#endif  // MSRNNT_TRAINING_BATCH_H_
