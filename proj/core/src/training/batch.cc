// training/batch.cc

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

#include "msrnnt/training/batch.h"

namespace msrnnt {

TrainExample pad_to_slots(const MixtureExample& example, int num_speakers) {
  MSRNNT_CHECK(example.num_speakers() <= num_speakers,
               "example " << example.id << " has " << example.num_speakers()
                          << " speakers, model supports " << num_speakers);
  TrainExample out;
  out.source = &example;
  out.targets = example.refs;
  out.targets.resize(num_speakers);  // surplus slots become empty targets
  return out;
}

MultiStyleBatcher::MultiStyleBatcher(const Corpus* single_corpus,
                                     const Corpus* multi_corpus, double mix_fraction,
                                     int num_speakers, int batch_size, Rng rng)
    : single_(single_corpus),
      multi_(multi_corpus),
      mix_fraction_(mix_fraction),
      num_speakers_(num_speakers),
      batch_size_(batch_size),
      rng_(rng) {
  MSRNNT_CHECK(mix_fraction_ >= 0.0 && mix_fraction_ <= 1.0,
               "mix_fraction must be in [0,1]");
  MSRNNT_CHECK(batch_size_ >= 1, "batch_size must be >= 1");
  if (mix_fraction_ > 0.0)
    MSRNNT_CHECK(multi_ != nullptr && !multi_->examples.empty(),
                 "multi-speaker corpus required but empty");
  if (mix_fraction_ < 1.0)
    MSRNNT_CHECK(single_ != nullptr && !single_->examples.empty(),
                 "single-speaker corpus required but empty");
}

TrainBatch MultiStyleBatcher::next() {
  TrainBatch batch;
  batch.examples.reserve(batch_size_);
  for (int i = 0; i < batch_size_; ++i) {
    const bool take_multi = rng_.uniform() < mix_fraction_;
    const Corpus* corpus = take_multi ? multi_ : single_;
    const int index =
        rng_.uniform_int(0, static_cast<int>(corpus->examples.size()) - 1);
    batch.examples.push_back(pad_to_slots(corpus->examples[index], num_speakers_));
  }
  return batch;
}

}  // namespace msrnnt
