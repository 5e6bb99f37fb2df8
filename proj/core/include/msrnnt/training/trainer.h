// training/trainer.h

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

#ifndef MSRNNT_TRAINING_TRAINER_H_
#define MSRNNT_TRAINING_TRAINER_H_

#include <map>
#include <optional>
#include <string>

#include "msrnnt/numerics/adam.h"
#include "msrnnt/numerics/lr_schedule.h"
#include "msrnnt/training/batch.h"
#include "msrnnt/training/objectives.h"

namespace msrnnt {

struct StepMetrics {
  std::int64_t step = 0;
  double loss = 0.0;  // batch mean of per-example summed speaker losses
  double lr = 0.0;
  double grad_norm = 0.0;  // pre-clip global norm
  std::map<std::string, int> permutation_counts;  // e.g. "01" -> 7, "10" -> 1
};

// Appends "step,loss,lr,grad_norm,perm_histogram" to a metrics stream.
std::string format_metrics_line(const StepMetrics& metrics);

// One optimizer update on a batch: zero grads, accumulate per example in
// batch order (losses averaged over the batch), clip by global norm, Adam.
// Throws NumericError naming the example on a non-finite loss.
template <typename T>
StepMetrics train_step(MsRnntModel<T>& model, const TrainBatch& batch,
                       AssignmentMode mode, AdamOptimizer<T>& optimizer, double lr,
                       double clip_norm);

struct TrainLoopOptions {
  AssignmentMode mode = AssignmentMode::kPit;
  double mix_fraction = 1.0;  // probability of drawing a multi-speaker example
  int batch_size = 8;
  std::int64_t max_steps = 2000;
  std::int64_t eval_every = 250;  // dev WER cadence; 0 disables dev selection
  LrSchedule schedule;
  AdamOptions adam;
  double clip_norm = 5.0;
  std::uint64_t seed = 17;
  int max_symbols_per_frame = 5;
};

struct TrainResult {
  double best_dev_wer = -1.0;  // -1 when dev selection never ran
  std::int64_t best_step = 0;
  std::int64_t steps_run = 0;
  CheckpointMap best_params;  // best-on-dev snapshot (init when no eval ran)
};

// Greedy-decodes every example of `corpus` with the model's branches and
// scores permutation WER against the references.
template <typename T>
double evaluate_dev_wer(MsRnntModel<T>& model, const Corpus& corpus,
                        int max_symbols_per_frame);

// Full loop: multi-style batching, warmup-hold-decay schedule, Adam, dev
// evaluation every eval_every steps keeping the best-on-dev snapshot.
// metrics_sink (optional) receives one formatted line per step.
template <typename T>
TrainResult train_loop(MsRnntModel<T>& model, const Corpus* single_corpus,
                       const Corpus* multi_corpus, const Corpus* dev_corpus,
                       const TrainLoopOptions& options,
                       const std::function<void(const std::string&)>& metrics_sink);

}  // namespace msrnnt

#endif  // MSRNNT_TRAINING_TRAINER_H_
