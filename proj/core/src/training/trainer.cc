// training/trainer.cc

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

#include "msrnnt/training/trainer.h"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "msrnnt/eval/wer.h"

namespace msrnnt {

std::string format_metrics_line(const StepMetrics& metrics) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%lld,%.6f,%.6g,%.6f",
                static_cast<long long>(metrics.step), metrics.loss, metrics.lr,
                metrics.grad_norm);
  std::ostringstream os;
  os << buf << ',';
  bool first = true;
  for (const auto& [perm, count] : metrics.permutation_counts) {
    if (!first) os << '|';
    os << perm << ':' << count;
    first = false;
  }
  return os.str();
}

namespace {

std::string assignment_key(const std::vector<int>& assignment) {
  std::string key;
  key.reserve(assignment.size());
  for (int j : assignment) key += static_cast<char>('0' + j);
  return key;
}

}  // namespace

template <typename T>
StepMetrics train_step(MsRnntModel<T>& model, const TrainBatch& batch,
                       AssignmentMode mode, AdamOptimizer<T>& optimizer, double lr,
                       double clip_norm) {
  MSRNNT_CHECK(!batch.examples.empty(), "empty batch");
  optimizer.zero_grad();

  StepMetrics metrics;
  double loss_sum = 0.0;
  for (const TrainExample& example : batch.examples) {
    const Matrix<T> features = matrix_cast<T>(example.source->features);
    const ExampleLoss result =
        example_loss(model, features, example.targets, mode, /*accumulate_grads=*/true);
    if (!std::isfinite(result.loss))
      throw NumericError("non-finite loss on example " + example.source->id);
    loss_sum += result.loss;
    ++metrics.permutation_counts[assignment_key(result.assignment)];
  }

  const double batch_scale = 1.0 / static_cast<double>(batch.examples.size());
  optimizer.scale_grads(batch_scale);
  metrics.loss = loss_sum * batch_scale;
  metrics.lr = lr;
  metrics.grad_norm = optimizer.clip_global_norm(clip_norm);
  optimizer.step(lr);
  metrics.step = optimizer.step_count();
  return metrics;
}

template <typename T>
double evaluate_dev_wer(MsRnntModel<T>& model, const Corpus& corpus,
                        int max_symbols_per_frame) {
  std::vector<std::pair<std::string, std::vector<TokenSequence>>> refs, hyps;
  refs.reserve(corpus.examples.size());
  hyps.reserve(corpus.examples.size());
  auto stepper = model.make_stepper();
  for (const MixtureExample& example : corpus.examples) {
    const Matrix<T> features = matrix_cast<T>(example.features);
    const std::vector<Matrix<T>> branches = model.encode(features, nullptr);
    std::vector<TokenSequence> outputs;
    outputs.reserve(branches.size());
    for (const Matrix<T>& branch : branches) {
      outputs.push_back(
          greedy_decode(branch, *stepper, model.joint(), max_symbols_per_frame).tokens);
    }
    refs.emplace_back(example.id, example.refs);
    hyps.emplace_back(example.id, std::move(outputs));
  }
  return corpus_wer(refs, hyps).wer();
}

template <typename T>
TrainResult train_loop(MsRnntModel<T>& model, const Corpus* single_corpus,
                       const Corpus* multi_corpus, const Corpus* dev_corpus,
                       const TrainLoopOptions& options,
                       const std::function<void(const std::string&)>& metrics_sink) {
  options.schedule.validate();
  Rng root(options.seed);
  MultiStyleBatcher batcher(single_corpus, multi_corpus, options.mix_fraction,
                            model.num_speakers(), options.batch_size,
                            root.derive(0x6261746368ULL));  // "batch"
  AdamOptimizer<T> optimizer(options.adam, model.parameters());

  TrainResult result;
  result.best_params = model.to_checkpoint();  // fallback: the initialization
  double best_wer = std::numeric_limits<double>::infinity();

  for (std::int64_t step = 0; step < options.max_steps; ++step) {
    const double lr = lr_at(options.schedule, step);
    const TrainBatch batch = batcher.next();
    const StepMetrics metrics =
        train_step(model, batch, options.mode, optimizer, lr, options.clip_norm);
    if (metrics_sink) metrics_sink(format_metrics_line(metrics));
    result.steps_run = step + 1;

    const bool last_step = (step + 1 == options.max_steps);
    if (dev_corpus != nullptr && options.eval_every > 0 &&
        ((step + 1) % options.eval_every == 0 || last_step)) {
      const double wer =
          evaluate_dev_wer(model, *dev_corpus, options.max_symbols_per_frame);
      if (wer < best_wer) {
        best_wer = wer;
        result.best_dev_wer = wer;
        result.best_step = step + 1;
        result.best_params = model.to_checkpoint();
      }
    }
  }
  return result;
}

template StepMetrics train_step(MsRnntModel<float>&, const TrainBatch&, AssignmentMode,
                                AdamOptimizer<float>&, double, double);
template StepMetrics train_step(MsRnntModel<double>&, const TrainBatch&, AssignmentMode,
                                AdamOptimizer<double>&, double, double);
template double evaluate_dev_wer(MsRnntModel<float>&, const Corpus&, int);
template double evaluate_dev_wer(MsRnntModel<double>&, const Corpus&, int);
template TrainResult train_loop(MsRnntModel<float>&, const Corpus*, const Corpus*,
                                const Corpus*, const TrainLoopOptions&,
                                const std::function<void(const std::string&)>&);
template TrainResult train_loop(MsRnntModel<double>&, const Corpus*, const Corpus*,
                                const Corpus*, const TrainLoopOptions&,
                                const std::function<void(const std::string&)>&);

}  // namespace msrnnt
