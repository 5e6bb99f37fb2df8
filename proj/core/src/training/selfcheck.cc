// training/selfcheck.cc

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

#include "msrnnt/training/selfcheck.h"

#include <cmath>
#include <sstream>

#include "msrnnt/training/objectives.h"
#include "msrnnt/transducer/loss.h"

namespace msrnnt {

namespace {

Tensor3<double> random_normalized_log_probs(int frames, int rows, int outputs,
                                            Rng& rng) {
  Tensor3<double> lp(frames, rows, outputs);
  for (int t = 0; t < frames; ++t) {
    for (int u = 0; u < rows; ++u) {
      double* z = lp.at(t, u);
      double max = -1e30;
      for (int k = 0; k < outputs; ++k) {
        z[k] = rng.uniform(-2.0, 2.0);
        if (z[k] > max) max = z[k];
      }
      double sum = 0.0;
      for (int k = 0; k < outputs; ++k) sum += std::exp(z[k] - max);
      const double lse = max + std::log(sum);
      for (int k = 0; k < outputs; ++k) z[k] -= lse;
    }
  }
  return lp;
}

TokenSequence random_labels(int count, int vocab, Rng& rng) {
  TokenSequence labels(count);
  for (int& label : labels) label = rng.uniform_int(0, vocab - 1);
  return labels;
}

MsRnntConfig tiny_config(int num_speakers, bool order_labels) {
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

Matrix<double> random_features(int frames, int dim, Rng& rng) {
  Matrix<double> x(frames, dim);
  for (int t = 0; t < frames; ++t)
    for (int c = 0; c < dim; ++c) x(t, c) = rng.uniform(-1.0, 1.0);
  return x;
}

CheckResult check_oracle_equivalence(Rng& rng, bool inject_bug) {
  CheckResult result{"loss-oracle-equivalence", true, ""};
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int frames = rng.uniform_int(1, 4);
    const int labels_len = rng.uniform_int(0, 3);
    const int vocab = rng.uniform_int(1, 3);
    const Tensor3<double> lp =
        random_normalized_log_probs(frames, labels_len + 1, vocab + 1, rng);
    const TokenSequence labels = random_labels(labels_len, vocab, rng);
    double dp = transducer_loss(lp, labels).loss();
    if (inject_bug) dp += 1e-3;
    const double oracle = brute_force_loss(lp, labels);
    worst = std::max(worst, std::abs(dp - oracle));
  }
  std::ostringstream detail;
  detail << "max |dp - oracle| = " << worst << " over 50 instances";
  result.detail = detail.str();
  result.passed = worst <= 1e-6;
  return result;
}

CheckResult check_lattice_gradient(Rng& rng) {
  CheckResult result{"lattice-gradient", true, ""};
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const int frames = rng.uniform_int(2, 4);
    const int labels_len = rng.uniform_int(1, 3);
    const int vocab = 3;
    Tensor3<double> lp =
        random_normalized_log_probs(frames, labels_len + 1, vocab + 1, rng);
    const TokenSequence labels = random_labels(labels_len, vocab, rng);
    const Tensor3<double> grad = transducer_grad(transducer_loss(lp, labels));
    const double h = 1e-6;
    for (int probe = 0; probe < 20; ++probe) {
      const int t = rng.uniform_int(0, frames - 1);
      const int u = rng.uniform_int(0, labels_len);
      const int k = rng.uniform_int(0, vocab);
      const double saved = lp(t, u, k);
      lp(t, u, k) = saved + h;
      const double up = transducer_loss(lp, labels).loss();
      lp(t, u, k) = saved - h;
      const double down = transducer_loss(lp, labels).loss();
      lp(t, u, k) = saved;
      const double fd = (up - down) / (2.0 * h);
      const double rel = std::abs(fd - grad(t, u, k)) /
                         std::max({std::abs(fd), std::abs(grad(t, u, k)), 1e-4});
      worst = std::max(worst, rel);
    }
  }
  std::ostringstream detail;
  detail << "max relative error = " << worst;
  result.detail = detail.str();
  result.passed = worst <= 1e-4;
  return result;
}

CheckResult check_model_gradient(Rng& rng) {
  CheckResult result{"model-gradient", true, ""};
  double worst = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    MsRnntModel<double> model(tiny_config(2, trial % 2 == 1));
    model.init(rng);
    const Matrix<double> x = random_features(6, 3, rng);
    const std::vector<TokenSequence> targets = {random_labels(2, 3, rng),
                                                random_labels(1, 3, rng)};
    for (Parameter<double>* p : model.parameters()) p->zero_grad();
    example_loss(model, x, targets, AssignmentMode::kDat, /*accumulate_grads=*/true);

    std::vector<Parameter<double>*> params = model.parameters();
    const double h = 1e-5;
    for (int probe = 0; probe < 12; ++probe) {
      Parameter<double>* p = params[rng.uniform_int(0, static_cast<int>(params.size()) - 1)];
      const int idx = rng.uniform_int(0, static_cast<int>(p->value.size()) - 1);
      const double saved = p->value.data()[idx];
      p->value.data()[idx] = saved + h;
      const double up = dat_loss(model, x, targets);
      p->value.data()[idx] = saved - h;
      const double down = dat_loss(model, x, targets);
      p->value.data()[idx] = saved;
      const double fd = (up - down) / (2.0 * h);
      const double analytic = p->grad.data()[idx];
      const double rel = std::abs(fd - analytic) /
                         std::max({std::abs(fd), std::abs(analytic), 1e-4});
      worst = std::max(worst, rel);
    }
  }
  std::ostringstream detail;
  detail << "max relative error = " << worst;
  result.detail = detail.str();
  result.passed = worst <= 1e-4;
  return result;
}

CheckResult check_pit_vs_dat(Rng& rng) {
  CheckResult result{"pit-not-above-dat", true, ""};
  for (int trial = 0; trial < 20 && result.passed; ++trial) {
    MsRnntModel<double> model(tiny_config(2, false));
    model.init(rng);
    const Matrix<double> x = random_features(6, 3, rng);
    const std::vector<TokenSequence> targets = {
        random_labels(rng.uniform_int(0, 3), 3, rng),
        random_labels(rng.uniform_int(0, 3), 3, rng)};
    const double dat = dat_loss(model, x, targets);
    const auto [pit, perm] = pit_loss(model, x, targets);
    if (pit > dat) {
      result.passed = false;
      std::ostringstream detail;
      detail << "pit " << pit << " > dat " << dat << " at trial " << trial;
      result.detail = detail.str();
    }
  }
  if (result.passed) result.detail = "pit <= dat on 20 random instances";
  return result;
}

CheckResult check_decoder_causality(Rng& rng) {
  CheckResult result{"decoder-causality", true, ""};
  for (int trial = 0; trial < 10 && result.passed; ++trial) {
    MsRnntModel<double> model(tiny_config(1, false));
    model.init(rng);
    const int frames = rng.uniform_int(4, 10);
    const Matrix<double> x = random_features(frames, 3, rng);
    auto stepper = model.make_stepper();
    const Matrix<double> full_enc = model.encode(x, nullptr)[0];
    const Hypothesis full = greedy_decode(full_enc, *stepper, model.joint());

    const int prefix_frames = rng.uniform_int(1, frames);
    Matrix<double> prefix(prefix_frames, 3);
    for (int t = 0; t < prefix_frames; ++t)
      for (int c = 0; c < 3; ++c) prefix(t, c) = x(t, c);
    const Matrix<double> prefix_enc = model.encode(prefix, nullptr)[0];
    const Hypothesis head = greedy_decode(prefix_enc, *stepper, model.joint());

    // The prefix decode must reproduce exactly the full decode's emissions
    // at frames below the prefix horizon; the greedy decisions coincide
    // frame by frame because the encoder is causal.
    const int horizon = prefix_enc.rows();
    std::size_t expected = 0;
    while (expected < full.tokens.size() && full.frames[expected] < horizon) ++expected;
    bool ok = head.tokens.size() == expected;
    for (std::size_t i = 0; ok && i < expected; ++i)
      ok = head.tokens[i] == full.tokens[i] && head.frames[i] == full.frames[i];
    if (!ok) {
      result.passed = false;
      std::ostringstream detail;
      detail << "prefix decode diverged at trial " << trial;
      result.detail = detail.str();
    }
  }
  if (result.passed) result.detail = "prefix property held on 10 random pairs";
  return result;
}

}  // namespace

std::vector<CheckResult> run_selfcheck(const SelfcheckOptions& options) {
  Rng root(options.seed);
  std::vector<CheckResult> results;
  {
    Rng rng = root.derive(1);
    results.push_back(check_oracle_equivalence(rng, options.inject_lattice_bug));
  }
  {
    Rng rng = root.derive(2);
    results.push_back(check_lattice_gradient(rng));
  }
  {
    Rng rng = root.derive(3);
    results.push_back(check_model_gradient(rng));
  }
  {
    Rng rng = root.derive(4);
    results.push_back(check_pit_vs_dat(rng));
  }
  {
    Rng rng = root.derive(5);
    results.push_back(check_decoder_causality(rng));
  }
  return results;
}

}  // namespace msrnnt
