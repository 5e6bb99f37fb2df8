// training/objectives.cc

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

#include "msrnnt/training/objectives.h"

#include <algorithm>
#include <limits>
#include <numeric>

#include "msrnnt/transducer/loss.h"

namespace msrnnt {

template <typename T>
ExampleLoss example_loss(MsRnntModel<T>& model, const Matrix<T>& features,
                         const std::vector<TokenSequence>& targets,
                         AssignmentMode mode, bool accumulate_grads) {
  const int S = model.num_speakers();
  MSRNNT_CHECK(static_cast<int>(targets.size()) == S,
               "expected " << S << " targets, got " << targets.size());

  EncodeTape<T> enc_tape;
  const std::vector<Matrix<T>> branches =
      model.encode(features, accumulate_grads ? &enc_tape : nullptr);

  std::vector<PredictionTape<T>> pred_tapes(S);
  std::vector<Matrix<T>> preds(S);
  for (int j = 0; j < S; ++j)
    preds[j] = model.prediction_features(targets[j],
                                         accumulate_grads ? &pred_tapes[j] : nullptr);

  // Pairwise lattices: the identity diagonal for DAT, all S x S for PIT.
  std::vector<std::vector<LossLattice<T>>> lattices(S);
  std::vector<std::vector<JointTape<T>>> joint_tapes(S);
  for (int s = 0; s < S; ++s) {
    lattices[s].resize(S);
    joint_tapes[s].resize(S);
    for (int j = 0; j < S; ++j) {
      if (mode == AssignmentMode::kDat && j != s) continue;
      Tensor3<T> log_probs = model.joint().log_probs(
          branches[s], preds[j], accumulate_grads ? &joint_tapes[s][j] : nullptr);
      lattices[s][j] = transducer_loss(std::move(log_probs), targets[j]);
    }
  }

  ExampleLoss result;
  result.assignment.resize(S);
  std::iota(result.assignment.begin(), result.assignment.end(), 0);
  if (mode == AssignmentMode::kPit) {
    std::vector<int> perm = result.assignment;
    double best = std::numeric_limits<double>::infinity();
    do {
      double total = 0.0;
      for (int s = 0; s < S; ++s)
        total += static_cast<double>(lattices[s][perm[s]].loss());
      // Strict < with lexicographic enumeration: identity wins ties.
      if (total < best) {
        best = total;
        result.assignment = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    result.loss = best;
  } else {
    double total = 0.0;
    for (int s = 0; s < S; ++s) total += static_cast<double>(lattices[s][s].loss());
    result.loss = total;
  }

  if (accumulate_grads) {
    const int enc_frames = branches[0].rows();
    std::vector<Matrix<T>> d_branches;
    d_branches.reserve(S);
    for (int s = 0; s < S; ++s)
      d_branches.emplace_back(enc_frames, branches[s].cols());
    std::vector<Matrix<T>> d_preds;
    d_preds.reserve(S);
    for (int j = 0; j < S; ++j) d_preds.emplace_back(preds[j].rows(), preds[j].cols());

    for (int s = 0; s < S; ++s) {
      const int j = result.assignment[s];
      const LossLattice<T>& lattice = lattices[s][j];
      const Tensor3<T> d_log_probs = transducer_grad(lattice);
      model.joint().backward(joint_tapes[s][j], lattice.log_probs, d_log_probs,
                             &d_branches[s], &d_preds[j]);
    }
    model.encode_backward(enc_tape, d_branches);
    for (int j = 0; j < S; ++j) model.prediction_backward(pred_tapes[j], d_preds[j]);
  }
  return result;
}

template <typename T>
double dat_loss(MsRnntModel<T>& model, const Matrix<T>& features,
                const std::vector<TokenSequence>& targets) {
  return example_loss(model, features, targets, AssignmentMode::kDat,
                      /*accumulate_grads=*/false)
      .loss;
}

template <typename T>
std::pair<double, std::vector<int>> pit_loss(MsRnntModel<T>& model,
                                             const Matrix<T>& features,
                                             const std::vector<TokenSequence>& targets) {
  ExampleLoss result = example_loss(model, features, targets, AssignmentMode::kPit,
                                    /*accumulate_grads=*/false);
  return {result.loss, std::move(result.assignment)};
}

template <typename T>
double empty_target_loss(const Tensor3<T>& branch_log_probs) {
  return static_cast<double>(transducer_loss(branch_log_probs, TokenSequence{}).loss());
}

template ExampleLoss example_loss(MsRnntModel<float>&, const Matrix<float>&,
                                  const std::vector<TokenSequence>&, AssignmentMode, bool);
template ExampleLoss example_loss(MsRnntModel<double>&, const Matrix<double>&,
                                  const std::vector<TokenSequence>&, AssignmentMode, bool);
template double dat_loss(MsRnntModel<float>&, const Matrix<float>&,
                         const std::vector<TokenSequence>&);
template double dat_loss(MsRnntModel<double>&, const Matrix<double>&,
                         const std::vector<TokenSequence>&);
template std::pair<double, std::vector<int>> pit_loss(MsRnntModel<float>&,
                                                      const Matrix<float>&,
                                                      const std::vector<TokenSequence>&);
template std::pair<double, std::vector<int>> pit_loss(MsRnntModel<double>&,
                                                      const Matrix<double>&,
                                                      const std::vector<TokenSequence>&);
template double empty_target_loss(const Tensor3<float>&);
template double empty_target_loss(const Tensor3<double>&);

}  // namespace msrnnt
