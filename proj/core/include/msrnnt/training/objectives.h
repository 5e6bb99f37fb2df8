// training/objectives.h

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

#ifndef MSRNNT_TRAINING_OBJECTIVES_H_
#define MSRNNT_TRAINING_OBJECTIVES_H_

#include <vector>

#include "msrnnt/model/ms_rnnt.h"

namespace msrnnt {

// Output-to-target pairing rule. kDat pins branch s to target s (targets
// ordered by speech onset); kPit picks the permutation with the lowest total
// loss per utterance, ties resolved to the identity.
enum class AssignmentMode { kDat, kPit };

struct ExampleLoss {
  double loss = 0.0;               // sum over speaker slots
  std::vector<int> assignment;     // branch s was paired with targets[assignment[s]]
};

// Forward (and optionally backward) pass of one example under either
// objective. targets must have exactly num_speakers entries; empty targets
// supervise their branch toward emitting only blanks. With accumulate_grads
// the parameter gradients of the winning pairing are added to model.grad
// buffers (PIT gradients flow only through the winning permutation).
template <typename T>
ExampleLoss example_loss(MsRnntModel<T>& model, const Matrix<T>& features,
                         const std::vector<TokenSequence>& targets,
                         AssignmentMode mode, bool accumulate_grads);

// Total loss under the onset-order identity assignment. targets[0] belongs
// to the first-speaking speaker.
template <typename T>
double dat_loss(MsRnntModel<T>& model, const Matrix<T>& features,
                const std::vector<TokenSequence>& targets);

// Minimum over all speaker permutations of the summed branch losses; returns
// the loss and the best permutation (assignment[s] = target index of branch s).
template <typename T>
std::pair<double, std::vector<int>> pit_loss(MsRnntModel<T>& model,
                                             const Matrix<T>& features,
                                             const std::vector<TokenSequence>& targets);

// Transducer loss of one branch against the empty target (U = 0): the branch
// is trained to emit blanks only. Equals transducer_loss(log_probs, {}).
template <typename T>
double empty_target_loss(const Tensor3<T>& branch_log_probs);

}  // namespace msrnnt

#endif  // MSRNNT_TRAINING_OBJECTIVES_H_
