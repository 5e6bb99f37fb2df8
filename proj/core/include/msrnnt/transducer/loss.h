// transducer/loss.h

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

#ifndef MSRNNT_TRANSDUCER_LOSS_H_
#define MSRNNT_TRANSDUCER_LOSS_H_

#include "msrnnt/common/matrix.h"
#include "msrnnt/transducer/vocabulary.h"

namespace msrnnt {

// Alignment lattice of one (encoder output, label sequence) pair.
//
// log_probs[t][u][k] is the log-probability of emitting symbol k at frame t
// after the first u labels; each node's distribution over the V+1 symbols is
// normalized. Blank is the last symbol index. alpha/beta are the
// forward/backward log-variables over the T x (U+1) grid:
//   alpha[t][u] = log P(emitting y_1..y_u and advancing to frame t)
//   beta[t][u]  = log P(emitting y_{u+1}..y_U and the final blank from (t,u))
// log_likelihood = alpha[T-1][U] + log_probs[T-1][U][blank] = beta[0][0].
template <typename T>
struct LossLattice {
  Tensor3<T> log_probs;  // T x (U+1) x (V+1)
  TokenSequence labels;  // length U, no blanks
  Matrix<T> alpha;       // T x (U+1)
  Matrix<T> beta;        // T x (U+1)
  T log_likelihood = T(0);

  T loss() const { return -log_likelihood; }
  int frames() const { return log_probs.dim0(); }
  int label_len() const { return static_cast<int>(labels.size()); }
  int num_outputs() const { return log_probs.dim2(); }
  int blank_id() const { return log_probs.dim2() - 1; }
};

// Exact negative log-likelihood over all monotone blank/label alignments,
// computed by the forward-backward recursion in log space:
//   alpha[t][u] = logadd(alpha[t-1][u] + lp[t-1][u][blank],
//                        alpha[t][u-1] + lp[t][u-1][y_u])
// Throws if any label equals blank. T >= 1 required; U is uncapped.
template <typename T>
LossLattice<T> transducer_loss(Tensor3<T> log_probs, TokenSequence labels);

// Enumeration oracle: sums the C(T-1+U, U) monotone paths (each ending with
// the final blank from (T-1, U)) explicitly and returns the negative log of
// the total. Requires T + U <= 14; throws "oracle limit exceeded" beyond.
// Kept deliberately independent of the dynamic-programming path above.
template <typename T>
T brute_force_loss(const Tensor3<T>& log_probs, const TokenSequence& labels);

// d loss / d log_probs with log_probs treated as free inputs: only blank and
// next-label entries on reachable nodes get non-zero gradient (edge
// occupancies); everything else is exactly zero. The log-softmax coupling to
// the remaining symbols belongs to the joint network's backward pass.
template <typename T>
Tensor3<T> transducer_grad(const LossLattice<T>& lattice);

// Checks the lattice invariants (per-node normalization, alpha[0][0] = 0,
// alpha/beta anti-diagonal consistency) within `tol`; throws on violation.
template <typename T>
void validate_lattice(const LossLattice<T>& lattice, double tol);

}  // namespace msrnnt

#endif  // MSRNNT_TRANSDUCER_LOSS_H_
