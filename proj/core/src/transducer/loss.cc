// transducer/loss.cc

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

#include "msrnnt/transducer/loss.h"

#include <cmath>
#include <vector>

#include "msrnnt/numerics/logmath.h"

namespace msrnnt {

namespace {

template <typename T>
void check_labels(const TokenSequence& labels, int blank_id, int num_outputs) {
  for (int label : labels) {
    MSRNNT_CHECK(label != blank_id, "blank in reference");
    MSRNNT_CHECK(label >= 0 && label < num_outputs - 1,
                 "label " << label << " out of vocabulary range");
  }
}

}  // namespace

template <typename T>
LossLattice<T> transducer_loss(Tensor3<T> log_probs, TokenSequence labels) {
  const int frames = log_probs.dim0();
  const int rows = log_probs.dim1();
  const int num_outputs = log_probs.dim2();
  const int num_labels = static_cast<int>(labels.size());
  MSRNNT_SHAPE_CHECK(frames >= 1, "transducer loss needs at least one frame");
  MSRNNT_SHAPE_CHECK(rows == num_labels + 1,
                     "lattice has " << rows << " label rows, expected "
                                    << num_labels + 1);
  MSRNNT_SHAPE_CHECK(num_outputs >= 2, "need at least one symbol plus blank");
  const int blank = num_outputs - 1;
  check_labels<T>(labels, blank, num_outputs);

  LossLattice<T> lattice;
  lattice.alpha = Matrix<T>(frames, rows);
  lattice.beta = Matrix<T>(frames, rows);

  Matrix<T>& alpha = lattice.alpha;
  alpha.fill(kLogZero<T>);
  alpha(0, 0) = T(0);
  for (int t = 0; t < frames; ++t) {
    for (int u = 0; u < rows; ++u) {
      T acc = (t == 0 && u == 0) ? T(0) : kLogZero<T>;
      if (t > 0) acc = log_add(acc, alpha(t - 1, u) + log_probs(t - 1, u, blank));
      if (u > 0) acc = log_add(acc, alpha(t, u - 1) + log_probs(t, u - 1, labels[u - 1]));
      alpha(t, u) = acc;
    }
  }

  Matrix<T>& beta = lattice.beta;
  beta.fill(kLogZero<T>);
  for (int t = frames - 1; t >= 0; --t) {
    for (int u = rows - 1; u >= 0; --u) {
      T acc = kLogZero<T>;
      if (t == frames - 1 && u == rows - 1) {
        acc = log_probs(t, u, blank);  // final blank leaves the lattice
      } else {
        if (t + 1 < frames) acc = log_add(acc, beta(t + 1, u) + log_probs(t, u, blank));
        if (u + 1 < rows) acc = log_add(acc, beta(t, u + 1) + log_probs(t, u, labels[u]));
      }
      beta(t, u) = acc;
    }
  }

  lattice.log_likelihood = alpha(frames - 1, rows - 1) +
                           log_probs(frames - 1, rows - 1, blank);
  lattice.log_probs = std::move(log_probs);
  lattice.labels = std::move(labels);
  return lattice;
}

template <typename T>
T brute_force_loss(const Tensor3<T>& log_probs, const TokenSequence& labels) {
  const int frames = log_probs.dim0();
  const int num_outputs = log_probs.dim2();
  const int num_labels = static_cast<int>(labels.size());
  MSRNNT_SHAPE_CHECK(log_probs.dim1() == num_labels + 1,
                     "lattice rows do not match label count");
  MSRNNT_CHECK(frames + num_labels <= 14, "oracle limit exceeded");
  const int blank = num_outputs - 1;
  check_labels<T>(labels, blank, num_outputs);

  // Depth-first over the (t, u) grid accumulating each path's log score;
  // paths end with the final blank taken from (frames-1, num_labels).
  std::vector<T> path_scores;
  struct Frame {
    int t, u;
    T score;
  };
  std::vector<Frame> stack;
  stack.push_back({0, 0, T(0)});
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.t == frames - 1 && f.u == num_labels) {
      path_scores.push_back(f.score + log_probs(f.t, f.u, blank));
      continue;
    }
    if (f.t + 1 < frames)
      stack.push_back({f.t + 1, f.u, f.score + log_probs(f.t, f.u, blank)});
    if (f.u < num_labels)
      stack.push_back({f.t, f.u + 1, f.score + log_probs(f.t, f.u, labels[f.u])});
  }
  return -log_sum_exp<T>(path_scores);
}

template <typename T>
Tensor3<T> transducer_grad(const LossLattice<T>& lattice) {
  const int frames = lattice.frames();
  const int rows = lattice.label_len() + 1;
  const int blank = lattice.blank_id();
  MSRNNT_CHECK(lattice.alpha.rows() == frames && lattice.beta.rows() == frames,
               "lattice not fully populated");

  // dL/d lp[t][u][k] = -P(paths using the edge (t,u) --k--> next) / P(y),
  // i.e. minus the normalized edge occupancy. Only blank edges and the
  // next-label edge exist.
  Tensor3<T> grad(frames, rows, lattice.num_outputs());
  const T log_like = lattice.log_likelihood;
  for (int t = 0; t < frames; ++t) {
    for (int u = 0; u < rows; ++u) {
      const T a = lattice.alpha(t, u);
      if (a == kLogZero<T>) continue;
      // Blank edge: to (t+1, u), or out of the lattice from the final node.
      T blank_tail = kLogZero<T>;
      if (t + 1 < frames) {
        blank_tail = lattice.beta(t + 1, u);
      } else if (u == rows - 1) {
        blank_tail = T(0);
      }
      if (blank_tail != kLogZero<T>) {
        grad(t, u, blank) =
            -std::exp(a + lattice.log_probs(t, u, blank) + blank_tail - log_like);
      }
      // Label edge: to (t, u+1).
      if (u + 1 < rows) {
        const int label = lattice.labels[u];
        grad(t, u, label) = -std::exp(a + lattice.log_probs(t, u, label) +
                                      lattice.beta(t, u + 1) - log_like);
      }
    }
  }
  return grad;
}

template <typename T>
void validate_lattice(const LossLattice<T>& lattice, double tol) {
  const int frames = lattice.frames();
  const int rows = lattice.label_len() + 1;
  for (int t = 0; t < frames; ++t) {
    for (int u = 0; u < rows; ++u) {
      const T node_lse = log_sum_exp<T>(std::span<const T>(
          lattice.log_probs.at(t, u), static_cast<std::size_t>(lattice.num_outputs())));
      MSRNNT_CHECK_AS(std::abs(static_cast<double>(node_lse)) <= tol, NumericError,
                      "node (" << t << "," << u << ") not normalized: lse=" << node_lse);
    }
  }
  MSRNNT_CHECK_AS(lattice.alpha(0, 0) == T(0), NumericError, "alpha[0][0] != 0");
  // Every path crosses each anti-diagonal t+u = d exactly once, so the
  // log-sum of alpha+beta along it reproduces the log-likelihood.
  for (int d = 0; d <= frames - 1 + rows - 1; ++d) {
    std::vector<T> terms;
    for (int t = 0; t < frames; ++t) {
      const int u = d - t;
      if (u < 0 || u >= rows) continue;
      const T s = lattice.alpha(t, u) + lattice.beta(t, u);
      MSRNNT_CHECK_AS(s <= lattice.log_likelihood + static_cast<T>(tol), NumericError,
                      "alpha+beta exceeds log-likelihood at (" << t << "," << u << ")");
      terms.push_back(s);
    }
    const T lse = log_sum_exp<T>(std::span<const T>(terms));
    MSRNNT_CHECK_AS(std::abs(static_cast<double>(lse - lattice.log_likelihood)) <= tol,
                    NumericError,
                    "anti-diagonal " << d << " inconsistent: " << lse << " vs "
                                     << lattice.log_likelihood);
  }
}

template LossLattice<float> transducer_loss(Tensor3<float>, TokenSequence);
template LossLattice<double> transducer_loss(Tensor3<double>, TokenSequence);
template float brute_force_loss(const Tensor3<float>&, const TokenSequence&);
template double brute_force_loss(const Tensor3<double>&, const TokenSequence&);
template Tensor3<float> transducer_grad(const LossLattice<float>&);
template Tensor3<double> transducer_grad(const LossLattice<double>&);
template void validate_lattice(const LossLattice<float>&, double);
template void validate_lattice(const LossLattice<double>&, double);

}  // namespace msrnnt
