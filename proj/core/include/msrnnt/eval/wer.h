// eval/wer.h

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

#ifndef MSRNNT_EVAL_WER_H_
#define MSRNNT_EVAL_WER_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "msrnnt/eval/edit_distance.h"

namespace msrnnt {

// Scoring result of one utterance under the optimal output-to-reference
// assignment. assignment[k] is the (padded) reference index paired with
// hypothesis slot k; ref_len counts true reference tokens only.
struct UtteranceScore {
  std::string id;
  std::vector<int> assignment;
  std::vector<EditCounts> pair_counts;  // per hypothesis slot
  EditCounts counts;
  int ref_len = 0;

  double wer() const;
};

struct WerReport {
  std::vector<UtteranceScore> utterances;
  EditCounts totals;
  long long ref_len_total = 0;

  // Micro-average: one division by the summed reference lengths.
  double wer() const;
};

// Scores K hypotheses against S references under the best assignment.
// If K < S the hypothesis list is padded with empty sequences (a baseline
// single-output model scored against a 2-speaker reference accrues the
// missing speaker's tokens as deletions); if K > S the references are padded
// with empty sequences so spurious outputs count as insertions. All
// assignments between the padded lists are enumerated and the minimal total
// distance wins; ties go to the lexicographically smallest assignment.
UtteranceScore permutation_wer(const std::vector<TokenSequence>& refs,
                               const std::vector<TokenSequence>& hyps);

// Scores id-aligned corpora. refs/hyps are (id, sequences) pairs; every ref
// id must appear in hyps and vice versa, otherwise the error lists the
// missing ids. Utterances are scored in refs order.
WerReport corpus_wer(
    const std::vector<std::pair<std::string, std::vector<TokenSequence>>>& refs,
    const std::vector<std::pair<std::string, std::vector<TokenSequence>>>& hyps);

// Stable tab-separated report: one row per utterance
// (id, assignment, sub, ins, del, ref_len, wer) and a SUMMARY row.
void write_wer_report(const WerReport& report, std::ostream& os);

}  // namespace msrnnt

#endif  // MSRNNT_EVAL_WER_H_
