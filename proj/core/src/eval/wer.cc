// eval/wer.cc

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

#include "msrnnt/eval/wer.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <set>

#include "msrnnt/common/check.h"

namespace msrnnt {

double UtteranceScore::wer() const {
  if (ref_len == 0) return counts.total() == 0 ? 0.0 : 1.0;
  return static_cast<double>(counts.total()) / ref_len;
}

double WerReport::wer() const {
  if (ref_len_total == 0) return totals.total() == 0 ? 0.0 : 1.0;
  return static_cast<double>(totals.total()) / static_cast<double>(ref_len_total);
}

UtteranceScore permutation_wer(const std::vector<TokenSequence>& refs,
                               const std::vector<TokenSequence>& hyps) {
  MSRNNT_CHECK(!refs.empty() || !hyps.empty(), "nothing to score");
  const int slots = static_cast<int>(std::max(refs.size(), hyps.size()));

  std::vector<TokenSequence> padded_refs = refs;
  padded_refs.resize(slots);  // extra slots are empty references
  std::vector<TokenSequence> padded_hyps = hyps;
  padded_hyps.resize(slots);  // extra slots are empty hypotheses

  // Pairwise counts once; assignments reuse them.
  std::vector<std::vector<EditCounts>> pair(slots, std::vector<EditCounts>(slots));
  for (int k = 0; k < slots; ++k)
    for (int r = 0; r < slots; ++r)
      pair[k][r] = edit_distance(padded_refs[r], padded_hyps[k]);

  std::vector<int> assignment(slots);
  std::iota(assignment.begin(), assignment.end(), 0);
  std::vector<int> best = assignment;
  int best_total = -1;
  do {
    int total = 0;
    for (int k = 0; k < slots; ++k) total += pair[k][assignment[k]].total();
    if (best_total < 0 || total < best_total) {
      best_total = total;
      best = assignment;
    }
    // next_permutation walks lexicographically, so ties keep the smallest.
  } while (std::next_permutation(assignment.begin(), assignment.end()));

  UtteranceScore score;
  score.assignment = best;
  score.pair_counts.resize(slots);
  for (int k = 0; k < slots; ++k) {
    score.pair_counts[k] = pair[k][best[k]];
    score.counts += pair[k][best[k]];
  }
  for (const TokenSequence& r : refs) score.ref_len += static_cast<int>(r.size());
  return score;
}

WerReport corpus_wer(
    const std::vector<std::pair<std::string, std::vector<TokenSequence>>>& refs,
    const std::vector<std::pair<std::string, std::vector<TokenSequence>>>& hyps) {
  std::map<std::string, const std::vector<TokenSequence>*> hyp_index;
  for (const auto& [id, sequences] : hyps) hyp_index[id] = &sequences;

  std::set<std::string> ref_ids;
  std::string missing;
  for (const auto& [id, sequences] : refs) {
    ref_ids.insert(id);
    if (hyp_index.find(id) == hyp_index.end()) missing += " " + id;
  }
  MSRNNT_CHECK(missing.empty(), "ids missing from hypotheses:" << missing);
  for (const auto& [id, sequences] : hyps)
    if (ref_ids.find(id) == ref_ids.end()) missing += " " + id;
  MSRNNT_CHECK(missing.empty(), "ids missing from references:" << missing);

  WerReport report;
  report.utterances.reserve(refs.size());
  for (const auto& [id, sequences] : refs) {
    UtteranceScore score = permutation_wer(sequences, *hyp_index.at(id));
    score.id = id;
    report.totals += score.counts;
    report.ref_len_total += score.ref_len;
    report.utterances.push_back(std::move(score));
  }
  return report;
}

void write_wer_report(const WerReport& report, std::ostream& os) {
  os << "id\tassignment\tsub\tins\tdel\tref_len\twer\n";
  char wer_buf[32];
  for (const UtteranceScore& u : report.utterances) {
    std::string assignment;
    for (std::size_t k = 0; k < u.assignment.size(); ++k) {
      if (k > 0) assignment += ",";
      assignment += std::to_string(u.assignment[k]);
    }
    std::snprintf(wer_buf, sizeof(wer_buf), "%.6f", u.wer());
    os << u.id << '\t' << assignment << '\t' << u.counts.sub << '\t' << u.counts.ins
       << '\t' << u.counts.del << '\t' << u.ref_len << '\t' << wer_buf << '\n';
  }
  std::snprintf(wer_buf, sizeof(wer_buf), "%.6f", report.wer());
  os << "SUMMARY\t-\t" << report.totals.sub << '\t' << report.totals.ins << '\t'
     << report.totals.del << '\t' << report.ref_len_total << '\t' << wer_buf << '\n';
}

}  // namespace msrnnt
