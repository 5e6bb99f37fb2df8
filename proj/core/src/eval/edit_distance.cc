// eval/edit_distance.cc

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

#include "msrnnt/eval/edit_distance.h"

#include "msrnnt/common/matrix.h"

namespace msrnnt {

bool operator==(const EditCounts& a, const EditCounts& b) {
  return a.sub == b.sub && a.ins == b.ins && a.del == b.del;
}

EditCounts edit_distance(const TokenSequence& ref, const TokenSequence& hyp) {
  const int nr = static_cast<int>(ref.size());
  const int nh = static_cast<int>(hyp.size());
  // d(i, j) = distance between ref[0..i) and hyp[0..j).
  Matrix<int> d(nr + 1, nh + 1);
  for (int i = 0; i <= nr; ++i) d(i, 0) = i;
  for (int j = 0; j <= nh; ++j) d(0, j) = j;
  for (int i = 1; i <= nr; ++i) {
    for (int j = 1; j <= nh; ++j) {
      const int match = d(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      const int insertion = d(i, j - 1) + 1;
      const int deletion = d(i - 1, j) + 1;
      d(i, j) = std::min(match, std::min(insertion, deletion));
    }
  }

  // Backtrace, preferring substitution/match over insertion over deletion.
  EditCounts counts;
  int i = nr, j = nh;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 &&
        d(i, j) == d(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1)) {
      if (ref[i - 1] != hyp[j - 1]) ++counts.sub;
      --i;
      --j;
    } else if (j > 0 && d(i, j) == d(i, j - 1) + 1) {
      ++counts.ins;
      --j;
    } else {
      ++counts.del;
      --i;
    }
  }
  return counts;
}

}  // namespace msrnnt
