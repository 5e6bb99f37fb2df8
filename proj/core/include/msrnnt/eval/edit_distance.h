// eval/edit_distance.h

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

#ifndef MSRNNT_EVAL_EDIT_DISTANCE_H_
#define MSRNNT_EVAL_EDIT_DISTANCE_H_

#include "msrnnt/transducer/vocabulary.h"

namespace msrnnt {

struct EditCounts {
  int sub = 0;
  int ins = 0;
  int del = 0;

  int total() const { return sub + ins + del; }
  EditCounts& operator+=(const EditCounts& other) {
    sub += other.sub;
    ins += other.ins;
    del += other.del;
    return *this;
  }
};

bool operator==(const EditCounts& a, const EditCounts& b);

// Levenshtein alignment with unit costs. sub + ins + del equals the edit
// distance; the backtrace breaks ties preferring substitution over insertion
// over deletion, so the count decomposition is deterministic.
EditCounts edit_distance(const TokenSequence& ref, const TokenSequence& hyp);

}  // namespace msrnnt

#endif  // MSRNNT_EVAL_EDIT_DISTANCE_H_
