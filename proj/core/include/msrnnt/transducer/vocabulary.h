// transducer/vocabulary.h

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

#ifndef MSRNNT_TRANSDUCER_VOCABULARY_H_
#define MSRNNT_TRANSDUCER_VOCABULARY_H_

#include <string>
#include <unordered_map>
#include <vector>

namespace msrnnt {

// Label indices over the non-blank vocabulary. Blank never appears in a
// TokenSequence; it exists only as the extra joint-network output.
using TokenSequence = std::vector<int>;

// Ordered non-blank symbols; blank is the implicit last output index V.
class Vocabulary {
 public:
  explicit Vocabulary(std::vector<std::string> symbols);

  int size() const { return static_cast<int>(symbols_.size()); }  // V
  int blank_id() const { return size(); }
  int num_outputs() const { return size() + 1; }  // V + 1 including blank

  const std::string& symbol(int id) const;
  int index_of(const std::string& symbol) const;  // throws on unknown symbol
  const std::vector<std::string>& symbols() const { return symbols_; }

  // First `count` lowercase letters as single-character symbols.
  static Vocabulary characters(int count);

  std::string to_string(const TokenSequence& tokens) const;  // space-joined
  TokenSequence from_string(const std::string& text) const;

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace msrnnt

#endif  // MSRNNT_TRANSDUCER_VOCABULARY_H_
