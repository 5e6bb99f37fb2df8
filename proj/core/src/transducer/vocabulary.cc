// transducer/vocabulary.cc

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

#include "msrnnt/transducer/vocabulary.h"

#include <sstream>

#include "msrnnt/common/check.h"

namespace msrnnt {

Vocabulary::Vocabulary(std::vector<std::string> symbols)
    : symbols_(std::move(symbols)) {
  MSRNNT_CHECK(!symbols_.empty(), "vocabulary needs at least one symbol");
  for (int i = 0; i < static_cast<int>(symbols_.size()); ++i) {
    MSRNNT_CHECK(!symbols_[i].empty(), "vocabulary symbol " << i << " is empty");
    const bool inserted = index_.emplace(symbols_[i], i).second;
    MSRNNT_CHECK(inserted, "duplicate vocabulary symbol '" << symbols_[i] << "'");
  }
}

const std::string& Vocabulary::symbol(int id) const {
  MSRNNT_CHECK(id >= 0 && id < size(), "symbol id " << id << " out of range");
  return symbols_[id];
}

int Vocabulary::index_of(const std::string& symbol) const {
  auto it = index_.find(symbol);
  MSRNNT_CHECK(it != index_.end(), "unknown vocabulary symbol '" << symbol << "'");
  return it->second;
}

Vocabulary Vocabulary::characters(int count) {
  MSRNNT_CHECK(count >= 1 && count <= 26, "character vocabulary size must be in [1,26]");
  std::vector<std::string> symbols;
  symbols.reserve(count);
  for (int i = 0; i < count; ++i) symbols.emplace_back(1, static_cast<char>('a' + i));
  return Vocabulary(std::move(symbols));
}

std::string Vocabulary::to_string(const TokenSequence& tokens) const {
  std::ostringstream os;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) os << ' ';
    os << symbol(tokens[i]);
  }
  return os.str();
}

TokenSequence Vocabulary::from_string(const std::string& text) const {
  TokenSequence tokens;
  std::istringstream is(text);
  std::string sym;
  while (is >> sym) tokens.push_back(index_of(sym));
  return tokens;
}

}  // namespace msrnnt
