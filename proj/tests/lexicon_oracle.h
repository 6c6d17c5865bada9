/* Copyright 2026 The lemon-ner Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Brute-force reference for Lexicon::match: tries every lexicon word at every
// position of the fragment and classifies each occurrence by where it sits.
#ifndef LEMON_TESTS_LEXICON_ORACLE_H_
#define LEMON_TESTS_LEXICON_ORACLE_H_

#include <algorithm>
#include <string>
#include <vector>

#include "lemon/lexicon.h"

namespace lemon::testing {

inline std::vector<LexiconMatch> brute_force_match(const Lexicon& lexicon,
                                                   const std::u32string& fragment) {
  std::vector<LexiconMatch> out;
  const std::size_t len = fragment.size();
  for (std::size_t id = 1; id < lexicon.table_rows(); ++id) {
    const std::u32string& w = lexicon.word(id);
    if (w.size() > len) continue;
    for (std::size_t p = 0; p + w.size() <= len; ++p) {
      if (fragment.compare(p, w.size(), w) != 0) continue;
      const bool at_start = p == 0;
      const bool at_end = p + w.size() == len;
      MatchMode mode;
      if (at_start && at_end) {
        mode = {MatchKind::kExact, len};
      } else if (at_start) {
        mode = {MatchKind::kPrefix, w.size()};
      } else if (at_end) {
        mode = {MatchKind::kSuffix, w.size()};
      } else {
        mode = {MatchKind::kInfix, w.size()};
      }
      LexiconMatch m{mode, id};
      if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lemon::testing

#endif  // LEMON_TESTS_LEXICON_ORACLE_H_
