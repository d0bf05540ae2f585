// Copyright 2026 The eonkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eonkit/oracles.hpp"

#include <cctype>

#include "eonkit/errors.hpp"

namespace eonkit {
namespace oracles {

double ClassScores::score(const std::string& label) const {
  const auto it = scores.find(label);
  if (it == scores.end()) {
    throw OracleError("ClassScores: unknown label '" + label + "'");
  }
  return it->second;
}

std::string ClassScores::argmax() const {
  if (scores.empty()) throw OracleError("ClassScores: empty score map");
  std::string best;
  double best_score = -1.0;
  // std::map iterates labels in lexicographic order, so keeping a strict
  // comparison implements the lexicographic tie break.
  for (const auto& [label, score] : scores) {
    if (score > best_score) {
      best_score = score;
      best = label;
    }
  }
  return best;
}

std::string TranscriptResult::joined() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::vector<std::string> normalize_transcript(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(current);
  return tokens;
}

}  // namespace oracles
}  // namespace eonkit
