// Copyright 2026 The seqlab Authors.
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

// Byte-level automaton for the response grammar, used to constrain
// generation:
//
//   NA | S:C(;S:C)*     S = [^:;\n]+,  C = one of the options verbatim
//
// Compile() builds an NFA from the grammar, determinizes it by subset
// construction and minimizes it, so every state that cannot reach an
// accepting state collapses into one dead state.
//
// Sampling settings used with these masks in practice (temperature 0.1,
// top-p 0.9, at most 200 new tokens) belong to the caller.

#ifndef SEQLAB_GENFSM_H_
#define SEQLAB_GENFSM_H_

#include <cstddef>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace seqlab::genfsm {

struct OutputGrammar {
  std::vector<std::string> options;
  bool allows_na = true;
};

// Throws GrammarError for no options, empty or duplicate names, or names
// holding ':', ';' or a newline.
void ValidateGrammar(const OutputGrammar &grammar);

using StateId = std::uint32_t;

class Dfa {
 public:
  static constexpr std::size_t kAlphabet = 256;

  std::size_t num_states() const { return accepting_.size(); }
  StateId start() const { return start_; }
  StateId dead() const { return dead_; }
  bool accepting(StateId s) const { return accepting_[s]; }
  // Some accepting state is reachable from s.
  bool live(StateId s) const { return s != dead_; }

  StateId Step(StateId s, unsigned char byte) const {
    return table_[static_cast<std::size_t>(s) * kAlphabet + byte];
  }
  // Stops early once the dead state is reached.
  StateId Step(StateId s, std::string_view bytes) const;

  // {"states": N, "start": s, "dead": d, "accepting": [...],
  //  "transitions": [[[lo, hi, to], ...] per state]}; byte ranges are
  // inclusive and transitions into the dead state are omitted.
  nlohmann::ordered_json ToJson() const;
  // Throws ParseError on malformed tables.
  static Dfa FromJson(const nlohmann::ordered_json &json);

 private:
  friend Dfa Compile(const OutputGrammar &grammar);

  std::vector<StateId> table_;
  std::vector<bool> accepting_;
  StateId start_ = 0;
  StateId dead_ = 0;
};

Dfa Compile(const OutputGrammar &grammar);

enum class WalkResult { kAccepting, kLiveNonAccepting, kDead };

std::string_view WalkResultName(WalkResult result);
WalkResult Walk(const Dfa &dfa, std::string_view text);

struct VocabMask {
  std::vector<bool> allowed;
  // The end-of-sequence pseudo-token: allowed iff the state accepts.
  bool eos_allowed = false;

  std::size_t count() const;
};

// allowed[i] iff stepping through vocab[i]'s bytes from `state` ends in a
// live state. Empty tokens are never allowed. Throws IndexError for an
// unknown state.
VocabMask AllowedTokens(const Dfa &dfa, StateId state,
                        std::span<const std::string> vocab);

// Precomputed masks for one vocabulary. Unlike AllowedTokens, a token is
// allowed only if the state it leads to can still reach acceptance using
// tokens of this vocabulary, so sampling allowed tokens can never get stuck.
class TokenMaskIndex {
 public:
  TokenMaskIndex(const Dfa &dfa, std::vector<std::string> vocab);

  const std::vector<std::string> &vocab() const { return vocab_; }
  // Acceptance is reachable from s through vocabulary tokens.
  bool completable(StateId s) const { return completable_[s]; }
  StateId Next(StateId s, std::size_t token) const {
    return next_[static_cast<std::size_t>(s) * vocab_.size() + token];
  }
  VocabMask Mask(StateId state) const;

 private:
  const Dfa *dfa_;
  std::vector<std::string> vocab_;
  std::vector<StateId> next_;
  std::vector<bool> completable_;
};

}  // namespace seqlab::genfsm

#endif  // SEQLAB_GENFSM_H_
