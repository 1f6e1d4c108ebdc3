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

#include "seqlab/genfsm.h"

#include <algorithm>
#include <bitset>
#include <map>
#include <queue>
#include <set>
#include <utility>

#include "seqlab/errors.h"

namespace seqlab::genfsm {

namespace {

using ByteSet = std::bitset<Dfa::kAlphabet>;

ByteSet Single(unsigned char c) {
  ByteSet set;
  set.set(c);
  return set;
}

ByteSet SpanBytes() {
  ByteSet set;
  set.set();
  set.reset(':');
  set.reset(';');
  set.reset('\n');
  return set;
}

// Thompson-style NFA with byte-set edges.
class Nfa {
 public:
  int Add() {
    nodes_.emplace_back();
    return static_cast<int>(nodes_.size()) - 1;
  }
  void Edge(int from, const ByteSet &bytes, int to) {
    nodes_[from].edges.emplace_back(bytes, to);
  }
  void Epsilon(int from, int to) { nodes_[from].epsilon.push_back(to); }
  void Accept(int node) { nodes_[node].accept = true; }

  // Appends `text` as a chain from `from`; returns the last node.
  int Chain(int from, std::string_view text) {
    int at = from;
    for (unsigned char c : text) {
      const int next = Add();
      Edge(at, Single(c), next);
      at = next;
    }
    return at;
  }

  std::vector<int> Closure(std::vector<int> set) const {
    std::vector<bool> seen(nodes_.size(), false);
    std::vector<int> stack = set;
    for (int n : set) seen[n] = true;
    while (!stack.empty()) {
      const int n = stack.back();
      stack.pop_back();
      for (int m : nodes_[n].epsilon) {
        if (!seen[m]) {
          seen[m] = true;
          set.push_back(m);
          stack.push_back(m);
        }
      }
    }
    std::sort(set.begin(), set.end());
    return set;
  }

  std::vector<int> Move(const std::vector<int> &set, unsigned char c) const {
    std::vector<int> out;
    for (int n : set) {
      for (const auto &[bytes, to] : nodes_[n].edges) {
        if (bytes.test(c)) out.push_back(to);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool Accepts(const std::vector<int> &set) const {
    return std::any_of(set.begin(), set.end(),
                       [&](int n) { return nodes_[n].accept; });
  }

 private:
  struct Node {
    std::vector<std::pair<ByteSet, int>> edges;
    std::vector<int> epsilon;
    bool accept = false;
  };
  std::vector<Node> nodes_;
};

Nfa BuildNfa(const OutputGrammar &grammar) {
  Nfa nfa;
  const int start = nfa.Add();
  if (grammar.allows_na) nfa.Accept(nfa.Chain(start, "NA"));

  // group -> span+ ':' class, then either accept or ';' back to group.
  const int group = nfa.Add();
  nfa.Epsilon(start, group);
  const int span = nfa.Add();
  nfa.Edge(group, SpanBytes(), span);
  nfa.Edge(span, SpanBytes(), span);
  const int colon = nfa.Add();
  nfa.Edge(span, Single(':'), colon);
  const int done = nfa.Add();
  nfa.Accept(done);
  for (const std::string &option : grammar.options) {
    nfa.Epsilon(nfa.Chain(colon, option), done);
  }
  nfa.Edge(done, Single(';'), group);
  return nfa;
}

}  // namespace

void ValidateGrammar(const OutputGrammar &grammar) {
  if (grammar.options.empty()) throw GrammarError("grammar has no options");
  std::set<std::string_view> seen;
  for (const std::string &option : grammar.options) {
    if (option.empty()) throw GrammarError("empty option name");
    if (option.find_first_of(":;\n") != std::string::npos) {
      throw GrammarError("option name holds a reserved character: " + option);
    }
    if (!seen.insert(option).second) {
      throw GrammarError("duplicate option: " + option);
    }
  }
}

Dfa Compile(const OutputGrammar &grammar) {
  ValidateGrammar(grammar);
  const Nfa nfa = BuildNfa(grammar);

  // Subset construction. The empty set is a regular state and becomes the
  // dead state after minimization.
  std::map<std::vector<int>, StateId> ids;
  std::vector<std::vector<int>> sets;
  std::vector<StateId> raw_table;
  auto intern = [&](std::vector<int> set) {
    auto [it, inserted] = ids.emplace(set, static_cast<StateId>(sets.size()));
    if (inserted) sets.push_back(std::move(set));
    return it->second;
  };
  intern(nfa.Closure({0}));
  for (std::size_t s = 0; s < sets.size(); ++s) {
    for (std::size_t c = 0; c < Dfa::kAlphabet; ++c) {
      const StateId to =
          intern(nfa.Closure(nfa.Move(sets[s], static_cast<unsigned char>(c))));
      raw_table.push_back(to);
    }
  }
  const std::size_t n = sets.size();

  // Moore partition refinement.
  std::vector<StateId> block(n);
  for (std::size_t s = 0; s < n; ++s) block[s] = nfa.Accepts(sets[s]) ? 1 : 0;
  std::size_t blocks = 0;
  while (true) {
    std::map<std::vector<StateId>, StateId> signatures;
    std::vector<StateId> next(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<StateId> sig;
      sig.reserve(Dfa::kAlphabet + 1);
      sig.push_back(block[s]);
      for (std::size_t c = 0; c < Dfa::kAlphabet; ++c) {
        sig.push_back(block[raw_table[s * Dfa::kAlphabet + c]]);
      }
      next[s] =
          signatures
              .emplace(std::move(sig), static_cast<StateId>(signatures.size()))
              .first->second;
    }
    const std::size_t count = signatures.size();
    block = std::move(next);
    if (count == blocks) break;
    blocks = count;
  }

  // Renumber blocks in breadth-first order from the start state so the
  // numbering does not depend on map internals.
  std::vector<StateId> order(blocks, static_cast<StateId>(-1));
  std::vector<std::size_t> representative(blocks);
  for (std::size_t s = n; s-- > 0;) representative[block[s]] = s;
  std::queue<StateId> queue;
  StateId next_id = 0;
  order[block[0]] = next_id++;
  queue.push(block[0]);
  while (!queue.empty()) {
    const StateId b = queue.front();
    queue.pop();
    const std::size_t rep = representative[b];
    for (std::size_t c = 0; c < Dfa::kAlphabet; ++c) {
      const StateId to = block[raw_table[rep * Dfa::kAlphabet + c]];
      if (order[to] == static_cast<StateId>(-1)) {
        order[to] = next_id++;
        queue.push(to);
      }
    }
  }

  Dfa dfa;
  dfa.table_.assign(next_id * Dfa::kAlphabet, 0);
  dfa.accepting_.assign(next_id, false);
  for (std::size_t b = 0; b < blocks; ++b) {
    if (order[b] == static_cast<StateId>(-1)) continue;
    const std::size_t rep = representative[b];
    const StateId id = order[b];
    dfa.accepting_[id] = nfa.Accepts(sets[rep]);
    for (std::size_t c = 0; c < Dfa::kAlphabet; ++c) {
      dfa.table_[id * Dfa::kAlphabet + c] =
          order[block[raw_table[rep * Dfa::kAlphabet + c]]];
    }
  }
  dfa.start_ = 0;
  // The empty subset is always reachable (any reserved byte at the start)
  // and every state that cannot reach acceptance merged into it.
  dfa.dead_ = order[block[ids.at({})]];
  return dfa;
}

StateId Dfa::Step(StateId s, std::string_view bytes) const {
  for (unsigned char c : bytes) {
    if (s == dead_) break;
    s = Step(s, c);
  }
  return s;
}

nlohmann::ordered_json Dfa::ToJson() const {
  nlohmann::ordered_json json;
  json["states"] = num_states();
  json["start"] = start_;
  json["dead"] = dead_;
  auto accepting = nlohmann::ordered_json::array();
  for (StateId s = 0; s < num_states(); ++s) {
    if (accepting_[s]) accepting.push_back(s);
  }
  json["accepting"] = std::move(accepting);
  auto transitions = nlohmann::ordered_json::array();
  for (StateId s = 0; s < num_states(); ++s) {
    auto ranges = nlohmann::ordered_json::array();
    std::size_t c = 0;
    while (c < kAlphabet) {
      const StateId to = Step(s, static_cast<unsigned char>(c));
      std::size_t hi = c;
      while (hi + 1 < kAlphabet &&
             Step(s, static_cast<unsigned char>(hi + 1)) == to) {
        ++hi;
      }
      if (to != dead_) ranges.push_back({c, hi, to});
      c = hi + 1;
    }
    transitions.push_back(std::move(ranges));
  }
  json["transitions"] = std::move(transitions);
  return json;
}

Dfa Dfa::FromJson(const nlohmann::ordered_json &json) {
  Dfa dfa;
  try {
    const std::size_t states = json.at("states").get<std::size_t>();
    dfa.start_ = json.at("start").get<StateId>();
    dfa.dead_ = json.at("dead").get<StateId>();
    if (states == 0 || dfa.start_ >= states || dfa.dead_ >= states) {
      throw ParseError(0, "automaton state ids out of range");
    }
    dfa.accepting_.assign(states, false);
    for (const auto &s : json.at("accepting")) {
      const auto id = s.get<std::size_t>();
      if (id >= states) throw ParseError(0, "accepting state out of range");
      dfa.accepting_[id] = true;
    }
    dfa.table_.assign(states * kAlphabet, dfa.dead_);
    const auto &transitions = json.at("transitions");
    if (transitions.size() != states) {
      throw ParseError(0, "transition table has the wrong number of states");
    }
    for (std::size_t s = 0; s < states; ++s) {
      for (const auto &range : transitions[s]) {
        const auto lo = range.at(0).get<std::size_t>();
        const auto hi = range.at(1).get<std::size_t>();
        const auto to = range.at(2).get<StateId>();
        if (lo > hi || hi >= kAlphabet || to >= states) {
          throw ParseError(0, "bad transition range");
        }
        for (std::size_t c = lo; c <= hi; ++c) {
          dfa.table_[s * kAlphabet + c] = to;
        }
      }
    }
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(0, e.what());
  }
  return dfa;
}

std::string_view WalkResultName(WalkResult result) {
  switch (result) {
    case WalkResult::kAccepting:
      return "accepting";
    case WalkResult::kLiveNonAccepting:
      return "live";
    case WalkResult::kDead:
      return "dead";
  }
  return "dead";
}

WalkResult Walk(const Dfa &dfa, std::string_view text) {
  const StateId s = dfa.Step(dfa.start(), text);
  if (!dfa.live(s)) return WalkResult::kDead;
  return dfa.accepting(s) ? WalkResult::kAccepting
                          : WalkResult::kLiveNonAccepting;
}

std::size_t VocabMask::count() const {
  return static_cast<std::size_t>(
      std::count(allowed.begin(), allowed.end(), true));
}

VocabMask AllowedTokens(const Dfa &dfa, StateId state,
                        std::span<const std::string> vocab) {
  if (state >= dfa.num_states()) {
    throw IndexError("unknown automaton state " + std::to_string(state));
  }
  VocabMask mask;
  mask.allowed.assign(vocab.size(), false);
  mask.eos_allowed = dfa.accepting(state);
  if (!dfa.live(state)) return mask;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    mask.allowed[i] = !vocab[i].empty() && dfa.live(dfa.Step(state, vocab[i]));
  }
  return mask;
}

TokenMaskIndex::TokenMaskIndex(const Dfa &dfa, std::vector<std::string> vocab)
    : dfa_(&dfa), vocab_(std::move(vocab)) {
  const std::size_t states = dfa.num_states();
  const std::size_t v = vocab_.size();
  next_.assign(states * v, dfa.dead());
  for (StateId s = 0; s < states; ++s) {
    if (!dfa.live(s)) continue;
    for (std::size_t t = 0; t < v; ++t) {
      if (!vocab_[t].empty()) next_[s * v + t] = dfa.Step(s, vocab_[t]);
    }
  }
  // Least fixpoint: accepting states, then anything with a token into the
  // set.
  completable_.assign(states, false);
  for (StateId s = 0; s < states; ++s) completable_[s] = dfa.accepting(s);
  bool changed = true;
  while (changed) {
    changed = false;
    for (StateId s = 0; s < states; ++s) {
      if (completable_[s]) continue;
      for (std::size_t t = 0; t < v; ++t) {
        if (!vocab_[t].empty() && completable_[next_[s * v + t]]) {
          completable_[s] = true;
          changed = true;
          break;
        }
      }
    }
  }
}

VocabMask TokenMaskIndex::Mask(StateId state) const {
  if (state >= dfa_->num_states()) {
    throw IndexError("unknown automaton state " + std::to_string(state));
  }
  VocabMask mask;
  const std::size_t v = vocab_.size();
  mask.allowed.assign(v, false);
  mask.eos_allowed = dfa_->accepting(state);
  if (!dfa_->live(state)) return mask;
  for (std::size_t t = 0; t < v; ++t) {
    mask.allowed[t] = !vocab_[t].empty() && completable_[Next(state, t)];
  }
  return mask;
}

}  // namespace seqlab::genfsm
