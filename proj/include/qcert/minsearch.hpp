// Copyright 2026 The qcert Authors
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

#pragma once

// Exact minimal-pvDFA search. Unary problems enumerate tail/loop shapes;
// larger alphabets run an exhaustive identification search over partially
// specified transition tables driven by a labeled sample.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qcert/automata.hpp"
#include "qcert/parallel.hpp"
#include "qcert/promise.hpp"

namespace qcert {

struct SearchBudget {
  std::size_t max_states = 8;
  std::size_t word_budget = 8;  // sample length for multi-symbol problems
  std::optional<double> time_limit_seconds;
  std::size_t threads = 1;
  std::size_t max_witnesses = 256;  // witnesses stored; all are counted
};

struct MinimalityReport {
  std::optional<std::size_t> min_states;
  std::size_t lower_bound = 1;  // every machine with fewer states is refuted
  std::vector<Pvdfa> witnesses;
  std::size_t equivalence_classes = 0;
  // For each refuted size n: the word up to which (in length-lex order) the
  // promised words already refute every n-state machine.
  std::map<std::size_t, Word> failure_witnesses;
  bool complete = true;  // false when the time limit cut the search short
  std::uint64_t nodes_explored = 0;
  double seconds = 0.0;
};

namespace detail {
inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Required label per state of a unary shape; returns the first conflicting
// index, or nullopt when the shape admits a consistent labeling.
inline std::optional<std::size_t> unary_conflict(UnaryShape shape, const UnaryStructure& u, std::vector<int>& labels) {
  const std::size_t n = shape.tail + shape.loop;
  labels.assign(n, kUnlabeled);
  std::size_t last = unary_decisive_index(shape, u.stride, u.label_period());
  if (u.max_index) last = std::min(last, *u.max_index);
  for (std::size_t i = 0; i <= last; ++i) {
    const std::size_t len = i * u.stride;
    const std::size_t s = len < shape.tail ? len : shape.tail + (len - shape.tail) % shape.loop;
    const int want = static_cast<int>(u.label_at(i));
    if (labels[s] == kUnlabeled) labels[s] = want;
    else if (labels[s] != want) return i;
  }
  return std::nullopt;
}

inline Pvdfa unary_machine(const PromiseProblem& p, UnaryShape shape, std::vector<int> labels) {
  const std::size_t n = shape.tail + shape.loop;
  std::vector<std::vector<std::size_t>> delta(n, std::vector<std::size_t>(1));
  for (std::size_t s = 0; s + 1 < n; ++s) delta[s][0] = s + 1;
  delta[n - 1][0] = shape.tail;
  return Pvdfa(p.alphabet(), p.labels(), std::move(delta), 0, std::move(labels));
}
}  // namespace detail

/// Minimal pvDFA size for a unary problem. Every reachable unary machine is a
/// tail of length t followed by a loop of length l; each (t, l) shape is
/// checked with the exact periodicity criterion, and states never visited by
/// a promised word are left unlabeled in the reported witnesses.
inline MinimalityReport unary_min_search(const PromiseProblem& p, const SearchBudget& budget = {}) {
  const auto u = p.unary_structure();
  if (!u) throw std::invalid_argument("unary_min_search: " + p.descriptor() + " is not a unary problem");
  if (budget.max_states < 1) throw std::invalid_argument("unary_min_search: max_states must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  MinimalityReport rep;
  std::vector<int> labels;
  for (std::size_t n = 1; n <= budget.max_states; ++n) {
    std::size_t worst = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const UnaryShape shape{t, n - t};
      ++rep.nodes_explored;
      if (const auto bad = detail::unary_conflict(shape, *u, labels)) {
        worst = std::max(worst, *bad);
      } else {
        ++rep.equivalence_classes;
        if (rep.witnesses.size() < budget.max_witnesses) rep.witnesses.push_back(detail::unary_machine(p, shape, labels));
      }
    }
    if (rep.equivalence_classes > 0) {
      rep.min_states = n;
      rep.lower_bound = n;
      break;
    }
    rep.failure_witnesses[n] = Word(worst * u->stride, p.alphabet().symbol(0));
    rep.lower_bound = n + 1;
  }
  rep.seconds = detail::seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------
// Identification from a labeled sample

namespace detail {

struct SampleTrie {
  std::size_t sigma = 0;
  std::vector<int> parent;
  std::vector<int> symbol;
  std::vector<int> label;
  std::vector<std::vector<int>> child;
  std::vector<int> bfs;  // node order used by the search (root excluded)

  SampleTrie(const Alphabet& a, const std::vector<LabeledWord>& sample) : sigma(a.size()) {
    add_node(-1, -1);
    for (const auto& lw : sample) {
      int v = 0;
      for (char c : lw.word) {
        const int x = static_cast<int>(a.require_index(c));
        if (child[static_cast<std::size_t>(v)][static_cast<std::size_t>(x)] < 0) {
          const int w = add_node(v, x);
          child[static_cast<std::size_t>(v)][static_cast<std::size_t>(x)] = w;
        }
        v = child[static_cast<std::size_t>(v)][static_cast<std::size_t>(x)];
      }
      auto& l = label[static_cast<std::size_t>(v)];
      const int want = static_cast<int>(lw.label);
      if (l != kUnlabeled && l != want) throw std::invalid_argument("min_dfa_identify: word \"" + lw.word + "\" has two labels");
      l = want;
    }
    std::vector<int> queue{0};
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (int c : child[static_cast<std::size_t>(queue[h])])
        if (c >= 0) queue.push_back(c);
    bfs.assign(queue.begin() + 1, queue.end());
  }

 private:
  int add_node(int p, int x) {
    parent.push_back(p);
    symbol.push_back(x);
    label.push_back(kUnlabeled);
    child.emplace_back(sigma, -1);
    return static_cast<int>(parent.size() - 1);
  }
};

struct PartialDfa {
  std::vector<std::uint8_t> choices;  // branch decisions, used as a sort key
  std::vector<int> delta;             // n * sigma, -1 = not demanded by the sample
  std::vector<int> labels;
};

// Depth-first search over transition tables with n states. Transitions are
// fixed only when a trie node demands them; states are numbered in order of
// first use, so each isomorphism class of partial machines is met once.
class Identifier {
 public:
  Identifier(const SampleTrie& trie, std::size_t n, std::size_t cap, bool stop_at_first,
             std::optional<std::chrono::steady_clock::time_point> deadline)
      : trie_(trie), n_(n), cap_(cap), stop_at_first_(stop_at_first), deadline_(deadline) {}

  // Runs the subtree selected by `prefix`; when `split_depth` is set, branch
  // prefixes of that length are collected instead of being explored.
  void run(const std::vector<std::uint8_t>& prefix, std::optional<std::size_t> split_depth = std::nullopt) {
    prefix_ = &prefix;
    split_depth_ = split_depth;
    node_state_.assign(trie_.parent.size(), -1);
    delta_.assign(n_ * trie_.sigma, -1);
    labels_.assign(n_, kUnlabeled);
    used_ = 1;
    node_state_[0] = 0;
    labels_[0] = trie_.label[0];
    dfs(0);
  }

  std::size_t count = 0;
  std::vector<PartialDfa> solutions;
  std::vector<std::vector<std::uint8_t>> splits;
  std::uint64_t nodes = 0;
  bool aborted = false;

 private:
  // Walks forced nodes iteratively and recurses only where a transition is
  // still free, so the depth is bounded by n * |alphabet|.
  void dfs(std::size_t idx) {
    if (aborted || (stop_at_first_ && count > 0)) return;
    const std::size_t mark = undo_.size();
    std::size_t i = idx;
    std::size_t slot = 0;
    for (; i < trie_.bfs.size(); ++i) {
      if ((++nodes & 0xFFFF) == 0 && deadline_ && std::chrono::steady_clock::now() > *deadline_) {
        aborted = true;
        break;
      }
      const auto v = static_cast<std::size_t>(trie_.bfs[i]);
      const auto q = static_cast<std::size_t>(node_state_[static_cast<std::size_t>(trie_.parent[v])]);
      slot = q * trie_.sigma + static_cast<std::size_t>(trie_.symbol[v]);
      if (delta_[slot] < 0) break;
      if (!place(v, delta_[slot])) break;
    }
    if (aborted || i < trie_.bfs.size()) {
      const bool branch = !aborted && delta_[slot] < 0;
      if (branch) expand(i, slot);
    } else {
      ++count;
      if (solutions.size() < cap_) solutions.push_back({choices_, delta_, labels_});
    }
    rollback(mark);
  }

  void expand(std::size_t i, std::size_t slot) {
    const auto v = static_cast<std::size_t>(trie_.bfs[i]);
    const std::size_t depth = choices_.size();
    const std::size_t top = std::min(used_, n_ - 1);
    for (std::size_t t = 0; t <= top && !aborted; ++t) {
      if (depth < prefix_->size() && (*prefix_)[depth] != t) continue;
      if (split_depth_ && depth == *split_depth_) {
        auto s = choices_;
        s.push_back(static_cast<std::uint8_t>(t));
        splits.push_back(std::move(s));
        continue;
      }
      const bool fresh = t == used_;
      if (fresh) ++used_;
      delta_[slot] = static_cast<int>(t);
      choices_.push_back(static_cast<std::uint8_t>(t));
      const std::size_t mark = undo_.size();
      if (place(v, static_cast<int>(t))) dfs(i + 1);
      rollback(mark);
      choices_.pop_back();
      delta_[slot] = -1;
      if (fresh) --used_;
    }
  }

  // Assigns trie node v to `state`; false on a label conflict.
  bool place(std::size_t v, int state) {
    const int want = trie_.label[v];
    auto& have = labels_[static_cast<std::size_t>(state)];
    if (want != kUnlabeled) {
      if (have == kUnlabeled) {
        have = want;
        undo_.push_back(state);
      } else if (have != want) {
        return false;
      }
    }
    node_state_[v] = state;
    return true;
  }

  void rollback(std::size_t mark) {
    while (undo_.size() > mark) {
      labels_[static_cast<std::size_t>(undo_.back())] = kUnlabeled;
      undo_.pop_back();
    }
  }

  const SampleTrie& trie_;
  std::size_t n_;
  std::size_t cap_;
  bool stop_at_first_;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  const std::vector<std::uint8_t>* prefix_ = nullptr;
  std::optional<std::size_t> split_depth_;
  std::vector<int> node_state_;
  std::vector<int> delta_;
  std::vector<int> labels_;
  std::vector<std::uint8_t> choices_;
  std::vector<int> undo_;  // states whose label was set on the current path
  std::size_t used_ = 1;
};

struct IdentifyResult {
  std::size_t count = 0;
  std::vector<PartialDfa> solutions;  // sorted by branch decisions
  std::uint64_t nodes = 0;
  bool aborted = false;
};

inline IdentifyResult identify_with_n(const SampleTrie& trie, std::size_t n, std::size_t cap, bool stop_at_first,
                                      std::size_t threads,
                                      std::optional<std::chrono::steady_clock::time_point> deadline) {
  IdentifyResult res;
  // Split the tree at a fixed branching depth; every subtree is searched
  // independently and solutions are merged by decision sequence, so the
  // result does not depend on the thread count.
  constexpr std::size_t kSplitDepth = 3;
  const std::vector<std::uint8_t> empty;
  Identifier head(trie, n, cap, stop_at_first, deadline);
  head.run(empty, kSplitDepth);
  res.count = head.count;
  res.nodes = head.nodes;
  res.aborted = head.aborted;
  res.solutions = std::move(head.solutions);
  if (!(stop_at_first && res.count > 0)) {
    const auto& splits = head.splits;
    std::vector<IdentifyResult> parts(splits.size());
    parallel_for(splits.size(), threads, [&](std::size_t i) {
      Identifier sub(trie, n, cap, stop_at_first, deadline);
      sub.run(splits[i]);
      parts[i].count = sub.count;
      parts[i].nodes = sub.nodes;
      parts[i].aborted = sub.aborted;
      parts[i].solutions = std::move(sub.solutions);
    });
    for (auto& part : parts) {
      res.count += part.count;
      res.nodes += part.nodes;
      res.aborted = res.aborted || part.aborted;
      for (auto& s : part.solutions) res.solutions.push_back(std::move(s));
    }
  }
  std::sort(res.solutions.begin(), res.solutions.end(),
            [](const PartialDfa& a, const PartialDfa& b) { return a.choices < b.choices; });
  if (res.solutions.size() > cap) res.solutions.resize(cap);
  if (stop_at_first && res.count > 0) res.count = 1;
  return res;
}

inline Pvdfa complete_partial(const PartialDfa& s, std::size_t n, const Alphabet& a, const LabelSet& labels) {
  std::vector<std::vector<std::size_t>> delta(n, std::vector<std::size_t>(a.size()));
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t x = 0; x < a.size(); ++x) {
      const int t = s.delta[q * a.size() + x];
      delta[q][x] = t >= 0 ? static_cast<std::size_t>(t) : q;
    }
  return Pvdfa(a, labels, std::move(delta), 0, s.labels);
}
}  // namespace detail

/// Exact minimum number of states over all pvDFAs consistent with `sample`.
/// Witnesses are the distinct minimal partial machines (one per isomorphism
/// class); transitions the sample never exercises are completed as
/// self-loops.
inline MinimalityReport min_dfa_identify(const Alphabet& alphabet, const LabelSet& labels,
                                         std::vector<LabeledWord> sample, const SearchBudget& budget = {}) {
  if (budget.max_states < 1) throw std::invalid_argument("min_dfa_identify: max_states must be >= 1");
  if (budget.max_states > 255) throw std::invalid_argument("min_dfa_identify: max_states must be <= 255");
  for (const auto& lw : sample) {
    alphabet.require_word(lw.word);
    if (lw.label >= labels.size()) throw std::invalid_argument("min_dfa_identify: label index out of range");
  }
  std::stable_sort(sample.begin(), sample.end(),
                   [&](const LabeledWord& x, const LabeledWord& y) { return length_lex_less(alphabet, x.word, y.word); });
  const auto t0 = std::chrono::steady_clock::now();
  std::optional<std::chrono::steady_clock::time_point> deadline;
  if (budget.time_limit_seconds)
    deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(*budget.time_limit_seconds));
  const detail::SampleTrie trie(alphabet, sample);
  MinimalityReport rep;
  for (std::size_t n = 1; n <= budget.max_states; ++n) {
    auto res = detail::identify_with_n(trie, n, budget.max_witnesses, false, budget.threads, deadline);
    rep.nodes_explored += res.nodes;
    if (res.aborted) {
      rep.complete = false;
      break;
    }
    if (res.count > 0) {
      rep.min_states = n;
      rep.lower_bound = n;
      rep.equivalence_classes = res.count;
      for (const auto& s : res.solutions) rep.witnesses.push_back(detail::complete_partial(s, n, alphabet, labels));
      break;
    }
    // Smallest length-lex prefix of the sample that already refutes size n.
    std::size_t lo = 1, hi = sample.size();
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      const std::vector<LabeledWord> prefix(sample.begin(), sample.begin() + static_cast<std::ptrdiff_t>(mid));
      const detail::SampleTrie sub(alphabet, prefix);
      const auto r = detail::identify_with_n(sub, n, 0, true, budget.threads, deadline);
      rep.nodes_explored += r.nodes;
      if (r.aborted) break;
      if (r.count == 0) hi = mid;
      else lo = mid + 1;
    }
    rep.failure_witnesses[n] = sample[lo - 1].word;
    rep.lower_bound = n + 1;
  }
  rep.seconds = detail::seconds_since(t0);
  return rep;
}

/// Dispatches on alphabet size: unary problems use the shape search, others
/// identify from all promised words up to budget.word_budget.
inline MinimalityReport min_search(const PromiseProblem& p, const SearchBudget& budget = {}) {
  if (p.alphabet().size() == 1 && p.unary_structure()) return unary_min_search(p, budget);
  return min_dfa_identify(p.alphabet(), p.labels(), enumerate_promised(p, budget.word_budget), budget);
}

// ---------------------------------------------------------------------------
// Claim verification

struct ClaimRow {
  std::string problem;
  std::size_t claimed = 0;
  std::optional<std::size_t> found;  // unset for construction-only rows
  bool match = false;
  std::string method;  // "unary-search", "identify", or "construction"
  std::string note;
  double seconds = 0.0;
};

struct ClaimsOptions {
  std::vector<unsigned> eo_k{1, 2, 3, 4};
  std::vector<std::pair<unsigned, unsigned>> geo_qr{{2, 2}, {3, 1}, {3, 3}, {2, 4}, {5, 5}};
  unsigned restricted_eo_max_k = 3;
  std::size_t restricted_eo_max_imax = 10;
  bool clifford = true;
  std::vector<unsigned> diof_k{2, 3};
  unsigned diof_identify_max_k = 2;  // also report the sample-bounded identification minimum
  std::vector<std::pair<unsigned, unsigned>> neo_nk{{1, 1}, {2, 1}};
  std::size_t word_budget = 8;
  std::size_t threads = 1;
};

namespace detail {
inline std::size_t pow_size(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

inline ClaimRow searched_row(const PromiseProblem& p, std::size_t claimed, const SearchBudget& b) {
  ClaimRow row;
  row.problem = p.descriptor();
  row.claimed = claimed;
  const auto rep = min_search(p, b);
  row.found = rep.min_states;
  row.match = rep.min_states == claimed;
  row.method = p.alphabet().size() == 1 ? "unary-search" : "identify";
  if (row.method == "identify") row.note = "words up to length " + std::to_string(b.word_budget);
  row.seconds = rep.seconds;
  return row;
}
}  // namespace detail

/// Compares the stated minimal sizes (2^{k+1} for EO^k, min(i_max+1, 2^{k+1})
/// for restricted EO^k, q^{m_q+1} for GEO, 6 for CL, 2^{N(k+1)} for N-EO)
/// against the search engines. DIOF rows combine the exact unary bound of the
/// weight-1 subproblem with the canonical machine. N-EO with N >= 2 is checked on the
/// construction side only: the canonical machine must solve the problem and
/// the lower bound follows from the single-symbol subproblem.
inline std::vector<ClaimRow> verify_claims(const ClaimsOptions& opt = {}) {
  std::vector<ClaimRow> rows;
  SearchBudget b;
  b.threads = opt.threads;
  b.word_budget = opt.word_budget;
  for (unsigned k : opt.eo_k) {
    const std::size_t claimed = std::size_t{2} << k;
    b.max_states = claimed;
    rows.push_back(detail::searched_row(make_eo(k), claimed, b));
  }
  for (unsigned k = 1; k <= opt.restricted_eo_max_k; ++k)
    for (std::size_t i_max = 0; i_max <= opt.restricted_eo_max_imax; ++i_max) {
      const std::size_t claimed = std::min(i_max + 1, std::size_t{2} << k);
      b.max_states = claimed;
      rows.push_back(detail::searched_row(restrict_index(make_eo(k), i_max), claimed, b));
    }
  for (auto [q, r] : opt.geo_qr) {
    const auto p = make_geo(q, r);
    const auto& g = std::get<family::GeneralizedEvenOdd>(p.family());
    const std::size_t claimed = detail::pow_size(q, g.m_q + 1);
    b.max_states = claimed;
    rows.push_back(detail::searched_row(p, claimed, b));
  }
  if (opt.clifford) {
    b.max_states = 6;
    rows.push_back(detail::searched_row(make_cl(), 6, b));
  }
  for (unsigned k : opt.diof_k) {
    // The weight-1 symbol alone yields exactly EO^k, so the exact unary
    // minimum is a lower bound; the canonical loop is a matching upper bound.
    const auto t0 = std::chrono::steady_clock::now();
    const auto p = make_diof(k);
    const std::size_t claimed = std::size_t{2} << k;
    ClaimRow row;
    row.problem = p.descriptor();
    row.claimed = claimed;
    row.method = "inclusion";
    b.max_states = claimed;
    const auto lower = unary_min_search(make_eo(k), b).min_states;
    const Pvdfa d = canonical_dfa(p);
    const bool upper_ok = dfa_solves(d, p, opt.word_budget).solves && d.num_states() == claimed;
    if (lower && upper_ok && *lower == claimed) row.found = claimed;
    row.match = row.found == claimed;
    row.note = "lower bound " + (lower ? std::to_string(*lower) : std::string("none")) +
               " from the weight-1 subproblem; canonical " + std::to_string(d.num_states()) +
               "-state machine solves words up to length " + std::to_string(opt.word_budget);
    if (k <= opt.diof_identify_max_k) {
      SearchBudget ib = b;
      const auto rep = min_search(p, ib);
      row.note += "; sample identification up to length " + std::to_string(opt.word_budget) + " gives " +
                  (rep.min_states ? std::to_string(*rep.min_states) : std::string("none"));
    }
    row.seconds = detail::seconds_since(t0);
    rows.push_back(row);
  }
  for (auto [n, k] : opt.neo_nk) {
    const auto p = make_neo(n, k);
    const std::size_t claimed = std::size_t{1} << (n * (k + 1));
    if (n == 1) {
      b.max_states = claimed;
      rows.push_back(detail::searched_row(p, claimed, b));
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    ClaimRow row;
    row.problem = p.descriptor();
    row.claimed = claimed;
    row.method = "construction";
    const Pvdfa d = canonical_dfa(p);
    const auto v = dfa_solves(d, p, opt.word_budget);
    row.match = v.solves && d.num_states() == claimed;
    row.note = "canonical machine solves words up to length " + std::to_string(opt.word_budget) +
               "; lower bound " + std::to_string(std::size_t{2} << k) + " from the single-symbol subproblem, not searched";
    row.seconds = detail::seconds_since(t0);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qcert
