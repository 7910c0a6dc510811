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

// Classical promise-value automata: deterministic (pvDFA) and stochastic
// (pvPFA) machines, solve checks and failure probabilities.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <numeric>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qcert/promise.hpp"

namespace qcert {

/// Marks a state that carries no label.
inline constexpr int kUnlabeled = -1;

class Pvdfa {
 public:
  /// delta[s][a] is the successor of state s on alphabet symbol a;
  /// state_labels[s] is an index into `labels` or kUnlabeled.
  Pvdfa(Alphabet alphabet, LabelSet labels, std::vector<std::vector<std::size_t>> delta, std::size_t initial,
        std::vector<int> state_labels)
      : alphabet_(std::move(alphabet)),
        labels_(std::move(labels)),
        delta_(std::move(delta)),
        initial_(initial),
        state_labels_(std::move(state_labels)) {
    const std::size_t n = delta_.size();
    if (n == 0) throw std::invalid_argument("Pvdfa: no states");
    if (initial_ >= n) throw std::invalid_argument("Pvdfa: initial state out of range");
    if (state_labels_.size() != n) throw std::invalid_argument("Pvdfa: one label entry per state required");
    for (const auto& row : delta_) {
      if (row.size() != alphabet_.size()) throw std::invalid_argument("Pvdfa: transition table must be total");
      for (auto t : row)
        if (t >= n) throw std::invalid_argument("Pvdfa: transition target out of range");
    }
    for (int l : state_labels_)
      if (l != kUnlabeled && (l < 0 || static_cast<std::size_t>(l) >= labels_.size()))
        throw std::invalid_argument("Pvdfa: label index out of range");
  }

  std::size_t num_states() const { return delta_.size(); }
  const Alphabet& alphabet() const { return alphabet_; }
  const LabelSet& labels() const { return labels_; }
  std::size_t initial() const { return initial_; }
  const std::vector<std::vector<std::size_t>>& delta() const { return delta_; }
  std::size_t next(std::size_t s, std::size_t symbol) const { return delta_[s][symbol]; }
  const std::vector<int>& state_labels() const { return state_labels_; }

  std::optional<std::size_t> state_label(std::size_t s) const {
    const int l = state_labels_.at(s);
    if (l == kUnlabeled) return std::nullopt;
    return static_cast<std::size_t>(l);
  }

  /// States carrying each label, in label order.
  std::vector<std::vector<std::size_t>> labeled_sets() const {
    std::vector<std::vector<std::size_t>> out(labels_.size());
    for (std::size_t s = 0; s < state_labels_.size(); ++s)
      if (state_labels_[s] != kUnlabeled) out[static_cast<std::size_t>(state_labels_[s])].push_back(s);
    return out;
  }

  bool operator==(const Pvdfa&) const = default;

 private:
  Alphabet alphabet_;
  LabelSet labels_;
  std::vector<std::vector<std::size_t>> delta_;
  std::size_t initial_;
  std::vector<int> state_labels_;
};

inline std::size_t dfa_run(const Pvdfa& d, std::string_view w) {
  std::size_t s = d.initial();
  for (char c : w) s = d.next(s, d.alphabet().require_index(c));
  return s;
}

/// Tail length t and loop length l of the path a unary DFA follows from s0.
struct UnaryShape {
  std::size_t tail = 0;
  std::size_t loop = 1;
  bool operator==(const UnaryShape&) const = default;
};

/// Shape of the symbol-0 trajectory, plus the visited states in order.
inline UnaryShape unary_shape(const Pvdfa& d, std::vector<std::size_t>* path = nullptr) {
  std::vector<std::size_t> first_seen(d.num_states(), d.num_states());
  std::vector<std::size_t> seq;
  std::size_t s = d.initial();
  while (first_seen[s] == d.num_states()) {
    first_seen[s] = seq.size();
    seq.push_back(s);
    s = d.next(s, 0);
  }
  UnaryShape shape{first_seen[s], seq.size() - first_seen[s]};
  if (path) *path = std::move(seq);
  return shape;
}

// ---------------------------------------------------------------------------
// Solve checks

struct Verdict {
  bool solves = false;
  bool exact = false;                  // true when the check covers every promised word
  std::optional<Word> counterexample;  // first failing promised word
  std::size_t words_checked = 0;
  std::size_t budget_length = 0;       // longest word length examined
};

namespace detail {
inline std::vector<int> map_labels(const LabelSet& from, const LabelSet& to) {
  std::vector<int> out(from.size(), kUnlabeled);
  for (std::size_t i = 0; i < from.size(); ++i)
    if (auto j = to.index_of(from.name(i))) out[i] = static_cast<int>(*j);
  return out;
}

inline std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }
}  // namespace detail

/// Number of promised indices i that must be checked for a unary DFA with the
/// given shape: the state sequence at lengths i*stride is periodic in i with
/// period l/gcd(l, stride) once past the tail, and required labels repeat with
/// the label period, so two joint periods past the tail decide every i.
inline std::size_t unary_decisive_index(UnaryShape shape, std::size_t stride, std::size_t label_period) {
  const std::size_t state_period = shape.loop / std::gcd(shape.loop, stride);
  return detail::ceil_div(shape.tail, stride) + 2 * std::lcm(state_period, label_period);
}

/// Checks whether `d` labels every promised word correctly. Unary problems are
/// decided exactly; for larger alphabets every promised word up to
/// `max_length` is checked.
inline Verdict dfa_solves(const Pvdfa& d, const PromiseProblem& p, std::size_t max_length = 8) {
  if (!(d.alphabet() == p.alphabet()))
    throw std::invalid_argument("dfa_solves: alphabet mismatch (\"" + d.alphabet().symbols() + "\" vs \"" +
                                p.alphabet().symbols() + "\")");
  const auto to_dfa = detail::map_labels(p.labels(), d.labels());
  Verdict v;
  if (const auto u = p.unary_structure()) {
    std::vector<std::size_t> path;
    const UnaryShape shape = unary_shape(d, &path);
    std::size_t last = unary_decisive_index(shape, u->stride, u->label_period());
    if (u->max_index) last = std::min(last, *u->max_index);
    v.exact = true;
    for (std::size_t i = 0; i <= last; ++i) {
      const std::size_t n = i * u->stride;
      const std::size_t s = n < shape.tail ? path[n] : path[shape.tail + (n - shape.tail) % shape.loop];
      ++v.words_checked;
      v.budget_length = n;
      if (d.state_labels()[s] == kUnlabeled || d.state_labels()[s] != to_dfa[u->label_at(i)]) {
        v.counterexample = Word(n, p.alphabet().symbol(0));
        return v;
      }
    }
    v.solves = true;
    return v;
  }
  const auto words = enumerate_promised(p, max_length);
  v.budget_length = p.restriction().max_length ? std::min(max_length, *p.restriction().max_length) : max_length;
  v.exact = p.restriction().max_length.has_value() && *p.restriction().max_length <= max_length;
  for (const auto& lw : words) {
    ++v.words_checked;
    const std::size_t s = dfa_run(d, lw.word);
    if (d.state_labels()[s] == kUnlabeled || d.state_labels()[s] != to_dfa[lw.label]) {
      v.counterexample = lw.word;
      return v;
    }
  }
  v.solves = true;
  return v;
}

/// True when `d` reproduces every label in the sample.
inline bool dfa_consistent(const Pvdfa& d, const std::vector<LabeledWord>& sample, const LabelSet& sample_labels) {
  const auto to_dfa = detail::map_labels(sample_labels, d.labels());
  for (const auto& lw : sample) {
    const int l = d.state_labels()[dfa_run(d, lw.word)];
    if (l == kUnlabeled || l != to_dfa[lw.label]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Isomorphism

namespace detail {
inline std::vector<std::size_t> bfs_order(const Pvdfa& d) {
  std::vector<std::size_t> order;
  std::vector<bool> seen(d.num_states(), false);
  std::queue<std::size_t> q;
  q.push(d.initial());
  seen[d.initial()] = true;
  while (!q.empty()) {
    const auto s = q.front();
    q.pop();
    order.push_back(s);
    for (std::size_t a = 0; a < d.alphabet().size(); ++a) {
      const auto t = d.next(s, a);
      if (!seen[t]) {
        seen[t] = true;
        q.push(t);
      }
    }
  }
  return order;
}

inline bool same_under(const Pvdfa& a, const Pvdfa& b, const std::vector<std::size_t>& perm,
                       const std::vector<int>& label_map) {
  if (perm[a.initial()] != b.initial()) return false;
  for (std::size_t s = 0; s < a.num_states(); ++s) {
    const int la = a.state_labels()[s];
    const int lb = b.state_labels()[perm[s]];
    if ((la == kUnlabeled) != (lb == kUnlabeled)) return false;
    if (la != kUnlabeled && label_map[static_cast<std::size_t>(la)] != lb) return false;
    for (std::size_t x = 0; x < a.alphabet().size(); ++x)
      if (perm[a.next(s, x)] != b.next(perm[s], x)) return false;
  }
  return true;
}
}  // namespace detail

/// Isomorphism: a state bijection preserving the initial state, every
/// transition and every labeled set (labels are matched by name).
inline bool dfa_isomorphic(const Pvdfa& a, const Pvdfa& b) {
  if (a.num_states() != b.num_states() || !(a.alphabet() == b.alphabet())) return false;
  const auto label_map = detail::map_labels(a.labels(), b.labels());
  const auto oa = detail::bfs_order(a);
  const auto ob = detail::bfs_order(b);
  if (oa.size() != ob.size()) return false;
  const std::size_t n = a.num_states();
  if (oa.size() == n) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[oa[i]] = ob[i];
    return detail::same_under(a, b, perm, label_map);
  }
  if (n > 9) throw std::invalid_argument("dfa_isomorphic: machines with unreachable states limited to 9 states");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (detail::same_under(a, b, perm, label_map)) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// ---------------------------------------------------------------------------
// pvPFA

class Pvpfa {
 public:
  /// transitions[a] is the column-stochastic matrix of symbol a.
  Pvpfa(Alphabet alphabet, LabelSet labels, std::vector<Eigen::MatrixXd> transitions, Eigen::VectorXd initial,
        std::vector<int> state_labels, double tol = 1e-12)
      : alphabet_(std::move(alphabet)),
        labels_(std::move(labels)),
        transitions_(std::move(transitions)),
        initial_(std::move(initial)),
        state_labels_(std::move(state_labels)) {
    const auto n = initial_.size();
    if (n == 0) throw std::invalid_argument("Pvpfa: no states");
    if (transitions_.size() != alphabet_.size()) throw std::invalid_argument("Pvpfa: one matrix per symbol required");
    for (const auto& t : transitions_) {
      if (t.rows() != n || t.cols() != n) throw std::invalid_argument("Pvpfa: transition matrix shape");
      if (t.minCoeff() < -tol) throw std::invalid_argument("Pvpfa: negative transition probability");
      for (Eigen::Index j = 0; j < n; ++j)
        if (std::abs(t.col(j).sum() - 1.0) > tol) throw std::invalid_argument("Pvpfa: column does not sum to 1");
    }
    if (initial_.minCoeff() < -tol || std::abs(initial_.sum() - 1.0) > tol)
      throw std::invalid_argument("Pvpfa: initial distribution invalid");
    if (state_labels_.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("Pvpfa: one label per state");
    for (int l : state_labels_)
      if (l != kUnlabeled && (l < 0 || static_cast<std::size_t>(l) >= labels_.size()))
        throw std::invalid_argument("Pvpfa: label index out of range");
  }

  std::size_t num_states() const { return static_cast<std::size_t>(initial_.size()); }
  const Alphabet& alphabet() const { return alphabet_; }
  const LabelSet& labels() const { return labels_; }
  const std::vector<Eigen::MatrixXd>& transitions() const { return transitions_; }
  const Eigen::VectorXd& initial() const { return initial_; }
  const std::vector<int>& state_labels() const { return state_labels_; }

  /// The 0/1 row vector m_a selecting states with label a.
  Eigen::RowVectorXd label_vector(std::size_t label) const {
    Eigen::RowVectorXd m = Eigen::RowVectorXd::Zero(initial_.size());
    for (std::size_t s = 0; s < state_labels_.size(); ++s)
      if (state_labels_[s] == static_cast<int>(label)) m(static_cast<Eigen::Index>(s)) = 1.0;
    return m;
  }

  static Pvpfa from_dfa(const Pvdfa& d) {
    const auto n = static_cast<Eigen::Index>(d.num_states());
    std::vector<Eigen::MatrixXd> ts;
    for (std::size_t a = 0; a < d.alphabet().size(); ++a) {
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
      for (Eigen::Index s = 0; s < n; ++s) t(static_cast<Eigen::Index>(d.next(static_cast<std::size_t>(s), a)), s) = 1.0;
      ts.push_back(t);
    }
    Eigen::VectorXd pi = Eigen::VectorXd::Zero(n);
    pi(static_cast<Eigen::Index>(d.initial())) = 1.0;
    return Pvpfa(d.alphabet(), d.labels(), ts, pi, d.state_labels());
  }

 private:
  Alphabet alphabet_;
  LabelSet labels_;
  std::vector<Eigen::MatrixXd> transitions_;
  Eigen::VectorXd initial_;
  std::vector<int> state_labels_;
};

inline std::vector<double> pfa_label_prob(const Pvpfa& m, std::string_view w) {
  Eigen::VectorXd p = m.initial();
  for (char c : w) p = m.transitions()[m.alphabet().require_index(c)] * p;
  std::vector<double> out(m.labels().size(), 0.0);
  for (std::size_t s = 0; s < m.state_labels().size(); ++s)
    if (m.state_labels()[s] != kUnlabeled) out[static_cast<std::size_t>(m.state_labels()[s])] += p(static_cast<Eigen::Index>(s));
  return out;
}

// ---------------------------------------------------------------------------
// Labeling processes and failure probability

inline const LabelSet& process_labels(const Pvdfa& d) { return d.labels(); }
inline const LabelSet& process_labels(const Pvpfa& m) { return m.labels(); }

inline std::vector<double> label_probabilities(const Pvdfa& d, std::string_view w) {
  std::vector<double> out(d.labels().size(), 0.0);
  if (auto l = d.state_label(dfa_run(d, w))) out[*l] = 1.0;
  return out;
}
inline std::vector<double> label_probabilities(const Pvpfa& m, std::string_view w) { return pfa_label_prob(m, w); }

/// Anything mapping words to a probability vector over its own label set.
template <class P>
concept LabelingProcess = requires(const P& proc, std::string_view w) {
  { process_labels(proc) } -> std::convertible_to<const LabelSet&>;
  { label_probabilities(proc, w) } -> std::convertible_to<std::vector<double>>;
};

/// p_fail = 1 - sum_w mu(w) Pr[label(w) | w] over the promised words of a
/// finite problem. mu is uniform unless `weights` (aligned with
/// promised_words(p), summing to 1) is given.
template <LabelingProcess P>
double failure_probability(const P& proc, const PromiseProblem& p, const std::vector<double>* weights = nullptr) {
  const auto words = promised_words(p);
  if (words.empty()) throw std::invalid_argument("failure_probability: no promised words");
  if (weights && weights->size() != words.size())
    throw std::invalid_argument("failure_probability: weight table size mismatch");
  const auto to_proc = detail::map_labels(p.labels(), process_labels(proc));
  const double uniform = 1.0 / static_cast<double>(words.size());
  double success = 0.0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const int l = to_proc[words[i].label];
    if (l == kUnlabeled) continue;
    const auto probs = label_probabilities(proc, words[i].word);
    success += (weights ? (*weights)[i] : uniform) * probs[static_cast<std::size_t>(l)];
  }
  return std::clamp(1.0 - success, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Canonical machines

namespace detail {
inline Pvdfa loop_dfa(const PromiseProblem& p, std::size_t size, const std::vector<std::size_t>& steps,
                      const std::vector<std::pair<std::size_t, std::size_t>>& labeled_positions) {
  std::vector<std::vector<std::size_t>> delta(size, std::vector<std::size_t>(steps.size()));
  for (std::size_t s = 0; s < size; ++s)
    for (std::size_t a = 0; a < steps.size(); ++a) delta[s][a] = (s + steps[a]) % size;
  std::vector<int> labels(size, kUnlabeled);
  for (auto [pos, label] : labeled_positions) labels[pos] = static_cast<int>(label);
  return Pvdfa(p.alphabet(), p.labels(), std::move(delta), 0, std::move(labels));
}
}  // namespace detail

/// Reference pvDFA for each family: a 2^{k+1} loop for EO and DIOF, the
/// six-state stabilizer machine for CL, a product of loops for NEO and a
/// q^{m_q+1} loop for GEO.
inline Pvdfa canonical_dfa(const PromiseProblem& p) {
  return std::visit(
      [&](const auto& f) -> Pvdfa {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, family::EvenOdd>) {
          const std::size_t half = std::size_t{1} << f.k;
          return detail::loop_dfa(p, 2 * half, {1}, {{0, 0}, {half, 1}});
        } else if constexpr (std::is_same_v<F, family::Diophantine>) {
          const std::size_t half = std::size_t{1} << f.k;
          std::vector<std::size_t> steps;
          for (unsigned j = 0; j < f.k; ++j) steps.push_back(std::size_t{1} << j);
          return detail::loop_dfa(p, 2 * half, steps, {{0, 0}, {half, 1}});
        } else if constexpr (std::is_same_v<F, family::Clifford>) {
          std::vector<std::vector<std::size_t>> delta(6, std::vector<std::size_t>(2));
          for (std::size_t s = 0; s < 6; ++s)
            for (std::size_t a = 0; a < 2; ++a) delta[s][a] = kCliffordTable[s][a];
          std::vector<int> labels(6, kUnlabeled);
          labels[static_cast<std::size_t>(StabilizerState::kPlus)] = 0;
          labels[static_cast<std::size_t>(StabilizerState::kMinus)] = 1;
          return Pvdfa(p.alphabet(), p.labels(), std::move(delta), static_cast<std::size_t>(StabilizerState::kPlus),
                       std::move(labels));
        } else if constexpr (std::is_same_v<F, family::MultiEvenOdd>) {
          const std::size_t bits = static_cast<std::size_t>(f.n) * (f.k + 1);
          if (bits > 20) throw std::invalid_argument("canonical_dfa: neo machine would exceed 2^20 states");
          const std::size_t radix = std::size_t{2} << f.k;
          const std::size_t half = radix / 2;
          const std::size_t size = std::size_t{1} << bits;
          std::vector<std::vector<std::size_t>> delta(size, std::vector<std::size_t>(f.n));
          std::vector<int> labels(size, kUnlabeled);
          for (std::size_t s = 0; s < size; ++s) {
            // digit j (symbol j) has place value radix^{n-1-j}
            std::size_t rest = s, place = size, label = 0;
            bool labeled = true;
            for (unsigned j = 0; j < f.n; ++j) {
              place /= radix;
              const std::size_t digit = rest / place;
              rest %= place;
              delta[s][j] = s - digit * place + ((digit + 1) % radix) * place;
              label <<= 1;
              if (digit == half) label |= 1;
              else if (digit != 0) labeled = false;
            }
            if (labeled) labels[s] = static_cast<int>(label);
          }
          return Pvdfa(p.alphabet(), p.labels(), std::move(delta), 0, std::move(labels));
        } else {
          std::size_t size = 1;
          for (unsigned e = 0; e <= f.m_q; ++e) size *= f.q;
          std::vector<std::pair<std::size_t, std::size_t>> marks;
          for (unsigned j = 0; j < f.q; ++j) marks.emplace_back((static_cast<std::size_t>(j) * f.r) % size, j);
          return detail::loop_dfa(p, size, {1}, marks);
        }
      },
      p.family());
}

// ---------------------------------------------------------------------------
// Optimal two-state pvPFA on restricted EO^1

/// T = [[x, y], [1-x, 1-y]] (column-stochastic), start in state 0.
struct TwoStatePfa {
  double x = 0.0;
  double y = 0.0;
  std::array<int, 2> state_labels{0, 1};  // label index (0 = y, 1 = n) per state
  double p_fail = 0.0;
};

inline Pvpfa to_pvpfa(const TwoStatePfa& m) {
  Eigen::MatrixXd t(2, 2);
  t << m.x, m.y, 1.0 - m.x, 1.0 - m.y;
  Eigen::VectorXd pi(2);
  pi << 1.0, 0.0;
  return Pvpfa(Alphabet("s"), LabelSet::yes_no(), {t}, pi, {m.state_labels[0], m.state_labels[1]});
}

/// Closed-form classical floor (i_max - ceil(i_max/2)) / (i_max + 1).
inline double two_state_pfa_floor(std::size_t i_max) {
  return static_cast<double>(i_max - (i_max + 1) / 2) / static_cast<double>(i_max + 1);
}

namespace detail {
// Uniform-mu failure probability of the two-state machine on EO^1_{i_max}.
inline double two_state_pfail(double x, double y, const std::array<int, 2>& labels, std::size_t i_max) {
  double p0 = 1.0;  // probability of state 0
  double fail = 0.0;
  for (std::size_t i = 0; i <= i_max; ++i) {
    const int want = static_cast<int>(i % 2);
    const double correct = (labels[0] == want ? p0 : 0.0) + (labels[1] == want ? 1.0 - p0 : 0.0);
    fail += 1.0 - correct;
    for (int step = 0; step < 2; ++step) p0 = x * p0 + y * (1.0 - p0);
  }
  return fail / static_cast<double>(i_max + 1);
}

template <class F>
double golden_min(F&& f, double lo, double hi, double& arg, int iters = 80) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  arg = fc <= fd ? c : d;
  return std::min(fc, fd);
}
}  // namespace detail

/// Minimizes the uniform failure probability of a two-state pvPFA on
/// EO^1_{i_max} over (x, y) in [0,1]^2 and all four {y,n} state labelings:
/// a step-`grid_step` grid search followed by golden-section coordinate
/// refinement around the best grid point.
inline TwoStatePfa optimal_two_state_pfa(std::size_t i_max, double grid_step = 1e-3) {
  if (i_max < 1) throw std::invalid_argument("optimal_two_state_pfa: i_max must be >= 1");
  const auto n = static_cast<std::size_t>(std::llround(1.0 / grid_step));
  TwoStatePfa best;
  best.p_fail = 2.0;
  for (int la = 0; la < 2; ++la) {
    for (int lb = 0; lb < 2; ++lb) {
      const std::array<int, 2> labels{la, lb};
      for (std::size_t ix = 0; ix <= n; ++ix) {
        const double x = static_cast<double>(ix) / static_cast<double>(n);
        for (std::size_t iy = 0; iy <= n; ++iy) {
          const double y = static_cast<double>(iy) / static_cast<double>(n);
          const double v = detail::two_state_pfail(x, y, labels, i_max);
          if (v < best.p_fail) best = {x, y, labels, v};
        }
      }
    }
  }
  for (int round = 0; round < 4; ++round) {
    double arg = best.x;
    const double vx = detail::golden_min(
        [&](double x) { return detail::two_state_pfail(x, best.y, best.state_labels, i_max); },
        std::max(0.0, best.x - grid_step), std::min(1.0, best.x + grid_step), arg);
    if (vx < best.p_fail) {
      best.x = arg;
      best.p_fail = vx;
    }
    arg = best.y;
    const double vy = detail::golden_min(
        [&](double y) { return detail::two_state_pfail(best.x, y, best.state_labels, i_max); },
        std::max(0.0, best.y - grid_step), std::min(1.0, best.y + grid_step), arg);
    if (vy < best.p_fail) {
      best.y = arg;
      best.p_fail = vy;
    }
  }
  return best;
}

}  // namespace qcert
