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

// Promise-problem families, their label oracles and word generators.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qcert {

/// Words are plain symbol strings; the empty string is the empty word.
using Word = std::string;

class Alphabet {
 public:
  explicit Alphabet(std::string symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw std::invalid_argument("Alphabet: empty");
    for (std::size_t i = 0; i < symbols_.size(); ++i)
      if (symbols_.find(symbols_[i], i + 1) != std::string::npos)
        throw std::invalid_argument("Alphabet: duplicate symbol");
  }

  std::size_t size() const { return symbols_.size(); }
  char symbol(std::size_t i) const { return symbols_.at(i); }
  const std::string& symbols() const { return symbols_; }

  std::optional<std::size_t> index_of(char c) const {
    const auto pos = symbols_.find(c);
    if (pos == std::string::npos) return std::nullopt;
    return pos;
  }

  std::size_t require_index(char c) const {
    const auto idx = index_of(c);
    if (!idx) throw std::invalid_argument(std::string("symbol '") + c + "' not in alphabet \"" + symbols_ + "\"");
    return *idx;
  }

  void require_word(std::string_view w) const {
    for (char c : w) (void)require_index(c);
  }

  bool operator==(const Alphabet&) const = default;

 private:
  std::string symbols_;
};

class LabelSet {
 public:
  explicit LabelSet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw std::invalid_argument("LabelSet: empty");
    for (std::size_t i = 0; i < names_.size(); ++i)
      for (std::size_t j = i + 1; j < names_.size(); ++j)
        if (names_[i] == names_[j]) throw std::invalid_argument("LabelSet: duplicate label");
  }

  static LabelSet yes_no() { return LabelSet({"y", "n"}); }

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    return std::nullopt;
  }

  bool operator==(const LabelSet&) const = default;

 private:
  std::vector<std::string> names_;
};

struct LabeledWord {
  Word word;
  std::size_t label = 0;
  bool operator==(const LabeledWord&) const = default;
};

/// Shorter words first, then lexicographic in alphabet order.
inline bool length_lex_less(const Alphabet& a, const Word& x, const Word& y) {
  if (x.size() != y.size()) return x.size() < y.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto ix = a.require_index(x[i]);
    const auto iy = a.require_index(y[i]);
    if (ix != iy) return ix < iy;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Exact stabilizer-orbit tracking for the {sqrt(Z), H} problem.

enum class StabilizerState : std::uint8_t { kZero, kOne, kPlus, kMinus, kPlusY, kMinusY };

namespace detail {
struct Bloch {
  int x, y, z;
  bool operator==(const Bloch&) const = default;
};

constexpr std::array<Bloch, 6> kStabilizerBloch{{{0, 0, 1}, {0, 0, -1}, {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}}};

constexpr std::size_t bloch_index(Bloch b) {
  for (std::size_t i = 0; i < kStabilizerBloch.size(); ++i)
    if (kStabilizerBloch[i] == b) return i;
  return kStabilizerBloch.size();
}

// Transition table over the six stabilizer states, derived from the integer
// Bloch-sphere action of sqrt(Z) (quarter turn about z) and H (x <-> z, y -> -y).
constexpr std::array<std::array<std::uint8_t, 2>, 6> make_clifford_table() {
  std::array<std::array<std::uint8_t, 2>, 6> table{};
  for (std::size_t i = 0; i < 6; ++i) {
    const Bloch b = kStabilizerBloch[i];
    table[i][0] = static_cast<std::uint8_t>(bloch_index({-b.y, b.x, b.z}));
    table[i][1] = static_cast<std::uint8_t>(bloch_index({b.z, -b.y, b.x}));
  }
  return table;
}
}  // namespace detail

/// Rows: stabilizer state; columns: symbol 's' (sqrt Z) then 'h' (Hadamard).
inline constexpr auto kCliffordTable = detail::make_clifford_table();

inline StabilizerState clifford_track(std::string_view word, StabilizerState start = StabilizerState::kPlus) {
  auto s = static_cast<std::uint8_t>(start);
  for (char c : word) {
    if (c == 's') s = kCliffordTable[s][0];
    else if (c == 'h') s = kCliffordTable[s][1];
    else throw std::invalid_argument(std::string("symbol '") + c + "' not in alphabet \"sh\"");
  }
  return static_cast<StabilizerState>(s);
}

// ---------------------------------------------------------------------------
// Families

namespace family {
struct EvenOdd {
  unsigned k = 1;
  bool operator==(const EvenOdd&) const = default;
};
struct Diophantine {
  unsigned k = 1;
  bool operator==(const Diophantine&) const = default;
};
struct Clifford {
  bool operator==(const Clifford&) const = default;
};
struct MultiEvenOdd {
  unsigned n = 1;
  unsigned k = 1;
  bool operator==(const MultiEvenOdd&) const = default;
};
struct GeneralizedEvenOdd {
  unsigned q = 2;
  unsigned r = 1;
  unsigned m_q = 0;  // largest m with q^m | r
  bool operator==(const GeneralizedEvenOdd&) const = default;
};
}  // namespace family

using Family = std::variant<family::EvenOdd, family::Diophantine, family::Clifford, family::MultiEvenOdd,
                            family::GeneralizedEvenOdd>;

/// Length bounds; a restriction only removes words.
struct Restriction {
  std::optional<std::size_t> max_index;   // unary families: sigma^{i * stride} with i <= max_index
  std::optional<std::size_t> max_length;  // |w| <= max_length
  bool operator==(const Restriction&) const = default;
};

/// Unary families promise exactly the words sigma^{i * stride}, labeled by a
/// pattern that repeats with period label_cycle.size().
struct UnaryStructure {
  std::size_t stride = 1;
  std::vector<std::size_t> label_cycle;
  std::optional<std::size_t> max_index;  // combined index bound, if restricted

  std::size_t label_period() const { return label_cycle.size(); }
  std::size_t label_at(std::size_t i) const { return label_cycle[i % label_cycle.size()]; }
};

namespace detail {
inline bool is_prime(unsigned q) {
  if (q < 2) return false;
  for (unsigned d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

inline std::uint64_t pow_u64(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Gate-root names for DIOF symbols: weight 2^{j-1} <-> (2^{k-j+1})-th root of Z.
inline constexpr std::string_view kRootNames = "zyxwvuts";
}  // namespace detail

class PromiseProblem {
 public:
  PromiseProblem(Family f, Alphabet a, LabelSet l, Restriction r = {})
      : family_(std::move(f)), alphabet_(std::move(a)), labels_(std::move(l)), restriction_(r) {}

  const Family& family() const { return family_; }
  const Alphabet& alphabet() const { return alphabet_; }
  const LabelSet& labels() const { return labels_; }
  const Restriction& restriction() const { return restriction_; }

  /// True when the promised set is finite.
  bool is_finite() const {
    if (restriction_.max_length) return true;
    return restriction_.max_index.has_value() && unary_structure().has_value();
  }

  std::optional<UnaryStructure> unary_structure() const {
    UnaryStructure u;
    if (const auto* eo = std::get_if<family::EvenOdd>(&family_)) {
      u.stride = std::size_t{1} << eo->k;
      u.label_cycle = {0, 1};
    } else if (const auto* d = std::get_if<family::Diophantine>(&family_); d && d->k == 1) {
      u.stride = 2;
      u.label_cycle = {0, 1};
    } else if (const auto* m = std::get_if<family::MultiEvenOdd>(&family_); m && m->n == 1) {
      u.stride = std::size_t{1} << m->k;
      u.label_cycle = {0, 1};
    } else if (const auto* g = std::get_if<family::GeneralizedEvenOdd>(&family_)) {
      u.stride = g->r;
      u.label_cycle.resize(g->q);
      for (unsigned j = 0; j < g->q; ++j) u.label_cycle[j] = j;
    } else {
      return std::nullopt;
    }
    u.max_index = restriction_.max_index;
    if (restriction_.max_length) {
      const std::size_t by_len = *restriction_.max_length / u.stride;
      u.max_index = u.max_index ? std::min(*u.max_index, by_len) : by_len;
    }
    return u;
  }

  /// Label index of a promised word, nullopt outside the promise.
  std::optional<std::size_t> label_of(std::string_view w) const {
    alphabet_.require_word(w);
    if (restriction_.max_length && w.size() > *restriction_.max_length) return std::nullopt;
    if (auto u = unary_structure()) {
      if (w.size() % u->stride != 0) return std::nullopt;
      const std::size_t i = w.size() / u->stride;
      if (restriction_.max_index && i > *restriction_.max_index) return std::nullopt;
      return u->label_at(i);
    }
    return std::visit([&](const auto& f) { return label_of_family(f, w); }, family_);
  }

  /// Canonical descriptor string (see parse_problem).
  std::string descriptor() const {
    std::ostringstream os;
    std::visit(
        [&](const auto& f) {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, family::EvenOdd>) os << "eo:k=" << f.k;
          else if constexpr (std::is_same_v<F, family::Diophantine>) os << "diof:k=" << f.k;
          else if constexpr (std::is_same_v<F, family::Clifford>) os << "cl";
          else if constexpr (std::is_same_v<F, family::MultiEvenOdd>) os << "neo:n=" << f.n << ":k=" << f.k;
          else os << "geo:q=" << f.q << ":r=" << f.r;
        },
        family_);
    if (restriction_.max_index) os << ":imax=" << *restriction_.max_index;
    if (restriction_.max_length) os << ":len=" << *restriction_.max_length;
    return os.str();
  }

 private:
  std::optional<std::size_t> label_of_family(const family::EvenOdd&, std::string_view) const { return std::nullopt; }
  std::optional<std::size_t> label_of_family(const family::GeneralizedEvenOdd&, std::string_view) const {
    return std::nullopt;
  }

  std::optional<std::size_t> label_of_family(const family::Diophantine& f, std::string_view w) const {
    const std::uint64_t modulus = std::uint64_t{2} << f.k;
    std::uint64_t weight = 0;
    for (char c : w) weight = (weight + (std::uint64_t{1} << alphabet_.require_index(c))) % modulus;
    if (weight == 0) return 0;
    if (weight == modulus / 2) return 1;
    return std::nullopt;
  }

  std::optional<std::size_t> label_of_family(const family::Clifford&, std::string_view w) const {
    const auto s = clifford_track(w);
    if (s == StabilizerState::kPlus) return 0;
    if (s == StabilizerState::kMinus) return 1;
    return std::nullopt;
  }

  std::optional<std::size_t> label_of_family(const family::MultiEvenOdd& f, std::string_view w) const {
    const std::size_t modulus = std::size_t{2} << f.k;
    std::vector<std::size_t> counts(f.n, 0);
    for (char c : w) {
      auto& cnt = counts[alphabet_.require_index(c)];
      cnt = (cnt + 1) % modulus;
    }
    std::size_t label = 0;
    for (std::size_t j = 0; j < f.n; ++j) {
      label <<= 1;
      if (counts[j] == modulus / 2) label |= 1;
      else if (counts[j] != 0) return std::nullopt;
    }
    return label;
  }

  Family family_;
  Alphabet alphabet_;
  LabelSet labels_;
  Restriction restriction_;
};

// ---------------------------------------------------------------------------
// Constructors

inline PromiseProblem make_eo(unsigned k) {
  if (k < 1 || k > 30) throw std::invalid_argument("eo: k must be in 1..30");
  return PromiseProblem(family::EvenOdd{k}, Alphabet("s"), LabelSet::yes_no());
}

/// Symbol j (weight 2^{j-1}) is named after its gate root, so k = 2 yields
/// the alphabet "ts" with a_t = 1 and a_s = 2.
inline PromiseProblem make_diof(unsigned k) {
  if (k < 1 || k > detail::kRootNames.size()) throw std::invalid_argument("diof: k must be in 1..8");
  const auto names = detail::kRootNames.substr(detail::kRootNames.size() - k);
  return PromiseProblem(family::Diophantine{k}, Alphabet(std::string(names)), LabelSet::yes_no());
}

inline PromiseProblem make_cl() { return PromiseProblem(family::Clifford{}, Alphabet("sh"), LabelSet::yes_no()); }

/// Symbols 'a', 'b', ...; labels are bit strings b_1..b_N.
inline PromiseProblem make_neo(unsigned n, unsigned k) {
  if (n < 1 || n > 8) throw std::invalid_argument("neo: n must be in 1..8");
  if (k < 1 || k > 16) throw std::invalid_argument("neo: k must be in 1..16");
  std::string symbols;
  for (unsigned j = 0; j < n; ++j) symbols.push_back(static_cast<char>('a' + j));
  std::vector<std::string> labels;
  for (std::size_t b = 0; b < (std::size_t{1} << n); ++b) {
    std::string name;
    for (unsigned j = 0; j < n; ++j) name.push_back(((b >> (n - 1 - j)) & 1U) ? '1' : '0');
    labels.push_back(name);
  }
  return PromiseProblem(family::MultiEvenOdd{n, k}, Alphabet(symbols), LabelSet(labels));
}

inline PromiseProblem make_geo(unsigned q, unsigned r) {
  if (!detail::is_prime(q)) throw std::invalid_argument("geo: q must be prime");
  if (r < 1) throw std::invalid_argument("geo: r must be >= 1");
  unsigned m = 0;
  for (unsigned rr = r; rr % q == 0; rr /= q) ++m;
  std::vector<std::string> labels;
  for (unsigned j = 0; j < q; ++j) labels.push_back(std::to_string(j));
  return PromiseProblem(family::GeneralizedEvenOdd{q, r, m}, Alphabet("s"), LabelSet(labels));
}

/// Intersects the promised set with the given bounds; labels are unchanged.
inline PromiseProblem restrict(const PromiseProblem& p, Restriction bound) {
  Restriction r = p.restriction();
  auto tighten = [](std::optional<std::size_t>& cur, std::optional<std::size_t> b) {
    if (b) cur = cur ? std::min(*cur, *b) : *b;
  };
  if (bound.max_index && !p.unary_structure())
    throw std::invalid_argument("restrict: index bound requires a unary family");
  tighten(r.max_index, bound.max_index);
  tighten(r.max_length, bound.max_length);
  return PromiseProblem(p.family(), p.alphabet(), p.labels(), r);
}

inline PromiseProblem restrict_index(const PromiseProblem& p, std::size_t i_max) {
  return restrict(p, Restriction{i_max, std::nullopt});
}

inline PromiseProblem restrict_length(const PromiseProblem& p, std::size_t max_len) {
  return restrict(p, Restriction{std::nullopt, max_len});
}

// ---------------------------------------------------------------------------
// Enumeration

/// Every promised word of length <= max_len, in length-lexicographic order.
inline std::vector<LabeledWord> enumerate_promised(const PromiseProblem& p, std::size_t max_len) {
  std::vector<LabeledWord> out;
  if (p.restriction().max_length) max_len = std::min(max_len, *p.restriction().max_length);
  if (const auto u = p.unary_structure()) {
    const char sym = p.alphabet().symbol(0);
    for (std::size_t i = 0; i * u->stride <= max_len; ++i) {
      if (u->max_index && i > *u->max_index) break;
      out.push_back({Word(i * u->stride, sym), u->label_at(i)});
    }
    return out;
  }
  const auto& a = p.alphabet();
  const std::size_t m = a.size();
  for (std::size_t len = 0; len <= max_len; ++len) {
    std::vector<std::size_t> digits(len, 0);
    Word w(len, a.symbol(0));
    bool more = true;
    while (more) {
      if (auto l = p.label_of(w)) out.push_back({w, *l});
      more = false;
      for (std::size_t pos = len; pos-- > 0;) {
        if (++digits[pos] < m) {
          w[pos] = a.symbol(digits[pos]);
          more = true;
          break;
        }
        digits[pos] = 0;
        w[pos] = a.symbol(0);
      }
    }
  }
  return out;
}

/// All promised words of a finite (restricted) problem.
inline std::vector<LabeledWord> promised_words(const PromiseProblem& p) {
  if (!p.is_finite()) throw std::invalid_argument("promised_words: problem " + p.descriptor() + " is not restricted");
  if (const auto u = p.unary_structure(); u && u->max_index) return enumerate_promised(p, *u->max_index * u->stride);
  return enumerate_promised(p, *p.restriction().max_length);
}

/// Reduced word sets for restricted EO^k that determine the same minimal
/// pvDFA size: for odd i_max keep {eps, sigma^{2*2^k}} as yes-words plus all
/// odd-index no-words; for even i_max keep all even-index yes-words plus
/// sigma^{2^k}.
inline std::vector<LabeledWord> reduced_eo_words(unsigned k, std::size_t i_max) {
  if (k < 1 || k > 30) throw std::invalid_argument("reduced_eo_words: k must be in 1..30");
  const std::size_t stride = std::size_t{1} << k;
  if (i_max > 2 * stride) throw std::invalid_argument("reduced_eo_words: i_max must be <= 2^{k+1}");
  std::vector<std::size_t> yes, no;
  if (i_max % 2 == 1) {
    yes = {0, 2};
    for (std::size_t i = 1; i <= i_max; i += 2) no.push_back(i);
  } else {
    for (std::size_t i = 0; i <= i_max; i += 2) yes.push_back(i);
    no = {1};
  }
  std::vector<LabeledWord> out;
  for (auto i : yes) out.push_back({Word(i * stride, 's'), 0});
  for (auto i : no) out.push_back({Word(i * stride, 's'), 1});
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.word.size() < y.word.size(); });
  return out;
}

// ---------------------------------------------------------------------------
// Descriptor grammar:
//   eo:k=<int>[:imax=<int>]  diof:k=<int>  cl  neo:n=<int>:k=<int>
//   geo:q=<int>:r=<int>[:imax=<int>]     any of them with suffix [:len=<int>]

inline PromiseProblem parse_problem(std::string_view text) {
  std::vector<std::string> parts;
  {
    std::string cur;
    for (char c : text) {
      if (c == ':') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    parts.push_back(cur);
  }
  const std::string name = parts.front();
  std::optional<unsigned> k, n, q, r;
  Restriction bound;
  auto parse_uint = [&](const std::string& key, const std::string& v) -> std::size_t {
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("problem descriptor: bad value for '" + key + "' in \"" + std::string(text) + "\"");
    return static_cast<std::size_t>(std::stoull(v));
  };
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("problem descriptor: expected key=value, got \"" + parts[i] + "\"");
    const std::string key = parts[i].substr(0, eq);
    const std::size_t v = parse_uint(key, parts[i].substr(eq + 1));
    auto set = [&](std::optional<unsigned>& slot) {
      if (slot) throw std::invalid_argument("problem descriptor: duplicate key '" + key + "'");
      slot = static_cast<unsigned>(v);
    };
    if (key == "k") set(k);
    else if (key == "n") set(n);
    else if (key == "q") set(q);
    else if (key == "r") set(r);
    else if (key == "imax") bound.max_index = v;
    else if (key == "len") bound.max_length = v;
    else throw std::invalid_argument("problem descriptor: unknown key '" + key + "'");
  }
  auto need = [&](const std::optional<unsigned>& v, const char* key) {
    if (!v) throw std::invalid_argument("problem descriptor: '" + name + "' requires " + key);
    return *v;
  };
  auto forbid = [&](bool present, const char* key) {
    if (present) throw std::invalid_argument("problem descriptor: '" + name + "' does not take " + key);
  };
  PromiseProblem p = [&] {
    if (name == "eo") {
      forbid(n || q || r, "n/q/r");
      return make_eo(need(k, "k"));
    }
    if (name == "diof") {
      forbid(n || q || r || bound.max_index, "n/q/r/imax");
      return make_diof(need(k, "k"));
    }
    if (name == "cl") {
      forbid(k || n || q || r || bound.max_index, "k/n/q/r/imax");
      return make_cl();
    }
    if (name == "neo") {
      forbid(q || r || bound.max_index, "q/r/imax");
      return make_neo(need(n, "n"), need(k, "k"));
    }
    if (name == "geo") {
      forbid(k || n, "k/n");
      return make_geo(need(q, "q"), need(r, "r"));
    }
    throw std::invalid_argument("problem descriptor: unknown family \"" + name + "\"");
  }();
  if (bound.max_index || bound.max_length) p = restrict(p, bound);
  return p;
}

}  // namespace qcert
