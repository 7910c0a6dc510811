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

// Measure-once quantum finite automata and general (noisy) quantum models.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qcert/automata.hpp"
#include "qcert/promise.hpp"
#include "qcert/qcore.hpp"

namespace qcert {

class Qfa {
 public:
  /// unitaries[a] acts for alphabet symbol a; basis_labels[i] is the label
  /// index of basis state i or kUnlabeled.
  Qfa(Alphabet alphabet, LabelSet labels, std::vector<PureState> basis, std::vector<Matrix> unitaries,
      PureState initial, std::vector<int> basis_labels, const Tolerances& tol = kDefaultTolerances)
      : alphabet_(std::move(alphabet)),
        labels_(std::move(labels)),
        basis_(std::move(basis)),
        unitaries_(std::move(unitaries)),
        initial_(std::move(initial)),
        basis_labels_(std::move(basis_labels)) {
    const std::size_t d = initial_.dim();
    if (basis_.size() != d) throw std::invalid_argument("Qfa: basis must have one state per dimension");
    for (std::size_t i = 0; i < d; ++i) {
      if (basis_[i].dim() != d) throw std::invalid_argument("Qfa: basis state dimension mismatch");
      for (std::size_t j = 0; j < d; ++j) {
        const double ov = std::abs(basis_[i].amplitudes().dot(basis_[j].amplitudes()));
        if (std::abs(ov - (i == j ? 1.0 : 0.0)) > tol.validity) throw std::invalid_argument("Qfa: basis not orthonormal");
      }
    }
    if (unitaries_.size() != alphabet_.size()) throw std::invalid_argument("Qfa: one unitary per symbol required");
    for (const auto& u : unitaries_) {
      if (static_cast<std::size_t>(u.rows()) != d || static_cast<std::size_t>(u.cols()) != d)
        throw std::invalid_argument("Qfa: unitary dimension mismatch");
      if (!is_unitary(u, tol.validity)) throw std::invalid_argument("Qfa: transition is not unitary");
    }
    if (basis_labels_.size() != d) throw std::invalid_argument("Qfa: one label entry per basis state");
    for (int l : basis_labels_)
      if (l != kUnlabeled && (l < 0 || static_cast<std::size_t>(l) >= labels_.size()))
        throw std::invalid_argument("Qfa: label index out of range");
  }

  std::size_t dim() const { return initial_.dim(); }
  const Alphabet& alphabet() const { return alphabet_; }
  const LabelSet& labels() const { return labels_; }
  const std::vector<PureState>& basis() const { return basis_; }
  const std::vector<Matrix>& unitaries() const { return unitaries_; }
  const Matrix& unitary(std::size_t symbol) const { return unitaries_.at(symbol); }
  const PureState& initial() const { return initial_; }
  const std::vector<int>& basis_labels() const { return basis_labels_; }

  /// Projector onto the span of the basis states carrying `label`.
  Matrix projector(std::size_t label) const {
    const auto d = static_cast<Eigen::Index>(dim());
    Matrix p = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (basis_labels_[i] == static_cast<int>(label)) p += basis_[i].projector();
    return p;
  }

  Vector evolve(std::string_view w) const {
    Vector psi = initial_.amplitudes();
    for (char c : w) psi = unitaries_[alphabet_.require_index(c)] * psi;
    return psi;
  }

 private:
  Alphabet alphabet_;
  LabelSet labels_;
  std::vector<PureState> basis_;
  std::vector<Matrix> unitaries_;
  PureState initial_;
  std::vector<int> basis_labels_;
};

inline std::vector<double> qfa_probabilities_of(const Qfa& q, const Vector& psi) {
  std::vector<double> out(q.labels().size(), 0.0);
  for (std::size_t i = 0; i < q.basis().size(); ++i)
    if (q.basis_labels()[i] != kUnlabeled)
      out[static_cast<std::size_t>(q.basis_labels()[i])] += std::norm(q.basis()[i].amplitudes().dot(psi));
  return out;
}

inline const LabelSet& process_labels(const Qfa& q) { return q.labels(); }
inline std::vector<double> label_probabilities(const Qfa& q, std::string_view w) {
  return qfa_probabilities_of(q, q.evolve(w));
}

class QuantumModel {
 public:
  /// channels[a] acts for alphabet symbol a; povm[l] is the effect of label l.
  QuantumModel(Alphabet alphabet, LabelSet labels, DensityMatrix rho, std::vector<KrausChannel> channels,
               std::vector<Matrix> povm, const Tolerances& tol = kDefaultTolerances)
      : alphabet_(std::move(alphabet)),
        labels_(std::move(labels)),
        rho_(std::move(rho)),
        channels_(std::move(channels)),
        povm_(std::move(povm)) {
    const auto d = static_cast<Eigen::Index>(rho_.dim());
    if (channels_.size() != alphabet_.size()) throw std::invalid_argument("QuantumModel: one channel per symbol");
    for (const auto& ch : channels_)
      if (ch.dim_in() != rho_.dim() || ch.dim_out() != rho_.dim())
        throw std::invalid_argument("QuantumModel: channel dimension mismatch");
    if (povm_.size() != labels_.size()) throw std::invalid_argument("QuantumModel: one POVM effect per label");
    Matrix rest = Matrix::Identity(d, d);
    for (const auto& m : povm_) {
      if (m.rows() != d || m.cols() != d) throw std::invalid_argument("QuantumModel: POVM effect dimension mismatch");
      require_finite(m, "QuantumModel");
      if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol.validity)
        throw std::invalid_argument("QuantumModel: POVM effect not Hermitian");
      if (min_hermitian_eigenvalue(m) < -tol.validity)
        throw std::invalid_argument("QuantumModel: POVM effect not positive");
      rest -= m;
    }
    if (min_hermitian_eigenvalue(rest) < -tol.validity)
      throw std::invalid_argument("QuantumModel: POVM effects sum exceeds identity");
  }

  std::size_t dim() const { return rho_.dim(); }
  const Alphabet& alphabet() const { return alphabet_; }
  const LabelSet& labels() const { return labels_; }
  const DensityMatrix& rho() const { return rho_; }
  const std::vector<KrausChannel>& channels() const { return channels_; }
  const KrausChannel& channel(std::size_t symbol) const { return channels_.at(symbol); }
  const std::vector<Matrix>& povm() const { return povm_; }

  Matrix evolve(std::string_view w) const {
    Matrix r = rho_.matrix();
    for (char c : w) r = apply_kraus(channels_[alphabet_.require_index(c)], r);
    return r;
  }

  std::vector<double> probabilities_of(const Matrix& r) const {
    std::vector<double> out(povm_.size());
    for (std::size_t l = 0; l < povm_.size(); ++l) out[l] = (povm_[l] * r).trace().real();
    return out;
  }

 private:
  Alphabet alphabet_;
  LabelSet labels_;
  DensityMatrix rho_;
  std::vector<KrausChannel> channels_;
  std::vector<Matrix> povm_;
};

inline const LabelSet& process_labels(const QuantumModel& m) { return m.labels(); }
inline std::vector<double> label_probabilities(const QuantumModel& m, std::string_view w) {
  return m.probabilities_of(m.evolve(w));
}

/// Pure state, unitary channels, projective effects onto the labeled spans.
inline QuantumModel to_quantum_model(const Qfa& q) {
  std::vector<KrausChannel> channels;
  for (const auto& u : q.unitaries()) channels.push_back(KrausChannel::unitary(u));
  std::vector<Matrix> povm;
  for (std::size_t l = 0; l < q.labels().size(); ++l) povm.push_back(q.projector(l));
  return QuantumModel(q.alphabet(), q.labels(), DensityMatrix::from_pure(q.initial()), std::move(channels),
                      std::move(povm));
}

// ---------------------------------------------------------------------------
// Canonical QFAs

namespace detail {
inline Qfa plus_minus_qfa(const PromiseProblem& p, std::vector<Matrix> unitaries) {
  return Qfa(p.alphabet(), p.labels(), {states::plus(), states::minus()}, std::move(unitaries), states::plus(), {0, 1});
}
}  // namespace detail

/// Reference QFA for each family: a 2^k-th root of Z on |+> for EO; phase
/// gates with angles proportional to the symbol weights for DIOF; {sqrt(Z), H}
/// on |+> for CL; one EO qubit per symbol for NEO (symbol 'a' acts on the most
/// significant qubit); an r-th root of the clock matrix on Fourier states for
/// GEO.
inline Qfa make_canonical_qfa(const PromiseProblem& p) {
  return std::visit(
      [&](const auto& f) -> Qfa {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, family::EvenOdd>) {
          return detail::plus_minus_qfa(p, {gates::z_root(f.k)});
        } else if constexpr (std::is_same_v<F, family::Diophantine>) {
          std::vector<Matrix> us;
          for (unsigned j = 1; j <= f.k; ++j) us.push_back(gates::z_root(f.k - j + 1));
          return detail::plus_minus_qfa(p, std::move(us));
        } else if constexpr (std::is_same_v<F, family::Clifford>) {
          return detail::plus_minus_qfa(p, {gates::sqrt_z(), gates::h()});
        } else if constexpr (std::is_same_v<F, family::MultiEvenOdd>) {
          if (f.n > 10) throw std::invalid_argument("make_canonical_qfa: neo limited to 10 qubits");
          const std::size_t d = std::size_t{1} << f.n;
          std::vector<Matrix> us;
          for (unsigned j = 0; j < f.n; ++j) {
            Matrix u = Matrix::Identity(1, 1);
            for (unsigned m = 0; m < f.n; ++m) u = kron(u, m == j ? gates::z_root(f.k) : gates::identity());
            us.push_back(u);
          }
          std::vector<PureState> basis;
          std::vector<int> labels;
          for (std::size_t b = 0; b < d; ++b) {
            Vector v = Vector::Ones(1);
            for (unsigned m = 0; m < f.n; ++m) {
              const bool minus = (b >> (f.n - 1 - m)) & 1U;
              const Vector factor = (minus ? states::minus() : states::plus()).amplitudes();
              Vector next(v.size() * 2);
              for (Eigen::Index i = 0; i < v.size(); ++i) next.segment(2 * i, 2) = v(i) * factor;
              v = next;
            }
            basis.emplace_back(v);
            labels.push_back(static_cast<int>(b));
          }
          PureState init = basis.front();
          return Qfa(p.alphabet(), p.labels(), std::move(basis), std::move(us), std::move(init), std::move(labels));
        } else {
          const auto q = static_cast<Eigen::Index>(f.q);
          Matrix u = Matrix::Zero(q, q);
          for (Eigen::Index k = 0; k < q; ++k)
            u(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / (static_cast<double>(f.q) * f.r));
          std::vector<PureState> basis;
          std::vector<int> labels;
          for (Eigen::Index j = 0; j < q; ++j) {
            Vector v(q);
            for (Eigen::Index k = 0; k < q; ++k)
              v(k) = std::polar(1.0 / std::sqrt(static_cast<double>(f.q)),
                                2.0 * std::numbers::pi * static_cast<double>((j * k) % q) / static_cast<double>(f.q));
            basis.emplace_back(PureState::normalized(v));
            labels.push_back(static_cast<int>(j));
          }
          PureState init = basis.front();
          return Qfa(p.alphabet(), p.labels(), std::move(basis), {u}, std::move(init), std::move(labels));
        }
      },
      p.family());
}

// ---------------------------------------------------------------------------
// Solve checks with bounded error

struct ErrorVerdict {
  bool solves = false;
  std::optional<Word> counterexample;  // first word below the success threshold
  double min_success = 1.0;            // smallest Pr[correct label] seen
  std::size_t words_checked = 0;
  std::size_t budget_length = 0;
};

/// True iff every promised word of length <= max_length gets its correct
/// label with probability >= 1 - eps; eps = 0 is read as 1 - probability
/// tolerance.
template <LabelingProcess P>
ErrorVerdict solves_with_error(const P& proc, const PromiseProblem& p, double eps, std::size_t max_length,
                               const Tolerances& tol = kDefaultTolerances) {
  if (!(eps >= 0.0 && eps < 0.5)) throw std::invalid_argument("solves_with_error: eps must lie in [0, 1/2)");
  const double threshold = 1.0 - std::max(eps, tol.probability);
  const auto to_proc = detail::map_labels(p.labels(), process_labels(proc));
  ErrorVerdict v;
  v.budget_length = p.restriction().max_length ? std::min(max_length, *p.restriction().max_length) : max_length;
  for (const auto& lw : enumerate_promised(p, max_length)) {
    ++v.words_checked;
    const int l = to_proc[lw.label];
    const double success = l == kUnlabeled ? 0.0 : label_probabilities(proc, lw.word)[static_cast<std::size_t>(l)];
    v.min_success = std::min(v.min_success, success);
    if (success < threshold && !v.counterexample) v.counterexample = lw.word;
  }
  v.solves = !v.counterexample.has_value();
  return v;
}

// ---------------------------------------------------------------------------
// Orbit to DFA

/// Builds the pvDFA whose states are the distinct (up to global phase)
/// states U_w psi0. A state gets label a when its label-a probability is
/// >= 1 - state-equality tolerance. Throws when the orbit exceeds `cap`.
inline Pvdfa orbit_to_dfa(const Qfa& q, std::size_t cap = 10000, const Tolerances& tol = kDefaultTolerances) {
  std::vector<Vector> orbit{q.initial().amplitudes()};
  std::vector<std::vector<std::size_t>> delta;
  auto find = [&](const Vector& v) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < orbit.size(); ++i)
      if (std::abs(orbit[i].dot(v)) >= 1.0 - tol.state_equality) return i;
    return std::nullopt;
  };
  for (std::size_t h = 0; h < orbit.size(); ++h) {
    delta.emplace_back(q.alphabet().size());
    for (std::size_t a = 0; a < q.alphabet().size(); ++a) {
      Vector next = q.unitary(a) * orbit[h];
      next.normalize();
      if (auto idx = find(next)) {
        delta[h][a] = *idx;
      } else {
        if (orbit.size() >= cap)
          throw std::domain_error("orbit_to_dfa: orbit exceeds " + std::to_string(cap) + " states (presumed infinite)");
        orbit.push_back(next);
        delta[h][a] = orbit.size() - 1;
      }
    }
  }
  std::vector<int> labels(orbit.size(), kUnlabeled);
  for (std::size_t s = 0; s < orbit.size(); ++s) {
    const auto probs = qfa_probabilities_of(q, orbit[s]);
    for (std::size_t l = 0; l < probs.size(); ++l)
      if (probs[l] >= 1.0 - tol.state_equality) labels[s] = static_cast<int>(l);
  }
  return Pvdfa(q.alphabet(), q.labels(), std::move(delta), 0, std::move(labels));
}

// ---------------------------------------------------------------------------
// Two-state EO^k classifier

struct EoQfaClassification {
  bool valid = false;
  std::string reason;         // why the QFA was rejected
  long j = 0;                 // odd, in [0, 2^{k+1}) when valid
  bool conjugated = false;    // j > 2^k: matches the conjugate of a phase gate with j' = 2^{k+1} - j
  double alpha = 0.0;         // global phase: V U V^dagger = e^{i alpha} diag(1, e^{i pi j / 2^k})
  Matrix basis_change;        // V, maps psi0 to |+>
};

/// Decides whether a two-state single-symbol QFA is one of the admissible
/// EO^k solvers: the accept set is {psi0}, the eigenphase difference of U is
/// pi j / 2^k with j odd, and psi0 is unbiased in the eigenbasis of U. The
/// verdict is cross-checked by evaluating every promised word up to
/// `check_length`.
inline EoQfaClassification classify_eo_qfa(const Qfa& q, unsigned k, std::size_t check_length = 0,
                                           double tol = 1e-9) {
  EoQfaClassification out;
  if (q.dim() != 2) throw std::invalid_argument("classify_eo_qfa: QFA must have two basis states");
  if (q.alphabet().size() != 1) throw std::invalid_argument("classify_eo_qfa: QFA must have a single symbol");
  if (k < 1 || k > 30) throw std::invalid_argument("classify_eo_qfa: k must be in 1..30");
  const auto accept = q.labels().index_of("y");
  std::optional<std::size_t> accept_state;
  for (std::size_t i = 0; i < 2; ++i)
    if (accept && q.basis_labels()[i] == static_cast<int>(*accept)) {
      if (accept_state) {
        out.reason = "accept set has two states";
        return out;
      }
      accept_state = i;
    }
  if (!accept_state || !equal_up_to_phase(q.basis()[*accept_state], q.initial())) {
    out.reason = "accept set is not {psi0}";
    return out;
  }
  Eigen::ComplexEigenSolver<Matrix> es(q.unitary(0));
  std::array<Complex, 2> lambda{es.eigenvalues()(0), es.eigenvalues()(1)};
  std::array<Vector, 2> vecs{es.eigenvectors().col(0).normalized(), es.eigenvectors().col(1).normalized()};
  if (std::abs(lambda[0] - lambda[1]) < tol) {
    out.reason = "degenerate unitary (equal eigenphases)";
    return out;
  }
  // Order eigenvectors by weight on |0>, ties broken by eigenphase.
  const double w0 = std::norm(vecs[0](0)), w1 = std::norm(vecs[1](0));
  const bool swap = std::abs(w0 - w1) > tol ? w1 > w0 : std::arg(lambda[1]) < std::arg(lambda[0]);
  if (swap) {
    std::swap(lambda[0], lambda[1]);
    std::swap(vecs[0], vecs[1]);
  }
  const double phi = std::arg(lambda[1] / lambda[0]);
  const double scale = std::ldexp(1.0, static_cast<int>(k)) / std::numbers::pi;
  const double jr = phi * scale;
  const long jn = std::lround(jr);
  if (std::abs(phi - static_cast<double>(jn) / scale) > tol) {
    out.reason = "eigenphase difference is not a multiple of pi/2^k";
    return out;
  }
  const long modulus = 2L << k;
  out.j = ((jn % modulus) + modulus) % modulus;
  if (out.j % 2 == 0) {
    out.reason = "eigenphase index j is even";
    return out;
  }
  const Vector& psi0 = q.initial().amplitudes();
  std::array<Complex, 2> ov{vecs[0].dot(psi0), vecs[1].dot(psi0)};
  for (const auto& o : ov)
    if (std::abs(std::abs(o) - std::numbers::sqrt2 / 2.0) > tol) {
      out.reason = "psi0 is not unbiased in the eigenbasis";
      return out;
    }
  out.conjugated = out.j > (modulus / 2);
  out.alpha = std::arg(lambda[0]);
  out.basis_change = Matrix::Zero(2, 2);
  for (Eigen::Index i = 0; i < 2; ++i)
    out.basis_change.row(i) = (std::conj(ov[static_cast<std::size_t>(i)]) / std::abs(ov[static_cast<std::size_t>(i)])) *
                              vecs[static_cast<std::size_t>(i)].adjoint();
  if (check_length > 0) {
    const auto v = solves_with_error(q, make_eo(k), 0.0, check_length);
    if (!v.solves) {
      out.reason = "cross-check failed at word of length " + std::to_string(v.counterexample->size());
      return out;
    }
  }
  out.valid = true;
  return out;
}

}  // namespace qcert
