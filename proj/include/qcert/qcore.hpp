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

// Complex linear algebra and quantum primitives: states, density matrices,
// Kraus channels, Choi matrices and Haar sampling.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qcert {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Numerical tolerances shared by every module. Callers override them by
/// passing their own instance.
struct Tolerances {
  double validity = 1e-10;        // CPTP, Hermiticity, trace, positivity
  double state_equality = 1e-9;   // |<psi|phi>| >= 1 - tol
  double probability = 1e-12;     // probability comparisons
};

inline constexpr Tolerances kDefaultTolerances{};

inline bool all_finite(const Matrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

inline void require_finite(const Matrix& m, const char* what) {
  if (!all_finite(m)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
inline Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

inline double min_hermitian_eigenvalue(const Matrix& m) { return hermitian_eigenvalues(m).minCoeff(); }

/// Spectral norm of a Hermitian matrix.
inline double hermitian_norm(const Matrix& m) { return hermitian_eigenvalues(m).cwiseAbs().maxCoeff(); }

inline bool is_unitary(const Matrix& u, double tol = kDefaultTolerances.validity) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

// ---------------------------------------------------------------------------
// States

/// A pure state up to global phase.
class PureState {
 public:
  explicit PureState(Vector amplitudes) : amp_(std::move(amplitudes)) {
    if (amp_.size() == 0) throw std::invalid_argument("PureState: empty vector");
    require_finite(amp_, "PureState");
    if (std::abs(amp_.norm() - 1.0) > 1e-12) throw std::invalid_argument("PureState: norm differs from 1");
  }

  static PureState normalized(const Vector& v) {
    const double n = v.norm();
    if (!(n > 0.0)) throw std::invalid_argument("PureState: zero vector");
    return PureState(v / n);
  }

  static PureState basis(std::size_t dim, std::size_t index) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return PureState(std::move(v));
  }

  std::size_t dim() const { return static_cast<std::size_t>(amp_.size()); }
  const Vector& amplitudes() const { return amp_; }
  Matrix projector() const { return amp_ * amp_.adjoint(); }

 private:
  Vector amp_;
};

inline double overlap_abs(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("overlap: dimension mismatch");
  return std::abs(a.amplitudes().dot(b.amplitudes()));
}

/// Equality up to global phase.
inline bool equal_up_to_phase(const PureState& a, const PureState& b, const Tolerances& tol = kDefaultTolerances) {
  return a.dim() == b.dim() && overlap_abs(a, b) >= 1.0 - tol.state_equality;
}

namespace states {
inline PureState zero() { return PureState::basis(2, 0); }
inline PureState one() { return PureState::basis(2, 1); }
inline PureState plus() { return PureState::normalized(Vector{{1.0, 1.0}}); }
inline PureState minus() { return PureState::normalized(Vector{{1.0, -1.0}}); }
inline PureState plus_y() { return PureState::normalized(Vector{{1.0, kI}}); }
inline PureState minus_y() { return PureState::normalized(Vector{{1.0, -kI}}); }
}  // namespace states

/// Hermitian, unit trace, positive semidefinite (all within tolerance).
class DensityMatrix {
 public:
  struct Unchecked {};

  explicit DensityMatrix(Matrix m, const Tolerances& tol = kDefaultTolerances) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) throw std::invalid_argument("DensityMatrix: not square");
    require_finite(m_, "DensityMatrix");
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol.validity)
      throw std::domain_error("DensityMatrix: not Hermitian");
    if (std::abs(m_.trace() - 1.0) > tol.validity) throw std::domain_error("DensityMatrix: trace differs from 1");
    if (min_hermitian_eigenvalue(m_) < -tol.validity) throw std::domain_error("DensityMatrix: negative eigenvalue");
  }

  DensityMatrix(Matrix m, Unchecked) : m_(std::move(m)) {}

  static DensityMatrix from_pure(const PureState& psi) { return DensityMatrix(psi.projector(), Unchecked{}); }

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

// ---------------------------------------------------------------------------
// Channels

/// Kraus representation. Construction checks shapes only; CPTP-ness is
/// reported by validate_cptp so that invalid inputs can be diagnosed.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<Matrix> ops) : ops_(std::move(ops)) {
    if (ops_.empty()) throw std::invalid_argument("KrausChannel: no Kraus operators");
    dim_out_ = static_cast<std::size_t>(ops_.front().rows());
    dim_in_ = static_cast<std::size_t>(ops_.front().cols());
    if (dim_in_ == 0 || dim_out_ == 0) throw std::invalid_argument("KrausChannel: empty operator");
    for (const auto& k : ops_) {
      if (static_cast<std::size_t>(k.rows()) != dim_out_ || static_cast<std::size_t>(k.cols()) != dim_in_)
        throw std::invalid_argument("KrausChannel: inconsistent operator shapes");
      require_finite(k, "KrausChannel");
    }
  }

  static KrausChannel unitary(const Matrix& u) { return KrausChannel({u}); }
  static KrausChannel identity(std::size_t dim) {
    return KrausChannel({Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim))});
  }

  std::size_t dim_in() const { return dim_in_; }
  std::size_t dim_out() const { return dim_out_; }
  std::size_t rank() const { return ops_.size(); }
  const std::vector<Matrix>& ops() const { return ops_; }

 private:
  std::vector<Matrix> ops_;
  std::size_t dim_in_ = 0;
  std::size_t dim_out_ = 0;
};

/// `after` applied to the output of `before`.
inline KrausChannel compose(const KrausChannel& after, const KrausChannel& before) {
  if (after.dim_in() != before.dim_out()) throw std::invalid_argument("compose: dimension mismatch");
  std::vector<Matrix> ops;
  ops.reserve(after.rank() * before.rank());
  for (const auto& a : after.ops())
    for (const auto& b : before.ops()) ops.push_back(a * b);
  return KrausChannel(std::move(ops));
}

/// Raw action sum_i K_i rho K_i^dagger without validating the result.
inline Matrix apply_kraus(const KrausChannel& ch, const Matrix& rho) {
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(ch.dim_out()), static_cast<Eigen::Index>(ch.dim_out()));
  for (const auto& k : ch.ops()) out.noalias() += k * rho * k.adjoint();
  return out;
}

inline DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho,
                                   const Tolerances& tol = kDefaultTolerances) {
  if (ch.dim_in() != rho.dim()) throw std::invalid_argument("apply_channel: dimension mismatch");
  return DensityMatrix(apply_kraus(ch, rho.matrix()), tol);
}

/// Unnormalized Choi matrix C = sum_ij |i><j| (x) Lambda(|i><j|), trace d.
class ChoiMatrix {
 public:
  ChoiMatrix(std::size_t dim, Matrix m) : dim_(dim), m_(std::move(m)) {
    const auto n = static_cast<Eigen::Index>(dim * dim);
    if (m_.rows() != n || m_.cols() != n) throw std::invalid_argument("ChoiMatrix: size must be d^2 x d^2");
  }
  std::size_t dim() const { return dim_; }
  const Matrix& matrix() const { return m_; }

 private:
  std::size_t dim_;
  Matrix m_;
};

namespace detail {
// Choi matrix for a possibly non-square channel; rows indexed (input, output).
inline Matrix choi_matrix(const KrausChannel& ch) {
  const auto din = static_cast<Eigen::Index>(ch.dim_in());
  const auto dout = static_cast<Eigen::Index>(ch.dim_out());
  Matrix c = Matrix::Zero(din * dout, din * dout);
  Vector v(din * dout);
  for (const auto& k : ch.ops()) {
    for (Eigen::Index i = 0; i < din; ++i)
      for (Eigen::Index a = 0; a < dout; ++a) v(i * dout + a) = k(a, i);
    c.noalias() += v * v.adjoint();
  }
  return c;
}
}  // namespace detail

inline ChoiMatrix choi_of(const KrausChannel& ch) {
  if (ch.dim_in() != ch.dim_out()) throw std::invalid_argument("choi_of: non-square channel");
  return ChoiMatrix(ch.dim_in(), detail::choi_matrix(ch));
}

/// Channel action recovered from a Choi matrix: Tr_1[C (rho^T (x) I)].
inline Matrix apply_choi(const ChoiMatrix& c, const Matrix& rho) {
  const auto d = static_cast<Eigen::Index>(c.dim());
  if (rho.rows() != d || rho.cols() != d) throw std::invalid_argument("apply_choi: dimension mismatch");
  const Matrix prod = c.matrix() * kron(rho.transpose(), Matrix::Identity(d, d));
  Matrix out = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) out += prod.block(i * d, i * d, d, d);
  return out;
}

/// Partial transpose on the first (input) factor of a bipartite d x d operator.
inline Matrix partial_transpose_first(const Matrix& m, std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) out.block(j * d, i * d, d, d) = m.block(i * d, j * d, d, d);
  return out;
}

/// Tr[C_A C_B^dagger] computed from Kraus operators: sum_ij |Tr[A_i^dagger B_j]|^2.
inline double choi_overlap(const KrausChannel& a, const KrausChannel& b) {
  double s = 0.0;
  for (const auto& ka : a.ops())
    for (const auto& kb : b.ops()) s += std::norm((ka.adjoint() * kb).trace());
  return s;
}

struct CptpReport {
  double trace_defect = 0.0;         // || sum K^dagger K - I ||
  double min_choi_eigenvalue = 0.0;
  double positivity_defect = 0.0;    // max(0, -min_choi_eigenvalue)
  bool valid = false;
};

inline CptpReport validate_cptp(const KrausChannel& ch, const Tolerances& tol = kDefaultTolerances) {
  const auto din = static_cast<Eigen::Index>(ch.dim_in());
  Matrix e = -Matrix::Identity(din, din);
  for (const auto& k : ch.ops()) e.noalias() += k.adjoint() * k;
  CptpReport r;
  r.trace_defect = hermitian_norm(e);
  r.min_choi_eigenvalue = min_hermitian_eigenvalue(detail::choi_matrix(ch));
  r.positivity_defect = std::max(0.0, -r.min_choi_eigenvalue);
  r.valid = r.trace_defect <= tol.validity && r.positivity_defect <= tol.validity;
  return r;
}

// ---------------------------------------------------------------------------
// Seeding and sampling

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Per-index seed for reproducible parallel Monte Carlo.
inline std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) { return std::generate_canonical<double, 64>(rng); }

/// Standard normal via Box-Muller so draws do not depend on the library's
/// normal_distribution implementation.
inline double standard_normal(Rng& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Haar-random unitary: QR of a standard complex Gaussian matrix with the
/// diagonal of R made real-positive.
inline Matrix haar_unitary(std::size_t dim, Rng& rng) {
  if (dim == 0) throw std::invalid_argument("haar_unitary: dim must be >= 1");
  const auto n = static_cast<Eigen::Index>(dim);
  Matrix z(n, n);
  const double s = 1.0 / std::sqrt(2.0);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) z(i, j) = Complex(standard_normal(rng), standard_normal(rng)) * s;
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= (a > 0.0 ? d / a : Complex(1.0));
  }
  return q;
}

inline Matrix haar_unitary(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  return haar_unitary(dim, rng);
}

// ---------------------------------------------------------------------------
// Named gates

namespace gates {
inline Matrix identity(std::size_t d = 2) {
  return Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}
inline Matrix x() { return Matrix{{0.0, 1.0}, {1.0, 0.0}}; }
inline Matrix y() { return Matrix{{0.0, -kI}, {kI, 0.0}}; }
inline Matrix z() { return Matrix{{1.0, 0.0}, {0.0, -1.0}}; }
inline Matrix h() { return Matrix{{1.0, 1.0}, {1.0, -1.0}} / std::sqrt(2.0); }
/// diag(1, e^{i phase}).
inline Matrix phase(double phase) { return Matrix{{1.0, 0.0}, {0.0, std::polar(1.0, phase)}}; }
/// The 2^k-th root of Z, diag(1, e^{i pi / 2^k}).
inline Matrix z_root(unsigned k) { return phase(std::numbers::pi / std::ldexp(1.0, static_cast<int>(k))); }
inline Matrix sqrt_z() { return z_root(1); }
inline Matrix sqrt_x() {
  return Matrix{{Complex(1, 1), Complex(1, -1)}, {Complex(1, -1), Complex(1, 1)}} / 2.0;
}
}  // namespace gates

}  // namespace qcert
