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

// Robustness numerics for single-qubit gate models: standard noise channels,
// gauge-optimized infidelity, random channel surveys and slope fits.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qcert/automata.hpp"
#include "qcert/parallel.hpp"
#include "qcert/promise.hpp"
#include "qcert/qcore.hpp"
#include "qcert/qmodel.hpp"

namespace qcert {

// ---------------------------------------------------------------------------
// Noise channels

enum class NoiseKind { kDepolarizing, kDephasing, kAmplitudeDamping, kAmplitudeRaising };

inline constexpr std::array<NoiseKind, 4> kAllNoiseKinds{NoiseKind::kDepolarizing, NoiseKind::kDephasing,
                                                         NoiseKind::kAmplitudeDamping, NoiseKind::kAmplitudeRaising};

inline std::string_view noise_name(NoiseKind k) {
  switch (k) {
    case NoiseKind::kDepolarizing: return "depolarizing";
    case NoiseKind::kDephasing: return "dephasing";
    case NoiseKind::kAmplitudeDamping: return "amplitude_damping";
    case NoiseKind::kAmplitudeRaising: return "amplitude_raising";
  }
  return "unknown";
}

inline NoiseKind parse_noise_kind(std::string_view s) {
  for (auto k : kAllNoiseKinds)
    if (noise_name(k) == s) return k;
  throw std::invalid_argument("unknown noise family \"" + std::string(s) +
                              "\" (expected depolarizing, dephasing, amplitude_damping or amplitude_raising)");
}

struct NoiseFamily {
  NoiseKind kind = NoiseKind::kDepolarizing;
  double t = 0.0;
};

inline KrausChannel noise_channel(NoiseFamily f) {
  const double t = f.t;
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("noise_channel: t must lie in [0, 1]");
  switch (f.kind) {
    case NoiseKind::kDepolarizing:
      return KrausChannel({std::sqrt(1.0 - 3.0 * t / 4.0) * gates::identity(), std::sqrt(t / 4.0) * gates::x(),
                           std::sqrt(t / 4.0) * gates::y(), std::sqrt(t / 4.0) * gates::z()});
    case NoiseKind::kDephasing:
      return KrausChannel({std::sqrt(1.0 - t / 2.0) * gates::identity(), std::sqrt(t / 2.0) * gates::z()});
    case NoiseKind::kAmplitudeDamping:
    case NoiseKind::kAmplitudeRaising: {
      Matrix k0{{1.0, 0.0}, {0.0, std::sqrt(1.0 - t)}};
      Matrix k1{{0.0, std::sqrt(t)}, {0.0, 0.0}};
      if (f.kind == NoiseKind::kAmplitudeRaising) {
        const Matrix x = gates::x();
        k0 = x * k0 * x;
        k1 = x * k1 * x;
      }
      return KrausChannel({k0, k1});
    }
  }
  throw std::invalid_argument("noise_channel: unknown family");
}

/// The ideal model: |0><0|, a single symbol 's' acting as sqrt(X), and the
/// computational-basis measurement with y <-> |0>, n <-> |1>.
inline QuantumModel make_target_model() {
  return QuantumModel(Alphabet("s"), LabelSet::yes_no(), DensityMatrix::from_pure(states::zero()),
                      {KrausChannel::unitary(gates::sqrt_x())}, {states::zero().projector(), states::one().projector()});
}

/// Same model with every channel replaced by (noise after channel).
/// Preparation and measurement are left untouched.
inline QuantumModel noisy_model(const QuantumModel& target, NoiseFamily f) {
  if (target.dim() != 2) throw std::invalid_argument("noisy_model: noise families act on qubits");
  const KrausChannel n = noise_channel(f);
  std::vector<KrausChannel> chans;
  for (const auto& ch : target.channels()) chans.push_back(compose(n, ch));
  return QuantumModel(target.alphabet(), target.labels(), target.rho(), std::move(chans), target.povm());
}

/// Target model with its single gate channel replaced by `ch`.
inline QuantumModel substitute_channel(const QuantumModel& target, const KrausChannel& ch) {
  if (target.alphabet().size() != 1) throw std::invalid_argument("substitute_channel: single-symbol model required");
  if (ch.dim_in() != target.dim() || ch.dim_out() != target.dim())
    throw std::invalid_argument("substitute_channel: dimension mismatch");
  return QuantumModel(target.alphabet(), target.labels(), target.rho(), {ch}, target.povm());
}

// ---------------------------------------------------------------------------
// Gauge-optimized infidelity

struct GaugeParams {
  double alpha = 0.0;
  double beta = 0.0;
  double theta = 0.0;
  bool conjugate = false;
};

inline Eigen::Matrix2cd gauge_unitary(double alpha, double beta, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix2cd u;
  u << std::polar(c, alpha + beta), std::polar(s, alpha - beta), -std::polar(s, -(alpha - beta)),
      std::polar(c, -(alpha + beta));
  return u;
}

inline Eigen::Matrix2cd gauge_unitary(const GaugeParams& g) { return gauge_unitary(g.alpha, g.beta, g.theta); }

/// Average gate infidelity between qubit channels from the overlap of their
/// unnormalized Choi matrices: (d/(d+1)) (1 - Tr[C_A C_B^dagger] / d^2).
inline double gate_infidelity(const KrausChannel& a, const KrausChannel& b) {
  if (a.dim_in() != b.dim_in() || a.dim_in() != a.dim_out() || b.dim_in() != b.dim_out())
    throw std::invalid_argument("gate_infidelity: channels must act on the same space");
  const double d = static_cast<double>(a.dim_in());
  return d / (d + 1.0) * (1.0 - choi_overlap(a, b) / (d * d));
}

struct GaugeTerms {
  double state = 0.0;        // 1 - F(U rho U^dagger, rho~)
  double gate = 0.0;         // max over symbols of the average gate infidelity
  double measurement = 0.0;  // max over labels of the operator-norm distance
  double value() const { return std::max({state, gate, measurement}); }
};

/// Max of the three model distances after conjugating the target by a gauge
/// unitary (optionally after complex conjugation of the target).
class GaugeObjective {
 public:
  GaugeObjective(const QuantumModel& model, const QuantumModel& target) {
    if (model.dim() != 2 || target.dim() != 2) throw std::invalid_argument("infidelity: qubit models required");
    if (!(model.alphabet() == target.alphabet())) throw std::invalid_argument("infidelity: alphabet mismatch");
    model_rho_ = model.rho().matrix();
    model_det_ = std::max(0.0, model_rho_.determinant().real());
    for (int c = 0; c < 2; ++c) {
      auto fix = [&](const Matrix& m) -> Eigen::Matrix2cd { return c ? Eigen::Matrix2cd(m.conjugate()) : Eigen::Matrix2cd(m); };
      target_[c].rho = fix(target.rho().matrix());
      target_[c].kraus.clear();
      for (const auto& ch : target.channels()) {
        std::vector<Eigen::Matrix2cd> ks;
        for (const auto& k : ch.ops()) ks.push_back(fix(k));
        target_[c].kraus.push_back(std::move(ks));
      }
      target_[c].povm.clear();
      for (const auto& m : target.povm()) target_[c].povm.push_back(fix(m));
    }
    target_det_ = std::max(0.0, target_[0].rho.determinant().real());
    for (const auto& ch : model.channels()) {
      std::vector<Eigen::Matrix2cd> ks;
      for (const auto& k : ch.ops()) ks.push_back(k);
      model_kraus_.push_back(std::move(ks));
    }
    for (const auto& name : target.labels().names()) {
      const auto l = model.labels().index_of(name);
      model_povm_.push_back(l ? Eigen::Matrix2cd(model.povm()[*l]) : Eigen::Matrix2cd::Zero());
    }
  }

  GaugeTerms terms(const GaugeParams& g) const {
    const Eigen::Matrix2cd u = gauge_unitary(g);
    const Eigen::Matrix2cd ud = u.adjoint();
    const auto& tg = target_[g.conjugate ? 1 : 0];
    GaugeTerms out;
    const Eigen::Matrix2cd rho = u * tg.rho * ud;
    const double fid = (rho * model_rho_).trace().real() + 2.0 * std::sqrt(target_det_ * model_det_);
    out.state = std::max(0.0, 1.0 - fid);
    for (std::size_t s = 0; s < model_kraus_.size(); ++s) {
      double overlap = 0.0;
      for (const auto& a : model_kraus_[s]) {
        const Eigen::Matrix2cd rotated = ud * a * u;  // Tr[A^dag U B U^dag] = Tr[(U^dag A U)^dag B]
        for (const auto& b : tg.kraus[s]) overlap += std::norm((rotated.adjoint() * b).trace());
      }
      out.gate = std::max(out.gate, (2.0 / 3.0) * (1.0 - overlap / 4.0));
    }
    for (std::size_t l = 0; l < tg.povm.size(); ++l) {
      const Eigen::Matrix2cd d = u * tg.povm[l] * ud - model_povm_[l];
      const double a = d(0, 0).real(), dd = d(1, 1).real();
      const double norm = std::abs((a + dd) / 2.0) + std::sqrt((a - dd) * (a - dd) / 4.0 + std::norm(d(0, 1)));
      out.measurement = std::max(out.measurement, norm);
    }
    return out;
  }

  double operator()(const GaugeParams& g) const { return terms(g).value(); }

 private:
  struct Side {
    Eigen::Matrix2cd rho;
    std::vector<std::vector<Eigen::Matrix2cd>> kraus;
    std::vector<Eigen::Matrix2cd> povm;
  };
  std::array<Side, 2> target_;
  double target_det_ = 0.0;
  Eigen::Matrix2cd model_rho_;
  double model_det_ = 0.0;
  std::vector<std::vector<Eigen::Matrix2cd>> model_kraus_;
  std::vector<Eigen::Matrix2cd> model_povm_;
};

struct LjOptions {
  int restarts = 16;
  int iterations = 200;
  double contraction = 0.95;
  std::uint64_t seed = 0;
};

struct InfidelityResult {
  double value = 0.0;
  GaugeParams gauge;
};

/// Luus-Jaakola random search over the gauge, run separately on the plain
/// and the conjugate branch. Each restart starts from a Haar-distributed
/// gauge unitary; the search box starts at (pi, pi, pi/2) and shrinks by
/// `contraction` after every non-improving step. The result is the best
/// value found, an upper bound on the infimum.
inline InfidelityResult infidelity(const QuantumModel& model, const QuantumModel& target, const LjOptions& opt = {}) {
  const GaugeObjective f(model, target);
  Rng rng(opt.seed);
  InfidelityResult best;
  best.value = f(best.gauge);
  constexpr double kPi = std::numbers::pi;
  for (int branch = 0; branch < 2; ++branch) {
    for (int r = 0; r < opt.restarts; ++r) {
      GaugeParams p;
      p.conjugate = branch == 1;
      p.alpha = 2.0 * kPi * uniform01(rng);
      p.beta = 2.0 * kPi * uniform01(rng);
      p.theta = std::acos(std::sqrt(uniform01(rng)));
      double fp = f(p);
      std::array<double, 3> box{kPi, kPi, kPi / 2.0};
      for (int it = 0; it < opt.iterations; ++it) {
        GaugeParams q = p;
        q.alpha += box[0] * (2.0 * uniform01(rng) - 1.0);
        q.beta += box[1] * (2.0 * uniform01(rng) - 1.0);
        q.theta += box[2] * (2.0 * uniform01(rng) - 1.0);
        const double fq = f(q);
        if (fq < fp) {
          p = q;
          fp = fq;
        } else {
          for (auto& b : box) b *= opt.contraction;
        }
      }
      if (fp < best.value) {
        best.value = fp;
        best.gauge = p;
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Random channels and surveys

/// Random qubit channel: Kraus rank uniform in {1, 2, 3, 4}, raw entries
/// r^2 e^{i phi} with r, phi uniform, then K_i E^{-1/2} with E = sum K^dag K.
inline KrausChannel sample_random_channel(std::uint64_t seed) {
  Rng rng(seed);
  while (true) {
    const int rank = 1 + static_cast<int>(std::min(3.0, std::floor(4.0 * uniform01(rng))));
    std::vector<Eigen::Matrix2cd> raw(static_cast<std::size_t>(rank));
    for (auto& k : raw)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          const double r = uniform01(rng);
          const double phi = 2.0 * std::numbers::pi * uniform01(rng);
          k(i, j) = std::polar(r * r, phi);
        }
    Eigen::Matrix2cd e = Eigen::Matrix2cd::Zero();
    for (const auto& k : raw) e += k.adjoint() * k;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(e);
    if (es.eigenvalues().minCoeff() < 1e-12) continue;
    const Eigen::Matrix2cd inv_sqrt =
        es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
    std::vector<Matrix> ops;
    for (const auto& k : raw) ops.emplace_back(k * inv_sqrt);
    return KrausChannel(std::move(ops));
  }
}

struct SurveyPoint {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double p_fail = 0.0;
  double infid = 0.0;
  std::size_t kraus_rank = 0;
};

/// Evaluates one gate channel against the target on a finite problem.
inline SurveyPoint survey_point(const KrausChannel& ch, const PromiseProblem& p, std::uint64_t lj_seed,
                                const QuantumModel& target = make_target_model(), LjOptions lj = {}) {
  const QuantumModel model = substitute_channel(target, ch);
  SurveyPoint pt;
  pt.seed = lj_seed;
  pt.kraus_rank = ch.rank();
  pt.p_fail = failure_probability(model, p);
  lj.seed = splitmix64(lj_seed ^ 0xA5A5A5A5A5A5A5A5ULL);
  pt.infid = infidelity(model, target, lj).value;
  return pt;
}

/// n random channels; point i uses child_seed(master_seed, i) for both the
/// channel and its optimizer, and results come back in index order.
inline std::vector<SurveyPoint> survey(const PromiseProblem& p, std::size_t n, std::uint64_t master_seed,
                                       std::size_t threads = 1, LjOptions lj = {}) {
  if (n < 1) throw std::invalid_argument("survey: n must be >= 1");
  if (!p.is_finite()) throw std::invalid_argument("survey: problem " + p.descriptor() + " is not restricted");
  const QuantumModel target = make_target_model();
  std::vector<SurveyPoint> out(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const std::uint64_t seed = child_seed(master_seed, i);
    out[i] = survey_point(sample_random_channel(seed), p, seed, target, lj);
    out[i].index = i;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Noise curves, slopes, soundness

struct NoiseCurvePoint {
  NoiseKind kind = NoiseKind::kDepolarizing;
  double t = 0.0;
  double p_fail = 0.0;
  double infid = 0.0;
};

inline NoiseCurvePoint noise_point(NoiseKind kind, double t, const PromiseProblem& p, const LjOptions& lj = {}) {
  const QuantumModel target = make_target_model();
  const QuantumModel model = noisy_model(target, {kind, t});
  return {kind, t, failure_probability(model, p), infidelity(model, target, lj).value};
}

inline std::vector<NoiseCurvePoint> noise_curve(NoiseKind kind, const PromiseProblem& p, const std::vector<double>& ts,
                                                 std::size_t threads = 1, const LjOptions& lj = {}) {
  std::vector<NoiseCurvePoint> out(ts.size());
  parallel_for(ts.size(), threads, [&](std::size_t i) { out[i] = noise_point(kind, ts[i], p, lj); });
  return out;
}

struct SlopeEstimate {
  NoiseKind kind = NoiseKind::kDepolarizing;
  std::size_t i_max = 0;
  double alpha_hat = 0.0;
  std::vector<double> t_grid;
  std::vector<double> p_fail;
  std::vector<double> infid;
};

inline const std::vector<double>& default_slope_grid() {
  static const std::vector<double> grid{1e-3, 2e-3, 5e-3, 1e-2};
  return grid;
}

/// Least-squares slope through the origin of infid against p_fail for small
/// noise strengths on EO^1 restricted to i_max.
inline SlopeEstimate slope_estimate(NoiseKind kind, std::size_t i_max, const std::vector<double>& ts = default_slope_grid(),
                                    std::size_t threads = 1, const LjOptions& lj = {}) {
  const auto p = restrict_index(make_eo(1), i_max);
  const auto pts = noise_curve(kind, p, ts, threads, lj);
  SlopeEstimate s;
  s.kind = kind;
  s.i_max = i_max;
  s.t_grid = ts;
  double pp = 0.0, pf = 0.0;
  for (const auto& pt : pts) {
    s.p_fail.push_back(pt.p_fail);
    s.infid.push_back(pt.infid);
    pp += pt.p_fail * pt.p_fail;
    pf += pt.p_fail * pt.infid;
  }
  if (pp < 1e-30) throw std::domain_error("slope_estimate: degenerate fit (all failure probabilities vanish)");
  s.alpha_hat = pf / pp;
  return s;
}

/// alpha = 1 / (2 p_C) with p_C the optimal two-state pvPFA failure
/// probability on EO^1 restricted to i_max.
inline double soundness_bound(const PromiseProblem& p) {
  const auto* eo = std::get_if<family::EvenOdd>(&p.family());
  if (!eo || eo->k != 1 || !p.restriction().max_index || p.restriction().max_length)
    throw std::invalid_argument("soundness_bound: requires eo:k=1 restricted by imax, got " + p.descriptor());
  const double pc = optimal_two_state_pfa(*p.restriction().max_index).p_fail;
  if (pc <= 0.0) throw std::domain_error("soundness_bound: classical floor is zero");
  return 1.0 / (2.0 * pc);
}

// ---------------------------------------------------------------------------
// Entanglement-breaking demonstration

struct EbDemoResult {
  double success = 0.0;           // 1 - p_fail on EO^1 restricted to i_max = 2
  double reject_sigma2 = 0.0;     // Pr[n | sigma^2]
  double accept_sigma4 = 0.0;     // Pr[y | sigma^4]
  double classical_success = 0.0; // 1 - p_C
  CptpReport cptp;
  double min_ppt_eigenvalue = 0.0;  // of the partially transposed Choi matrix
  bool entanglement_breaking = false;
  QuantumModel model;
};

/// Measure-and-prepare channel rho -> (1/2) sum_tau <tau|rho|tau> S|tau><tau|S^dag
/// over the four X and Y eigenstates, S = sqrt(Z), run on |+> with the
/// {|+>, |->} measurement.
inline EbDemoResult eb_demo() {
  const std::array<PureState, 4> taus{states::plus(), states::minus(), states::plus_y(), states::minus_y()};
  std::vector<Matrix> ops;
  for (const auto& tau : taus) ops.push_back(gates::sqrt_z() * tau.projector() / std::sqrt(2.0));
  const KrausChannel ch(ops);
  QuantumModel model(Alphabet("s"), LabelSet::yes_no(), DensityMatrix::from_pure(states::plus()), {ch},
                     {states::plus().projector(), states::minus().projector()});
  const auto p = restrict_index(make_eo(1), 2);
  EbDemoResult r{0.0, 0.0, 0.0, 0.0, validate_cptp(ch), 0.0, false, model};
  r.success = 1.0 - failure_probability(model, p);
  r.reject_sigma2 = label_probabilities(model, "ss")[1];
  r.accept_sigma4 = label_probabilities(model, "ssss")[0];
  r.classical_success = 1.0 - optimal_two_state_pfa(2).p_fail;
  r.min_ppt_eigenvalue = min_hermitian_eigenvalue(partial_transpose_first(choi_of(ch).matrix(), 2));
  r.entanglement_breaking = r.min_ppt_eigenvalue >= -kDefaultTolerances.validity;
  return r;
}

}  // namespace qcert
