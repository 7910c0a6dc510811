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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. CSV outputs (surveys, noise curves,
// slopes) go to --out-dir for plotting.
//
//   acceptance [--out-dir DIR] [--survey-n N] [--threads T]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "clifford_words.hpp"
#include "oracles.hpp"
#include "qcert/qcert.hpp"

namespace {

using namespace qcert;

// Pinned tolerances.
constexpr double kProbTol = 1e-12;         // exact (epsilon = 0) solving
constexpr double kClosedFormTol = 1e-6;    // two-state pvPFA optimum
constexpr double kSlopeRelTol = 0.05;      // low-noise slopes
constexpr double kSlopeBudgetSec = 300.0;
constexpr double kAnchorFailTol = 1e-12;   // amplitude raising at t = 1
constexpr double kAnchorInfidTol = 1e-3;
constexpr double kSurveySlack = 0.02;      // inFid <= alpha p_fail + slack
constexpr std::size_t kSurveyN = 100000;
constexpr double kSurveyBudgetSec = 1800.0;
constexpr double kCliffordBudgetSec = 600.0;
constexpr double kEbTol = 1e-12;
constexpr double kGridTol = 1e-4;          // optimizer vs grid oracle
constexpr double kUnaryBudgetSec = 1.0;    // per unary search

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

struct Options {
  std::filesystem::path out_dir = "acceptance_out";
  std::size_t survey_n = kSurveyN;
  std::size_t threads = default_thread_count();
};

std::string fmt(double v, int prec = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Outcome minimal_sizes() {
  Outcome o;
  std::size_t rows = 0;
  double worst = 0.0;
  auto check = [&](const PromiseProblem& p, std::size_t claimed) {
    SearchBudget b;
    b.max_states = claimed + 1;
    const auto rep = unary_min_search(p, b);
    ++rows;
    worst = std::max(worst, rep.seconds);
    o.require(rep.min_states == claimed, p.descriptor() + " found " +
                                             (rep.min_states ? std::to_string(*rep.min_states) : "none") +
                                             " expected " + std::to_string(claimed));
    o.require(rep.seconds < kUnaryBudgetSec, p.descriptor() + " took " + fmt(rep.seconds) + " s");
  };
  for (unsigned k = 1; k <= 4; ++k) check(make_eo(k), std::size_t{2} << k);
  const std::vector<std::tuple<unsigned, unsigned, std::size_t>> geo{{2, 2, 4}, {3, 1, 3}, {3, 3, 9}, {2, 4, 8}, {5, 5, 25}};
  for (auto [q, r, claimed] : geo) check(make_geo(q, r), claimed);
  for (unsigned k = 1; k <= 3; ++k)
    for (std::size_t i = 0; i <= 10; ++i) check(restrict_index(make_eo(k), i), std::min(i + 1, std::size_t{2} << k));
  if (o.pass) o.detail = std::to_string(rows) + " problems exact, slowest " + fmt(worst, 3) + " s";
  return o;
}

Outcome clifford_search(const Options& opt) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<LabeledWord> listing;
  for (const auto& w : testing::kCliffordYes) listing.push_back({w, 0});
  for (const auto& w : testing::kCliffordNo) listing.push_back({w, 1});
  SearchBudget b;
  b.threads = opt.threads;
  const auto full = min_dfa_identify(Alphabet("sh"), LabelSet::yes_no(), listing, b);
  o.require(full.min_states == 6u, "length 8: min_states " + (full.min_states ? std::to_string(*full.min_states) : "none"));
  o.require(full.equivalence_classes == 1, "length 8: " + std::to_string(full.equivalence_classes) + " classes");
  const Pvdfa reference = canonical_dfa(make_cl());
  o.require(!full.witnesses.empty() && dfa_isomorphic(full.witnesses.front(), reference),
            "witness not isomorphic to the 6-state stabilizer machine");
  std::vector<LabeledWord> short_words;
  for (const auto& lw : listing)
    if (lw.word.size() <= 7) short_words.push_back(lw);
  SearchBudget b7 = b;
  b7.max_states = 5;
  const auto seven = min_dfa_identify(Alphabet("sh"), LabelSet::yes_no(), short_words, b7);
  o.require(!seven.min_states && seven.complete && seven.lower_bound == 6, "length 7 does not refute all <= 5 states");
  for (std::size_t n = 1; n <= 5; ++n)
    o.require(seven.failure_witnesses.count(n) == 1, "no failure witness for " + std::to_string(n) + " states");
  const double secs = seconds_since(t0);
  o.require(secs <= kCliffordBudgetSec, "runtime " + fmt(secs) + " s");
  if (o.pass)
    o.detail = std::to_string(listing.size()) + " words: 6 states, 1 class, isomorphic; length 7 refutes 1..5; " +
               fmt(secs, 3) + " s";
  return o;
}

Outcome canonical_qfas() {
  Outcome o;
  auto check = [&](const PromiseProblem& p, std::size_t max_len, const std::string& tag) {
    const auto v = solves_with_error(make_canonical_qfa(p), p, 0.0, max_len);
    o.require(v.solves && v.min_success >= 1.0 - kProbTol,
              tag + " min success " + fmt(v.min_success, 17) + (v.counterexample ? " at " + *v.counterexample : ""));
    return v.words_checked;
  };
  std::size_t words = 0;
  for (unsigned k = 1; k <= 4; ++k) words += check(make_eo(k), (std::size_t{4} << k) << k, "eo:k=" + std::to_string(k));
  words += check(make_diof(2), 8, "diof:k=2");
  words += check(make_neo(2, 1), 8, "neo:n=2:k=1");
  words += check(make_geo(3, 3), 18 * 3, "geo:q=3:r=3");
  const Qfa cl = make_canonical_qfa(make_cl());
  double min_success = 1.0;
  for (const auto& w : testing::kCliffordYes) min_success = std::min(min_success, label_probabilities(cl, w)[0]);
  for (const auto& w : testing::kCliffordNo) min_success = std::min(min_success, label_probabilities(cl, w)[1]);
  words += testing::kCliffordYes.size() + testing::kCliffordNo.size();
  o.require(min_success >= 1.0 - kProbTol, "cl listing min success " + fmt(min_success, 17));
  if (o.pass) o.detail = std::to_string(words) + " promised words, all correct with probability >= 1 - 1e-12";
  return o;
}

Outcome classical_floors() {
  Outcome o;
  double worst = 0.0;
  for (std::size_t i = 1; i <= 12; ++i) {
    const double closed = static_cast<double>(i - (i + 1) / 2) / static_cast<double>(i + 1);
    const double got = optimal_two_state_pfa(i).p_fail;
    worst = std::max(worst, std::abs(got - closed));
    o.require(std::abs(got - closed) <= kClosedFormTol, "i_max=" + std::to_string(i) + " got " + fmt(got, 10));
  }
  o.require(std::abs(optimal_two_state_pfa(3).p_fail - 0.25) <= kClosedFormTol, "i_max=3 not 1/4");
  o.require(std::abs(optimal_two_state_pfa(5).p_fail - 1.0 / 3.0) <= kClosedFormTol, "i_max=5 not 1/3");
  if (o.pass) o.detail = "i_max 1..12, max deviation " + fmt(worst, 3) + "; p_C(3)=1/4, p_C(5)=1/3";
  return o;
}

Outcome slopes(const Options& opt) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::pair<std::size_t, std::array<double, 4>>> table{
      {3, {1.0 / 3.0, 4.0 / 9.0, 8.0 / 33.0, 8.0 / 21.0}}, {5, {1.0 / 5.0, 4.0 / 15.0, 8.0 / 51.0, 8.0 / 39.0}}};
  std::ofstream csv(opt.out_dir / "slopes.csv");
  csv << "family,i_max,alpha_hat,reference,soundness_alpha\n";
  double worst = 0.0;
  for (const auto& [i_max, refs] : table) {
    const double alpha = soundness_bound(restrict_index(make_eo(1), i_max));
    for (std::size_t f = 0; f < kAllNoiseKinds.size(); ++f) {
      const auto s = slope_estimate(kAllNoiseKinds[f], i_max, default_slope_grid(), opt.threads);
      const double rel = std::abs(s.alpha_hat / refs[f] - 1.0);
      worst = std::max(worst, rel);
      csv << noise_name(kAllNoiseKinds[f]) << ',' << i_max << ',' << format_double(s.alpha_hat) << ','
          << format_double(refs[f]) << ',' << format_double(alpha) << '\n';
      o.require(rel <= kSlopeRelTol, std::string(noise_name(kAllNoiseKinds[f])) + " i_max=" + std::to_string(i_max) +
                                         " slope " + fmt(s.alpha_hat) + " vs " + fmt(refs[f]));
    }
  }
  const double secs = seconds_since(t0);
  o.require(secs <= kSlopeBudgetSec, "runtime " + fmt(secs) + " s");
  if (o.pass) o.detail = "8 slopes, max relative error " + fmt(100.0 * worst, 3) + "%, " + fmt(secs, 3) + " s";
  return o;
}

Outcome classical_anchor() {
  Outcome o;
  const auto target = make_target_model();
  const auto m = noisy_model(target, {NoiseKind::kAmplitudeRaising, 1.0});
  const double f = failure_probability(m, restrict_index(make_eo(1), 3));
  const double inf = infidelity(m, target).value;
  o.require(std::abs(f - 0.25) <= kAnchorFailTol, "p_fail " + fmt(f, 17));
  o.require(std::abs(inf - 0.5) <= kAnchorInfidTol, "infid " + fmt(inf, 10));
  if (o.pass) o.detail = "(p_fail, infid) = (" + fmt(f, 12) + ", " + fmt(inf, 8) + ")";
  return o;
}

std::string survey_csv(const PromiseProblem& p, std::size_t n, std::size_t threads, std::vector<SurveyPoint>* pts) {
  auto v = survey(p, n, 20260101, threads);
  std::ostringstream os;
  write_survey_csv(os, v);
  if (pts) *pts = std::move(v);
  return os.str();
}

Outcome survey_soundness(const Options& opt) {
  Outcome o;
  std::string summary;
  double first_pass = 0.0;
  for (std::size_t i_max : {3u, 5u}) {
    const auto p = restrict_index(make_eo(1), i_max);
    const double pc = optimal_two_state_pfa(i_max).p_fail;
    const double alpha = 1.0 / (2.0 * pc);
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<SurveyPoint> pts;
    const std::string csv = survey_csv(p, opt.survey_n, opt.threads, &pts);
    first_pass += seconds_since(t0);
    std::ofstream(opt.out_dir / ("survey_imax" + std::to_string(i_max) + ".csv")) << csv;
    std::size_t inside = 0, violations = 0;
    double worst = -1.0;
    for (const auto& pt : pts) {
      if (pt.p_fail > pc) continue;
      ++inside;
      const double excess = pt.infid - (alpha * pt.p_fail + kSurveySlack);
      worst = std::max(worst, excess);
      if (excess > 0.0) ++violations;
    }
    o.require(violations == 0, "i_max=" + std::to_string(i_max) + ": " + std::to_string(violations) + " violations");
    const std::size_t rerun_threads = opt.threads == 1 ? 3 : 1;
    o.require(survey_csv(p, opt.survey_n, rerun_threads, nullptr) == csv,
              "i_max=" + std::to_string(i_max) + ": CSV differs with " + std::to_string(rerun_threads) + " threads");
    summary += "i_max=" + std::to_string(i_max) + ": " + std::to_string(inside) + " points with p_fail <= p_C, 0 violations, max excess " +
               fmt(worst, 3) + "; ";
  }
  o.require(opt.survey_n >= kSurveyN, "n=" + std::to_string(opt.survey_n) + " below " + std::to_string(kSurveyN));
  o.require(first_pass <= kSurveyBudgetSec, "runtime " + fmt(first_pass) + " s");
  if (o.pass) o.detail = summary + "byte-identical across thread counts; " + fmt(first_pass, 4) + " s";
  return o;
}

Outcome eb(void) {
  Outcome o;
  const auto r = eb_demo();
  o.require(std::abs(r.success - 23.0 / 32.0) <= kEbTol, "success " + fmt(r.success, 17));
  o.require(r.success > 2.0 / 3.0, "success does not exceed 2/3");
  o.require(std::abs(r.reject_sigma2 - 5.0 / 8.0) <= kEbTol, "Pr[n|s^2] " + fmt(r.reject_sigma2, 17));
  o.require(std::abs(r.accept_sigma4 - 17.0 / 32.0) <= kEbTol, "Pr[y|s^4] " + fmt(r.accept_sigma4, 17));
  o.require(r.cptp.valid, "channel not CPTP");
  o.require(r.entanglement_breaking, "Choi partial transpose eigenvalue " + fmt(r.min_ppt_eigenvalue));
  if (o.pass)
    o.detail = "success " + fmt(r.success, 17) + " > 2/3, terms 5/8 and 17/32, CPTP, PPT min eigenvalue " +
               fmt(r.min_ppt_eigenvalue, 3);
  return o;
}

Outcome classifier() {
  Outcome o;
  auto qfa = [](const Matrix& u) {
    return Qfa(Alphabet("s"), LabelSet::yes_no(), {states::plus(), states::minus()}, {u}, states::plus(), {0, 1});
  };
  const auto a = classify_eo_qfa(qfa(gates::sqrt_z()), 1, 64);
  o.require(a.valid && a.j == 1, "sqrt(Z), k=1: " + (a.valid ? "j=" + std::to_string(a.j) : a.reason));
  const auto b = classify_eo_qfa(qfa(gates::z() * gates::z_root(2)), 2, 256);
  o.require(b.valid && b.j == 5, "Z Z^(1/4), k=2: " + (b.valid ? "j=" + std::to_string(b.j) : b.reason));
  o.require(!classify_eo_qfa(qfa(gates::z()), 1).valid, "Z, k=1 accepted");
  std::size_t accepted = 0;
  for (unsigned k = 1; k <= 2; ++k)
    for (std::uint64_t s = 0; s < 100; ++s) accepted += classify_eo_qfa(qfa(haar_unitary(2, child_seed(31337, s))), k).valid;
  o.require(accepted == 0, std::to_string(accepted) + " Haar-random unitaries accepted");
  if (o.pass) o.detail = "sqrt(Z) j=1, Z Z^(1/4) j=5, Z rejected, 0/200 Haar-random accepted";
  return o;
}

Outcome oracles() {
  Outcome o;
  // Exact identification against brute-force enumeration.
  Rng rng(777);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)) % n; };
  int agree = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + pick(4);
    std::vector<std::vector<std::size_t>> delta(n, std::vector<std::size_t>(2));
    std::vector<int> labels(n);
    for (std::size_t s = 0; s < n; ++s) {
      delta[s] = {pick(n), pick(n)};
      labels[s] = static_cast<int>(pick(3)) - 1;
    }
    const Pvdfa target(Alphabet("ab"), LabelSet::yes_no(), delta, 0, labels);
    std::vector<LabeledWord> sample;
    std::vector<testing::IndexedWord> indexed;
    for (std::size_t i = 6 + pick(30); i > 0; --i) {
      std::string w;
      for (std::size_t len = pick(7); len > 0; --len) w.push_back(pick(2) ? 'b' : 'a');
      const auto l = target.state_label(dfa_run(target, w));
      if (!l) continue;
      sample.push_back({w, *l});
      testing::IndexedWord iw{{}, static_cast<int>(*l)};
      for (char c : w) iw.symbols.push_back(c == 'b');
      indexed.push_back(iw);
    }
    const auto naive = testing::naive_min_states(2, indexed, 4);
    SearchBudget b;
    b.max_states = 4;
    const auto rep = min_dfa_identify(Alphabet("ab"), LabelSet::yes_no(), sample, b);
    const bool same = naive && rep.min_states && *rep.min_states == static_cast<std::size_t>(*naive);
    agree += same;
    o.require(same, "identify sample " + std::to_string(trial) + " disagrees");
  }
  // Luus-Jaakola against the dense grid.
  const auto target = make_target_model();
  std::vector<QuantumModel> models;
  for (double t : {0.05, 0.1})
    for (auto kind : kAllNoiseKinds) models.push_back(noisy_model(target, {kind, t}));
  models.push_back(noisy_model(target, {NoiseKind::kDepolarizing, 0.3}));
  models.push_back(noisy_model(target, {NoiseKind::kAmplitudeDamping, 0.3}));
  auto m2 = [](const Matrix& m) { return testing::M2{m(0, 0), m(0, 1), m(1, 0), m(1, 1)}; };
  const testing::QubitTarget gt{m2(states::zero().projector()), m2(gates::sqrt_x()),
                                {m2(states::zero().projector()), m2(states::one().projector())}};
  double worst = 0.0;
  for (std::size_t i = 0; i < models.size(); ++i) {
    testing::QubitModel gm;
    gm.rho = m2(models[i].rho().matrix());
    for (const auto& k : models[i].channel(0).ops()) gm.kraus.push_back(m2(k));
    gm.povm = {m2(models[i].povm()[0]), m2(models[i].povm()[1])};
    const auto grid = testing::grid_infidelity(gm, gt);
    const double lj = infidelity(models[i], target).value;
    worst = std::max(worst, std::abs(lj - grid.refined));
    o.require(std::abs(lj - grid.refined) <= kGridTol,
              "model " + std::to_string(i) + ": optimizer " + fmt(lj, 10) + " grid " + fmt(grid.refined, 10));
  }
  if (o.pass)
    o.detail = std::to_string(agree) + "/50 samples agree with enumeration; 10 models within " + fmt(worst, 3) +
               " of the grid";
  return o;
}

// Plotting inputs that no criterion checks directly.
void write_noise_curves(const Options& opt) {
  std::vector<double> ts;
  for (int i = 0; i <= 20; ++i) ts.push_back(i / 20.0);
  for (std::size_t i_max : {3u, 5u}) {
    std::ofstream os(opt.out_dir / ("noise_curves_imax" + std::to_string(i_max) + ".csv"));
    os << "family,t,p_fail,infid\n";
    for (auto kind : kAllNoiseKinds)
      write_noise_curve_csv(os, noise_curve(kind, restrict_index(make_eo(1), i_max), ts, opt.threads), false);
  }
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    auto value = [&]() -> std::string {
      if (i + 1 >= argc) {
        std::cerr << "missing value for " << a << '\n';
        std::exit(2);
      }
      return argv[++i];
    };
    if (a == "--out-dir") opt.out_dir = value();
    else if (a == "--survey-n") opt.survey_n = std::stoul(value());
    else if (a == "--threads") opt.threads = std::stoul(value());
    else {
      std::cerr << "usage: acceptance [--out-dir DIR] [--survey-n N] [--threads T]\n";
      return 2;
    }
  }
  std::filesystem::create_directories(opt.out_dir);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"minimal-sizes", minimal_sizes},
      {"clifford-search", [&] { return clifford_search(opt); }},
      {"canonical-qfas", canonical_qfas},
      {"classical-floors", classical_floors},
      {"noise-slopes", [&] { return slopes(opt); }},
      {"classical-anchor", classical_anchor},
      {"survey-soundness", [&] { return survey_soundness(opt); }},
      {"eb-demo", eb},
      {"eo-classifier", classifier},
      {"oracle-equivalence", oracles},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << (i + 1) << "] " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  write_noise_curves(opt);
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " criteria passed; CSVs in " << opt.out_dir.string() << std::endl;
  return failed == 0 ? 0 : 1;
}
