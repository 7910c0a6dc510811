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

// qcert command-line tool. Exit codes: 0 success, 1 negative verdict,
// 2 input error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcert/qcert.hpp"

namespace {

using qcert::Json;

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInputError = 2;

struct Common {
  std::optional<std::uint64_t> seed;
  std::size_t threads = qcert::default_thread_count();
  std::string out = "-";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Master seed (required by randomized commands)");
  cmd->add_option("--threads", c.threads, "Worker threads (default: available cores)")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "Output file, '-' for stdout")->capture_default_str();
}

class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {
    if (path_ != "-") {
      file_ = std::make_unique<std::ofstream>(path_);
      if (!*file_) throw std::invalid_argument("cannot write " + path_);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  const std::string& path() const { return path_; }
  bool is_file() const { return static_cast<bool>(file_); }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
};

std::uint64_t require_seed(const Common& c, const char* cmd) {
  if (!c.seed) throw std::invalid_argument(std::string(cmd) + " is randomized and requires --seed");
  return *c.seed;
}

std::vector<qcert::NoiseKind> parse_families(const std::string& s) {
  if (s == "all") return {qcert::kAllNoiseKinds.begin(), qcert::kAllNoiseKinds.end()};
  std::vector<qcert::NoiseKind> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(qcert::parse_noise_kind(item));
  if (out.empty()) throw std::invalid_argument("empty --family list");
  return out;
}

qcert::Matrix parse_unitary(const std::string& spec) {
  if (spec == "sqrt_z") return qcert::gates::sqrt_z();
  if (spec == "z") return qcert::gates::z();
  if (spec == "sqrt_x") return qcert::gates::sqrt_x();
  if (spec.rfind("z_root:", 0) == 0) return qcert::gates::z_root(static_cast<unsigned>(std::stoul(spec.substr(7))));
  if (spec.rfind("phase:", 0) == 0) return qcert::gates::phase(std::stod(spec.substr(6)));
  try {
    return qcert::matrix_from_json(Json::parse(spec));
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument("--unitary: expected sqrt_z, z, sqrt_x, z_root:<k>, phase:<angle> or a JSON matrix");
  }
}

Json verdict_json(const qcert::Verdict& v) {
  Json j;
  j["solves"] = v.solves;
  j["exact"] = v.exact;
  j["counterexample"] = v.counterexample ? Json(*v.counterexample) : Json(nullptr);
  j["words_checked"] = v.words_checked;
  j["budget_length"] = v.budget_length;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcert: promise-problem automata and gate-certification numerics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qcert::kVersion);

  Common common;
  std::string problem;
  std::size_t max_len = 8;
  std::size_t max_states = 8;
  std::optional<double> time_limit;
  std::string dfa_path, model_path, channels_path, family = "all", unitary = "sqrt_z", t_grid;
  std::size_t i_max = 3, n = 1000, haar = 0, check_len = 0;
  unsigned k = 1;
  double eps = 0.0;

  auto* words = app.add_subcommand("words", "List promised words with their labels");
  words->add_option("--problem", problem, "Problem descriptor")->required();
  words->add_option("--max-len", max_len, "Longest word length")->capture_default_str();

  auto* dfa_check = app.add_subcommand("dfa-check", "Check whether a pvDFA solves a problem");
  dfa_check->add_option("--problem", problem, "Problem descriptor")->required();
  dfa_check->add_option("--dfa", dfa_path, "DFA JSON file (default: the canonical machine)");
  dfa_check->add_option("--max-len", max_len, "Word budget for multi-symbol problems")->capture_default_str();

  auto* search = app.add_subcommand("search", "Exact minimal pvDFA search");
  search->add_option("--problem", problem, "Problem descriptor")->required();
  search->add_option("--max-states", max_states, "Largest machine size tried")->capture_default_str();
  search->add_option("--max-len", max_len, "Sample word length for multi-symbol problems")->capture_default_str();
  search->add_option("--time-limit", time_limit, "Seconds before the search gives up");

  auto* pfa_opt = app.add_subcommand("pfa-opt", "Optimal two-state pvPFA on eo:k=1 restricted to imax");
  pfa_opt->add_option("--imax", i_max, "Largest index")->capture_default_str();

  auto* qfa_check = app.add_subcommand("qfa-check", "Check a QFA or quantum model against a problem");
  qfa_check->add_option("--problem", problem, "Problem descriptor")->required();
  qfa_check->add_option("--model", model_path, "Quantum model JSON (default: the canonical QFA)");
  qfa_check->add_option("--eps", eps, "Allowed error probability")->capture_default_str();
  qfa_check->add_option("--max-len", max_len, "Longest word checked")->capture_default_str();

  auto* classify = app.add_subcommand("classify-eo", "Classify a two-state QFA (U, |+>) for eo:k");
  classify->add_option("--k", k, "EO parameter")->capture_default_str();
  classify->add_option("--unitary", unitary, "sqrt_z, z, z_root:<k>, phase:<angle> or a JSON matrix")
      ->capture_default_str();
  classify->add_option("--haar", haar, "Classify this many Haar-random unitaries instead (needs --seed)");
  classify->add_option("--max-len", check_len, "Cross-check word length (0: 2^{k+2} periods)");

  auto* curve = app.add_subcommand("noise-curve", "Failure probability and infidelity along noise families");
  curve->add_option("--family", family, "Comma-separated families or 'all'")->capture_default_str();
  curve->add_option("--imax", i_max, "eo:k=1 restriction")->capture_default_str();
  curve->add_option("--t-grid", t_grid, "Comma-separated t values (default 0,0.05,...,1)");

  auto* slope = app.add_subcommand("slope", "Low-noise slope of infidelity against failure probability");
  slope->add_option("--family", family, "Comma-separated families or 'all'")->capture_default_str();
  slope->add_option("--imax", i_max, "eo:k=1 restriction")->capture_default_str();

  auto* surv = app.add_subcommand("survey", "Random-channel survey of (p_fail, infid)");
  surv->add_option("--imax", i_max, "eo:k=1 restriction")->capture_default_str();
  surv->add_option("--n", n, "Number of channels")->capture_default_str();

  auto* eb = app.add_subcommand("eb-demo", "Entanglement-breaking channel beating the classical floor");

  auto* ingest = app.add_subcommand("ingest-eval", "Evaluate externally supplied Kraus channels");
  ingest->add_option("--channels", channels_path, "Channel JSON file")->required();
  ingest->add_option("--problem", problem, "Restricted problem (default eo:k=1:imax=3)");

  auto* claims = app.add_subcommand("verify-claims", "Compare stated minimal sizes with the search engines");
  claims->add_option("--max-len", max_len, "Word budget for multi-symbol searches")->capture_default_str();

  for (auto* cmd : {words, dfa_check, search, pfa_opt, qfa_check, classify, curve, slope, surv, eb, ingest, claims})
    add_common(cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  const auto t0 = std::chrono::steady_clock::now();
  std::string command_line;
  for (int i = 0; i < argc; ++i) command_line += (i ? " " : "") + std::string(argv[i]);

  int rc = kOk;
  std::string problem_used = problem;
  try {
    Output out(common.out);
    auto& os = out.stream();
    auto* cmd = app.get_subcommands().front();
    const std::string name = cmd->get_name();

    if (name == "words") {
      const auto p = qcert::parse_problem(problem);
      os << "word,label\n";
      for (const auto& lw : qcert::enumerate_promised(p, max_len)) os << lw.word << ',' << p.labels().name(lw.label) << '\n';
    } else if (name == "dfa-check") {
      const auto p = qcert::parse_problem(problem);
      const qcert::Pvdfa d = dfa_path.empty() ? qcert::canonical_dfa(p) : qcert::dfa_from_json(qcert::read_json_file(dfa_path));
      const auto v = qcert::dfa_solves(d, p, max_len);
      Json j = verdict_json(v);
      j["problem"] = p.descriptor();
      j["states"] = d.num_states();
      os << j.dump(2) << '\n';
      rc = v.solves ? kOk : kNegative;
    } else if (name == "search") {
      const auto p = qcert::parse_problem(problem);
      qcert::SearchBudget b;
      b.max_states = max_states;
      b.word_budget = max_len;
      b.time_limit_seconds = time_limit;
      b.threads = common.threads;
      const auto rep = qcert::min_search(p, b);
      Json j;
      j["problem"] = p.descriptor();
      j["engine"] = p.alphabet().size() == 1 ? "unary-shape" : "identify";
      j["report"] = qcert::minimality_to_json(rep);
      os << j.dump(2) << '\n';
      rc = rep.min_states ? kOk : kNegative;
    } else if (name == "pfa-opt") {
      problem_used = "eo:k=1:imax=" + std::to_string(i_max);
      const auto best = qcert::optimal_two_state_pfa(i_max);
      Json j;
      j["problem"] = problem_used;
      j["x"] = best.x;
      j["y"] = best.y;
      j["state_labels"] = {best.state_labels[0] == 0 ? "y" : "n", best.state_labels[1] == 0 ? "y" : "n"};
      j["p_c"] = best.p_fail;
      j["closed_form"] = qcert::two_state_pfa_floor(i_max);
      if (best.p_fail > 0) j["alpha"] = 1.0 / (2.0 * best.p_fail);
      os << j.dump(2) << '\n';
    } else if (name == "qfa-check") {
      const auto p = qcert::parse_problem(problem);
      Json j;
      j["problem"] = p.descriptor();
      qcert::ErrorVerdict v;
      if (model_path.empty()) {
        v = qcert::solves_with_error(qcert::make_canonical_qfa(p), p, eps, max_len);
        j["model"] = "canonical";
      } else {
        v = qcert::solves_with_error(qcert::model_from_json(qcert::read_json_file(model_path)), p, eps, max_len);
        j["model"] = model_path;
      }
      j["eps"] = eps;
      j["solves"] = v.solves;
      j["counterexample"] = v.counterexample ? Json(*v.counterexample) : Json(nullptr);
      j["min_success"] = v.min_success;
      j["words_checked"] = v.words_checked;
      os << j.dump(2) << '\n';
      rc = v.solves ? kOk : kNegative;
    } else if (name == "classify-eo") {
      problem_used = "eo:k=" + std::to_string(k);
      const auto p = qcert::make_eo(k);
      const std::size_t check = check_len == 0 ? (std::size_t{4} << k) << k : check_len;
      auto classify_one = [&](const qcert::Matrix& u) {
        const qcert::Qfa q(p.alphabet(), p.labels(), {qcert::states::plus(), qcert::states::minus()}, {u},
                           qcert::states::plus(), {0, 1});
        const auto c = qcert::classify_eo_qfa(q, k, check);
        Json j;
        j["unitary"] = qcert::matrix_to_json(u);
        j["valid"] = c.valid;
        if (c.valid) {
          j["j"] = c.j;
          j["conjugated"] = c.conjugated;
          j["alpha"] = c.alpha;
          j["basis_change"] = qcert::matrix_to_json(c.basis_change);
        } else {
          j["reason"] = c.reason;
        }
        return std::make_pair(c.valid, j);
      };
      if (haar > 0) {
        const auto seed = require_seed(common, "classify-eo --haar");
        Json arr = Json::array();
        std::size_t accepted = 0;
        for (std::size_t i = 0; i < haar; ++i) {
          auto [ok, j] = classify_one(qcert::haar_unitary(2, qcert::child_seed(seed, i)));
          accepted += ok;
          arr.push_back(j);
        }
        Json j;
        j["k"] = k;
        j["accepted"] = accepted;
        j["results"] = arr;
        os << j.dump(2) << '\n';
        rc = accepted == 0 ? kOk : kNegative;
      } else {
        auto [ok, j] = classify_one(parse_unitary(unitary));
        j["k"] = k;
        os << j.dump(2) << '\n';
        rc = ok ? kOk : kNegative;
      }
    } else if (name == "noise-curve") {
      const auto seed = require_seed(common, "noise-curve");
      const auto p = qcert::restrict_index(qcert::make_eo(1), i_max);
      problem_used = p.descriptor();
      std::vector<double> ts;
      if (t_grid.empty()) {
        for (int i = 0; i <= 20; ++i) ts.push_back(i / 20.0);
      } else {
        std::stringstream ss(t_grid);
        std::string item;
        while (std::getline(ss, item, ',')) ts.push_back(std::stod(item));
      }
      qcert::LjOptions lj;
      lj.seed = seed;
      os << "family,t,p_fail,infid\n";
      for (auto kind : parse_families(family))
        qcert::write_noise_curve_csv(os, qcert::noise_curve(kind, p, ts, common.threads, lj), false);
    } else if (name == "slope") {
      const auto seed = require_seed(common, "slope");
      problem_used = "eo:k=1:imax=" + std::to_string(i_max);
      qcert::LjOptions lj;
      lj.seed = seed;
      Json arr = Json::array();
      for (auto kind : parse_families(family)) {
        const auto s = qcert::slope_estimate(kind, i_max, qcert::default_slope_grid(), common.threads, lj);
        Json j;
        j["family"] = qcert::noise_name(kind);
        j["i_max"] = i_max;
        j["alpha_hat"] = s.alpha_hat;
        j["t_grid"] = s.t_grid;
        j["p_fail"] = s.p_fail;
        j["infid"] = s.infid;
        arr.push_back(j);
      }
      os << arr.dump(2) << '\n';
    } else if (name == "survey") {
      const auto seed = require_seed(common, "survey");
      const auto p = qcert::restrict_index(qcert::make_eo(1), i_max);
      problem_used = p.descriptor();
      qcert::write_survey_csv(os, qcert::survey(p, n, seed, common.threads));
    } else if (name == "eb-demo") {
      problem_used = "eo:k=1:imax=2";
      const auto r = qcert::eb_demo();
      Json j;
      j["problem"] = problem_used;
      j["success"] = r.success;
      j["reject_sigma2"] = r.reject_sigma2;
      j["accept_sigma4"] = r.accept_sigma4;
      j["classical_success"] = r.classical_success;
      j["trace_defect"] = r.cptp.trace_defect;
      j["min_choi_eigenvalue"] = r.cptp.min_choi_eigenvalue;
      j["cptp"] = r.cptp.valid;
      j["min_ppt_eigenvalue"] = r.min_ppt_eigenvalue;
      j["entanglement_breaking"] = r.entanglement_breaking;
      j["model"] = qcert::model_to_json(r.model);
      os << j.dump(2) << '\n';
      rc = r.success > r.classical_success && r.cptp.valid && r.entanglement_breaking ? kOk : kNegative;
    } else if (name == "ingest-eval") {
      const auto seed = require_seed(common, "ingest-eval");
      const auto p = qcert::parse_problem(problem.empty() ? "eo:k=1:imax=3" : problem);
      problem_used = p.descriptor();
      const auto in = qcert::ingest_channels(qcert::read_json_file(channels_path));
      for (const auto& r : in.rejected) std::cerr << "skipped channel " << r.id << ": " << r.reason << '\n';
      qcert::write_external_csv(os, qcert::evaluate_external(in, p, seed, common.threads));
    } else if (name == "verify-claims") {
      qcert::ClaimsOptions opt;
      opt.word_budget = max_len;
      opt.threads = common.threads;
      const auto rows = qcert::verify_claims(opt);
      os << "problem,claimed,found,match,method,note\n";
      bool all = true;
      for (const auto& r : rows) {
        all = all && r.match;
        os << r.problem << ',' << r.claimed << ',' << (r.found ? std::to_string(*r.found) : "") << ','
           << (r.match ? "yes" : "no") << ',' << r.method << ",\"" << r.note << "\"\n";
      }
      rc = all ? kOk : kNegative;
    }

    os.flush();
    if (out.is_file()) {
      qcert::RunManifest m;
      m.command_line = command_line;
      m.problem = problem_used;
      m.seed = common.seed;
      m.threads = common.threads;
      m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      m.outputs = {out.path()};
      std::ofstream mf(out.path() + ".manifest.json");
      mf << qcert::manifest_to_json(m).dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return rc;
}
