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

// JSON and CSV formats: automata, quantum models, Kraus channel files,
// search reports and run manifests.
//
// Complex numbers are [re, im] pairs; matrices are row-major arrays of rows.

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcert/automata.hpp"
#include "qcert/minsearch.hpp"
#include "qcert/qmodel.hpp"
#include "qcert/robust.hpp"

namespace qcert {

inline constexpr const char* kVersion = "1.0.0";

using Json = nlohmann::ordered_json;

/// Shortest round-trip form with 17 significant digits.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Matrices

inline Json complex_to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw std::invalid_argument("expected a complex number [re, im], got " + j.dump());
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty())
    throw std::invalid_argument("expected a nonempty matrix (array of rows)");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw std::invalid_argument("matrix rows have unequal length");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

inline Json kraus_to_json(const KrausChannel& ch) {
  Json ops = Json::array();
  for (const auto& k : ch.ops()) ops.push_back(matrix_to_json(k));
  return ops;
}

inline KrausChannel kraus_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("expected a nonempty list of Kraus operators");
  std::vector<Matrix> ops;
  for (const auto& k : j) ops.push_back(matrix_from_json(k));
  return KrausChannel(std::move(ops));
}

// ---------------------------------------------------------------------------
// Automata

inline Json dfa_to_json(const Pvdfa& d) {
  Json j;
  j["states"] = d.num_states();
  Json alpha = Json::array();
  for (char c : d.alphabet().symbols()) alpha.push_back(std::string(1, c));
  j["alphabet"] = alpha;
  j["delta"] = d.delta();
  j["initial"] = d.initial();
  Json labels = Json::object();
  const auto sets = d.labeled_sets();
  for (std::size_t l = 0; l < d.labels().size(); ++l) labels[d.labels().name(l)] = sets[l];
  j["labels"] = labels;
  return j;
}

inline Pvdfa dfa_from_json(const Json& j) {
  try {
    const auto n = j.at("states").get<std::size_t>();
    std::string symbols;
    for (const auto& s : j.at("alphabet")) {
      const auto str = s.get<std::string>();
      if (str.size() != 1) throw std::invalid_argument("alphabet symbols must be single characters");
      symbols += str;
    }
    auto delta = j.at("delta").get<std::vector<std::vector<std::size_t>>>();
    if (delta.size() != n) throw std::invalid_argument("delta must have one row per state");
    std::vector<std::string> names;
    std::vector<int> state_labels(n, kUnlabeled);
    for (const auto& [name, states] : j.at("labels").items()) {
      names.push_back(name);
      for (const auto& s : states) {
        const auto idx = s.get<std::size_t>();
        if (idx >= n) throw std::invalid_argument("labeled state out of range");
        if (state_labels[idx] != kUnlabeled) throw std::invalid_argument("labeled sets must be disjoint");
        state_labels[idx] = static_cast<int>(names.size() - 1);
      }
    }
    return Pvdfa(Alphabet(symbols), LabelSet(names), std::move(delta), j.at("initial").get<std::size_t>(),
                 std::move(state_labels));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("DFA JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Quantum models

inline Json model_to_json(const QuantumModel& m) {
  Json j;
  j["dim"] = m.dim();
  j["rho"] = matrix_to_json(m.rho().matrix());
  Json chans = Json::object();
  for (std::size_t a = 0; a < m.alphabet().size(); ++a)
    chans[std::string(1, m.alphabet().symbol(a))] = kraus_to_json(m.channel(a));
  j["channels"] = chans;
  Json povm = Json::object();
  for (std::size_t l = 0; l < m.labels().size(); ++l) povm[m.labels().name(l)] = matrix_to_json(m.povm()[l]);
  j["povm"] = povm;
  return j;
}

inline QuantumModel model_from_json(const Json& j) {
  try {
    const auto dim = j.at("dim").get<std::size_t>();
    const Matrix rho = matrix_from_json(j.at("rho"));
    if (static_cast<std::size_t>(rho.rows()) != dim || static_cast<std::size_t>(rho.cols()) != dim)
      throw std::invalid_argument("rho has the wrong dimension");
    std::string symbols;
    std::vector<KrausChannel> chans;
    for (const auto& [name, ops] : j.at("channels").items()) {
      if (name.size() != 1) throw std::invalid_argument("channel keys must be single-character symbols");
      symbols += name;
      chans.push_back(kraus_from_json(ops));
    }
    std::vector<std::string> names;
    std::vector<Matrix> povm;
    for (const auto& [name, m] : j.at("povm").items()) {
      names.push_back(name);
      povm.push_back(matrix_from_json(m));
    }
    return QuantumModel(Alphabet(symbols), LabelSet(names), DensityMatrix(rho), std::move(chans), std::move(povm));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("model JSON: ") + e.what());
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Channel ingestion

struct IngestedChannel {
  std::string id;
  std::optional<KrausChannel> channel;  // set when accepted
  CptpReport report;
  std::string reason;  // why the entry was skipped
};

struct IngestResult {
  std::vector<IngestedChannel> accepted;
  std::vector<IngestedChannel> rejected;
};

/// Accepts {"channels": {id: [kraus...]}} (a quantum-model file qualifies) or
/// a list of {"id": ..., "kraus": [...]}. Every channel must be dim x dim;
/// entries failing the CPTP check are skipped with their defects.
inline IngestResult ingest_channels(const Json& j, std::size_t dim = 2) {
  std::vector<std::pair<std::string, Json>> entries;
  if (j.is_object() && j.contains("channels") && j["channels"].is_object()) {
    for (const auto& [id, ops] : j["channels"].items()) entries.emplace_back(id, ops);
  } else if (j.is_array()) {
    for (const auto& e : j) {
      if (!e.is_object() || !e.contains("id") || !e.contains("kraus"))
        throw std::invalid_argument("channel list entries need \"id\" and \"kraus\"");
      entries.emplace_back(e["id"].is_string() ? e["id"].get<std::string>() : e["id"].dump(), e["kraus"]);
    }
  } else {
    throw std::invalid_argument("channel file must hold a \"channels\" object or a list of {id, kraus}");
  }
  IngestResult out;
  for (auto& [id, ops] : entries) {
    KrausChannel ch = [&] {
      try {
        return kraus_from_json(ops);
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("channel \"" + id + "\": " + e.what());
      }
    }();
    if (ch.dim_in() != dim || ch.dim_out() != dim)
      throw std::invalid_argument("channel \"" + id + "\": expected " + std::to_string(dim) + "x" + std::to_string(dim) +
                                  " Kraus operators");
    IngestedChannel entry{id, std::nullopt, validate_cptp(ch), ""};
    if (entry.report.valid) {
      entry.channel = std::move(ch);
      out.accepted.push_back(std::move(entry));
    } else {
      entry.reason = "not CPTP: trace defect " + format_double(entry.report.trace_defect) + ", positivity defect " +
                     format_double(entry.report.positivity_defect);
      out.rejected.push_back(std::move(entry));
    }
  }
  return out;
}

struct ExternalPoint {
  std::string id;
  SurveyPoint point;
};

/// One survey-style point per accepted channel; the optimizer seed of entry
/// i is child_seed(seed, i).
inline std::vector<ExternalPoint> evaluate_external(const IngestResult& in, const PromiseProblem& p, std::uint64_t seed,
                                                    std::size_t threads = 1) {
  std::vector<ExternalPoint> out(in.accepted.size());
  const QuantumModel target = make_target_model();
  parallel_for(out.size(), threads, [&](std::size_t i) {
    const std::uint64_t s = child_seed(seed, i);
    out[i] = {in.accepted[i].id, survey_point(*in.accepted[i].channel, p, s, target)};
    out[i].point.index = i;
  });
  return out;
}

// ---------------------------------------------------------------------------
// CSV

inline void write_survey_csv(std::ostream& os, const std::vector<SurveyPoint>& pts) {
  os << "index,seed,p_fail,infid,kraus_rank\n";
  for (const auto& p : pts)
    os << p.index << ',' << p.seed << ',' << format_double(p.p_fail) << ',' << format_double(p.infid) << ','
       << p.kraus_rank << '\n';
}

inline void write_external_csv(std::ostream& os, const std::vector<ExternalPoint>& pts) {
  os << "id,index,seed,p_fail,infid,kraus_rank\n";
  for (const auto& e : pts)
    os << e.id << ',' << e.point.index << ',' << e.point.seed << ',' << format_double(e.point.p_fail) << ','
       << format_double(e.point.infid) << ',' << e.point.kraus_rank << '\n';
}

inline void write_noise_curve_csv(std::ostream& os, const std::vector<NoiseCurvePoint>& pts, bool header = true) {
  if (header) os << "family,t,p_fail,infid\n";
  for (const auto& p : pts)
    os << noise_name(p.kind) << ',' << format_double(p.t) << ',' << format_double(p.p_fail) << ','
       << format_double(p.infid) << '\n';
}

// ---------------------------------------------------------------------------
// Reports

inline Json minimality_to_json(const MinimalityReport& r) {
  Json j;
  j["min_states"] = r.min_states ? Json(*r.min_states) : Json(nullptr);
  j["lower_bound"] = r.lower_bound;
  j["equivalence_classes"] = r.equivalence_classes;
  Json fw = Json::object();
  for (const auto& [n, w] : r.failure_witnesses) fw[std::to_string(n)] = w;
  j["failure_witnesses"] = fw;
  Json ws = Json::array();
  for (const auto& w : r.witnesses) ws.push_back(dfa_to_json(w));
  j["witnesses"] = ws;
  j["complete"] = r.complete;
  j["nodes_explored"] = r.nodes_explored;
  j["wall_seconds"] = r.seconds;
  return j;
}

struct RunManifest {
  std::string command_line;
  std::string problem;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
  double wall_seconds = 0.0;
  std::vector<std::string> outputs;
};

inline Json manifest_to_json(const RunManifest& m) {
  Json j;
  j["tool"] = "qcert";
  j["version"] = kVersion;
  j["command_line"] = m.command_line;
  j["problem"] = m.problem;
  j["seed"] = m.seed ? Json(*m.seed) : Json(nullptr);
  j["threads"] = m.threads;
  j["wall_seconds"] = m.wall_seconds;
  j["outputs"] = m.outputs;
  return j;
}

}  // namespace qcert
