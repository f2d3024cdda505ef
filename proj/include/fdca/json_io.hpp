// json_io.hpp — documented JSON forms for the domain values and the report
// schema emitted by the command-line tool.  Keys are emitted sorted and
// rationals normalized, so identical inputs produce byte-identical output.

#pragma once

#include "fdca/algebra.hpp"
#include "fdca/interp_params.hpp"
#include "fdca/popa_plan.hpp"
#include "fdca/rational.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <string>
#include <vector>

namespace fdca {

using Json = nlohmann::json;

inline Json rational_to_json(const Rational& q) { return format_rational(q); }

inline Rational rational_from_json(const Json& j) {
  if (!j.is_string()) throw Error("rationals serialize as \"p/q\" strings");
  return parse_rational(j.get<std::string>());
}

// {"summands":[n1,...]}
inline Json to_json(const MultiMatrixAlgebra& a) {
  return Json{{"summands", a.summands}};
}
inline MultiMatrixAlgebra algebra_from_json(const Json& j) {
  MultiMatrixAlgebra a{j.at("summands").get<std::vector<long>>()};
  a.validate();
  return a;
}

// {"minimal_traces":["1/2","1/2"]}
inline Json to_json(const TracialState& t) {
  Json traces = Json::array();
  for (const Rational& q : t.minimal_traces) traces.push_back(rational_to_json(q));
  return Json{{"minimal_traces", traces}};
}
inline TracialState trace_from_json(const Json& j) {
  TracialState t;
  for (const Json& q : j.at("minimal_traces")) t.minimal_traces.push_back(rational_from_json(q));
  return t;
}

// {"source":{...},"target":{...},"multiplicities":[[...]]}
inline Json to_json(const UnitalEmbedding& e) {
  return Json{{"source", to_json(e.source)},
              {"target", to_json(e.target)},
              {"multiplicities", e.multiplicities}};
}
inline UnitalEmbedding embedding_from_json(const Json& j) {
  UnitalEmbedding e{algebra_from_json(j.at("source")),
                    algebra_from_json(j.at("target")),
                    j.at("multiplicities").get<std::vector<std::vector<long>>>()};
  e.validate();
  return e;
}

// {"levels":[[k1,l1],[k2,l2],...]}
inline Json to_json(const LevelSequence& seq) {
  Json levels = Json::array();
  for (const auto& lv : seq.levels) levels.push_back(Json::array({lv.k, lv.ell}));
  return Json{{"levels", levels}};
}
inline LevelSequence levels_from_json(const Json& j) {
  LevelSequence seq;
  for (const Json& lv : j.at("levels")) {
    if (!lv.is_array() || lv.size() != 2) throw Error("levels are [k, ell] pairs");
    seq.levels.push_back({lv[0].get<long>(), lv[1].get<long>()});
  }
  seq.validate();
  return seq;
}

// {"lo":"p/q","hi":"p/q"}
inline Json to_json(const Enclosure& e) {
  return Json{{"lo", rational_to_json(e.lo)}, {"hi", rational_to_json(e.hi)}};
}
inline Enclosure enclosure_from_json(const Json& j) {
  Enclosure e{rational_from_json(j.at("lo")), rational_from_json(j.at("hi"))};
  e.validate();
  return e;
}

inline Json to_json(const ConstructionPlan& plan) {
  Json levels = Json::array();
  for (const PlanLevel& lv : plan.levels)
    levels.push_back(Json{{"m", lv.index},
                          {"alpha", rational_to_json(lv.alpha)},
                          {"p", lv.p},
                          {"q", lv.q},
                          {"j", lv.j},
                          {"k", lv.k},
                          {"ell", lv.ell},
                          {"t", lv.t}});
  return Json{{"target_s", rational_to_json(plan.target_s)},
              {"decay_p", plan.decay_p},
              {"levels", levels},
              {"enclosure", to_json(plan.achieved)}};
}

inline ConstructionPlan plan_from_json(const Json& j) {
  ConstructionPlan plan;
  plan.target_s = rational_from_json(j.at("target_s"));
  plan.decay_p = j.at("decay_p").get<long>();
  for (const Json& lv : j.at("levels")) {
    PlanLevel level;
    level.index = lv.at("m").get<int>();
    level.alpha = rational_from_json(lv.at("alpha"));
    level.p = lv.at("p").get<long long>();
    level.q = lv.at("q").get<long long>();
    level.j = lv.at("j").get<long long>();
    level.k = lv.at("k").get<long long>();
    level.ell = lv.at("ell").get<long long>();
    level.t = lv.at("t").get<long long>();
    plan.levels.push_back(level);
  }
  plan.achieved = enclosure_from_json(j.at("enclosure"));
  return plan;
}

// Complex matrices as row-major arrays of [re, im] pairs.
inline Json matrix_to_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(row);
  }
  return rows;
}

inline Eigen::MatrixXcd matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw Error("matrix JSON must be a nonempty array");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[r].size()) != cols)
      throw Error("matrix rows must have equal length");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& cell = j[r][c];
      if (!cell.is_array() || cell.size() != 2)
        throw Error("matrix entries are [re, im] pairs");
      m(r, c) = std::complex<double>(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct Check {
  enum class Status { Pass, Fail, Warn };
  std::string name;
  Status status = Status::Pass;
  std::string detail;
};

struct Report {
  std::string command;
  std::vector<Check> checks;
  Json artifacts = Json::object();

  void add(const std::string& name, bool pass, const std::string& detail = "") {
    checks.push_back({name, pass ? Check::Status::Pass : Check::Status::Fail,
                      !pass && detail.empty() ? "check failed" : detail});
  }
  void warn(const std::string& name, const std::string& detail) {
    checks.push_back({name, Check::Status::Warn, detail});
  }

  bool all_pass() const {
    for (const Check& c : checks)
      if (c.status == Check::Status::Fail) return false;
    return true;
  }

  Json to_json() const {
    Json list = Json::array();
    for (const Check& c : checks) {
      const char* status = c.status == Check::Status::Pass   ? "pass"
                           : c.status == Check::Status::Fail ? "fail"
                                                             : "warn";
      list.push_back(Json{{"name", c.name}, {"status", status}, {"detail", c.detail}});
    }
    return Json{{"command", command}, {"checks", list}, {"artifacts", artifacts}};
  }

  std::string dump() const { return to_json().dump(2) + "\n"; }
};

inline Json to_json(const PlanVerification& verification) {
  Json list = Json::array();
  for (const PlanCheck& c : verification.checks)
    list.push_back(Json{{"name", c.name},
                        {"status", c.pass ? "pass" : "fail"},
                        {"detail", c.detail}});
  return list;
}

}  // namespace fdca
