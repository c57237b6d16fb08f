#include "ipapprox/report.hpp"

#include "ipapprox/instance_io.hpp"

namespace ipapprox {

using nlohmann::json;

namespace {

void put_rat(json& j, const std::string& key, const Rat& v) {
  j[key] = rat_json(v);
  j[key + "_approx"] = approx(v);
}

json int_array(const IntVector& v) {
  json a = json::array();
  for (const auto& e : v) a.push_back(int_json(e));
  return a;
}

}  // namespace

json report_json(const ApproxResult& r) {
  json j;
  j["status"] = std::string(to_string(r.status));
  j["has_solution"] = r.has_solution;
  j["mode"] = r.report.mode == ViolationMode::Kind::Additive ? "additive" : "multiplicative";
  if (r.has_solution) {
    put_rat(j, "objective", r.report.objective);
    j["x"] = int_array(r.x);
    if (!r.choices.empty()) j["choices"] = r.choices;
    json residual = json::array();
    json residual_approx = json::array();
    for (const auto& e : r.report.residual) {
      residual.push_back(rat_json(e));
      residual_approx.push_back(approx(e));
    }
    j["residual"] = std::move(residual);
    j["residual_approx"] = std::move(residual_approx);
    put_rat(j, "max_abs_residual", r.report.max_abs_residual);
    put_rat(j, "bound", r.report.bound);
    j["within_bound"] = r.report.within_bound;
  } else {
    j["objective"] = nullptr;
    j["residual"] = json::array();
    j["within_bound"] = false;
  }
  j["objective_guarantee_vacuous"] = r.objective_guarantee_vacuous;
  put_rat(j, "delta_used", r.delta_used);
  j["refinements"] = r.refinements;
  j["solve_stats"] = {{"lp_pivots", r.stats.lp_pivots}, {"bb_nodes", r.stats.bb_nodes}};
  j["notes"] = r.notes;
  return j;
}

json oracle_json(const OracleResult& r) {
  json j;
  j["feasible"] = r.feasible;
  if (r.feasible) {
    put_rat(j, "opt", r.opt);
    j["argmin"] = int_array(r.argmin);
    if (!r.choices.empty()) j["choices"] = r.choices;
  } else {
    j["opt"] = nullptr;
  }
  j["points"] = r.points;
  return j;
}

std::string dump_report(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace ipapprox
