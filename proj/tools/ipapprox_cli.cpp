#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ipapprox/apps.hpp"
#include "ipapprox/config_solver.hpp"
#include "ipapprox/errors.hpp"
#include "ipapprox/general_solver.hpp"
#include "ipapprox/generate.hpp"
#include "ipapprox/instance_io.hpp"
#include "ipapprox/nfold_solver.hpp"
#include "ipapprox/oracle.hpp"
#include "ipapprox/report.hpp"

using namespace ipapprox;
using nlohmann::json;

namespace {

enum Exit : int {
  kSolved = 0,
  kUsage = 1,
  kNearFeasibilityUnattainable = 2,
  kInfeasible = 3,
  kResourceLimit = 4,
  kOracleMismatch = 5,
  kInternal = 6,
};

struct SolveOptions {
  std::string input;
  std::string epsilon = "1/2";
  std::string pipeline = "auto";
  bool oracle_check = false;
  std::string json_out;
  std::size_t refine_limit = 8;
  std::uint64_t node_limit = 1'000'000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct OracleCliOptions {
  std::string input;
  std::uint64_t cap = 10'000'000;
  unsigned workers = 1;
};

struct GenOptions {
  std::string kind = "general";
  std::size_t m = 2;
  std::size_t n = 6;
  std::size_t blocks = 3;
  std::size_t s = 2;
  std::size_t t = 2;
  std::int64_t delta_max = 5;
  std::int64_t u_max = 3;
  std::uint64_t seed = 0;
  std::string out;
};

void emit(const json& doc, const std::string& path) {
  const std::string text = dump_report(doc);
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

int exit_for(const ApproxResult& r) {
  switch (r.status) {
    case Status::Solved:
      return r.report.within_bound ? kSolved : kNearFeasibilityUnattainable;
    case Status::NearFeasibilityUnattainable:
      return kNearFeasibilityUnattainable;
    case Status::Infeasible:
      return kInfeasible;
  }
  return kInternal;
}

std::string resolve_pipeline(const std::string& requested, const Instance& inst) {
  const std::string kind = kind_name(inst);
  if (requested == "auto") {
    if (kind == "general") return "general";
    if (kind == "nfold_nonneg") return "nfold";
    return "nfold-config";
  }
  const bool ok = (requested == "general" && (kind == "general" || kind == "nfold_nonneg")) ||
                  (requested == "nfold-config" && (kind == "nfold_config" || kind == "scheduling")) ||
                  (requested == "nfold" && kind == "nfold_nonneg");
  if (!ok) throw std::invalid_argument("pipeline " + requested + " does not accept kind " + kind);
  return requested;
}

OracleResult run_oracle(const Instance& inst, const OracleOptions& opts) {
  if (const auto* g = std::get_if<GeneralIP>(&inst)) return brute_force_general(*g, opts);
  if (const auto* c = std::get_if<NFoldConfigInstance>(&inst)) return brute_force_config(*c, opts);
  if (const auto* nn = std::get_if<NFoldNonnegInstance>(&inst)) return brute_force_nfold(*nn, opts);
  const auto& s = std::get<SchedulingInstance>(inst);
  const ScheduleEncoding enc = s.costs ? gap_to_config(s) : scheduling_to_config(s);
  return brute_force_config(enc.inst, opts);
}

int cmd_solve(const SolveOptions& o) {
  const Instance inst = load_instance(o.input);
  ApproxParams params;
  params.epsilon = parse_rat(o.epsilon);
  if (sgn(params.epsilon) <= 0) throw std::invalid_argument("--epsilon must be positive");
  params.refinement_limit = o.refine_limit;
  params.node_limit = o.node_limit;
  const std::string pipeline = resolve_pipeline(o.pipeline, inst);

  ApproxResult r;
  json extra;
  std::optional<ScheduleEncoding> enc;
  if (pipeline == "general") {
    if (const auto* nn = std::get_if<NFoldNonnegInstance>(&inst)) {
      r = solve_general(flatten(*nn), params);
    } else {
      r = solve_general(std::get<GeneralIP>(inst), params);
    }
  } else if (pipeline == "nfold") {
    r = solve_nfold(std::get<NFoldNonnegInstance>(inst), params);
  } else if (const auto* s = std::get_if<SchedulingInstance>(&inst)) {
    enc = s->costs ? gap_to_config(*s) : scheduling_to_config(*s);
    r = solve_nfold_config(enc->inst, params);
    if (r.has_solution) {
      const Schedule sched = decode_schedule(*enc, r.choices);
      extra["machine"] = sched.machine;
      extra["makespan"] = rat_json(makespan(*s, sched.machine));
      extra["makespan_limit"] = rat_json(s->cmax + params.epsilon * max_processing_time(*s));
      if (s->costs) extra["assignment_cost"] = rat_json(assignment_cost(*s, sched.machine));
    }
  } else {
    r = solve_nfold_config(std::get<NFoldConfigInstance>(inst), params);
  }

  json doc = report_json(r);
  doc["kind"] = kind_name(inst);
  doc["pipeline"] = pipeline;
  doc["epsilon"] = rat_json(params.epsilon);
  doc["seed"] = o.seed;
  if (!extra.is_null()) doc["schedule"] = extra;

  int code = exit_for(r);
  if (o.oracle_check) {
    OracleOptions oo;
    oo.workers = o.workers;
    GeneralIP flat;
    const bool flattened = pipeline == "general" && std::holds_alternative<NFoldNonnegInstance>(inst);
    if (flattened) flat = flatten(std::get<NFoldNonnegInstance>(inst));
    const OracleResult oracle = flattened ? brute_force_general(flat, oo) : run_oracle(inst, oo);
    doc["oracle"] = oracle_json(oracle);
    bool pass = true;
    std::ostringstream why;
    if (oracle.feasible) {
      if (!r.has_solution || r.status != Status::Solved) {
        pass = false;
        why << "oracle found OPT=" << to_string(oracle.opt) << " but the solver reported " << to_string(r.status);
      } else {
        if (r.report.objective > oracle.opt) {
          pass = false;
          why << "objective " << to_string(r.report.objective) << " exceeds OPT " << to_string(oracle.opt) << "; ";
        }
        if (!r.report.within_bound) {
          pass = false;
          why << "violation " << to_string(r.report.max_abs_residual) << " exceeds bound "
              << to_string(r.report.bound);
        }
      }
    }
    doc["oracle_check"] = pass ? "pass" : "fail";
    if (!pass) {
      std::cerr << "oracle check failed: " << why.str() << "\n";
      code = kOracleMismatch;
    }
  }

  if (o.json_out.empty()) {
    emit(doc, "");
  } else {
    emit(doc, o.json_out);
    std::cout << "status " << to_string(r.status);
    if (r.has_solution) std::cout << " objective " << to_string(r.report.objective);
    std::cout << "\n";
  }
  return code;
}

int cmd_oracle(const OracleCliOptions& o) {
  const Instance inst = load_instance(o.input);
  OracleOptions oo;
  oo.cap = o.cap;
  oo.workers = o.workers;
  const OracleResult r = run_oracle(inst, oo);
  json doc = oracle_json(r);
  doc["kind"] = kind_name(inst);
  emit(doc, "");
  return r.feasible ? kSolved : kInfeasible;
}

int cmd_gen(const GenOptions& o) {
  GenRng rng(o.seed);
  json doc;
  if (o.kind == "general") {
    GeneralGenSpec spec;
    spec.m = o.m;
    spec.n = o.n;
    spec.delta_max = o.delta_max;
    doc = to_json(generate_general(spec, rng));
  } else if (o.kind == "nfold_config") {
    ConfigGenSpec spec;
    spec.blocks = o.blocks;
    spec.s = o.s;
    spec.t = o.t;
    spec.delta_max = o.delta_max;
    doc = to_json(generate_config(spec, rng));
  } else if (o.kind == "nfold_nonneg") {
    NonnegGenSpec spec;
    spec.blocks = o.blocks;
    spec.sa = o.s;
    spec.sd = o.s;
    spec.t = o.t;
    spec.delta_max = o.delta_max;
    spec.u_max = o.u_max;
    doc = to_json(generate_nonneg(spec, rng));
  } else if (o.kind == "scheduling") {
    SchedulingGenSpec spec;
    spec.jobs = o.n;
    spec.machines = o.m;
    spec.p_max = o.delta_max;
    doc = to_json(generate_scheduling(spec, rng));
  } else {
    throw std::invalid_argument("unknown --kind " + o.kind);
  }
  emit(doc, o.out);
  return kSolved;
}

int cmd_check(const std::string& input) {
  const Instance inst = load_instance(input);
  Validation v;
  if (const auto* g = std::get_if<GeneralIP>(&inst)) v = validate_general(*g);
  if (const auto* c = std::get_if<NFoldConfigInstance>(&inst)) v = validate_config(*c);
  if (const auto* nn = std::get_if<NFoldNonnegInstance>(&inst)) v = validate_nonneg(*nn);
  if (const auto* s = std::get_if<SchedulingInstance>(&inst)) {
    try {
      v = validate_config(s->costs ? gap_to_config(*s).inst : scheduling_to_config(*s).inst);
    } catch (const std::invalid_argument& e) {
      v.errors.push_back(e.what());
    }
  }
  if (!v.ok()) {
    for (const auto& e : v.errors) std::cerr << "error: " << e << "\n";
    return kUsage;
  }
  std::cout << "ok " << kind_name(inst) << " delta " << to_string(v.delta) << "\n";
  return kSolved;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact near-feasible approximation for integer programs"};
  app.require_subcommand(1);

  SolveOptions so;
  auto* solve = app.add_subcommand("solve", "Run an approximation pipeline");
  solve->add_option("--input", so.input, "Instance JSON file")->required();
  solve->add_option("--epsilon", so.epsilon, "Accuracy as a rational, e.g. 1/5");
  solve->add_option("--pipeline", so.pipeline)->check(CLI::IsMember({"auto", "general", "nfold-config", "nfold"}));
  solve->add_flag("--oracle-check", so.oracle_check, "Compare against the brute-force optimum");
  solve->add_option("--json-out", so.json_out, "Write the report here instead of stdout");
  solve->add_option("--refine-limit", so.refine_limit);
  solve->add_option("--node-limit", so.node_limit);
  solve->add_option("--seed", so.seed);
  solve->add_option("--workers", so.workers, "Oracle threads")->check(CLI::PositiveNumber);

  OracleCliOptions oo;
  auto* oracle = app.add_subcommand("oracle", "Exact optimum by enumeration");
  oracle->add_option("--input", oo.input)->required();
  oracle->add_option("--cap", oo.cap, "Largest number of points enumerated");
  oracle->add_option("--workers", oo.workers)->check(CLI::PositiveNumber);

  GenOptions go;
  auto* gen = app.add_subcommand("gen", "Generate a random feasible instance");
  gen->add_option("--kind", go.kind)->check(CLI::IsMember({"general", "nfold_config", "nfold_nonneg", "scheduling"}));
  gen->add_option("--m", go.m, "Rows (general) or machines (scheduling)");
  gen->add_option("--n", go.n, "Columns (general) or jobs (scheduling)");
  gen->add_option("--blocks", go.blocks);
  gen->add_option("--s", go.s, "Coupling rows (and local rows for nfold_nonneg)");
  gen->add_option("--t", go.t, "Columns per block");
  gen->add_option("--delta-max", go.delta_max, "Largest absolute matrix entry (or processing time)");
  gen->add_option("--u-max", go.u_max);
  gen->add_option("--seed", go.seed);
  gen->add_option("--out", go.out);

  std::string check_input;
  auto* check = app.add_subcommand("check", "Validate an instance file");
  check->add_option("--input", check_input)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*solve) return cmd_solve(so);
    if (*oracle) return cmd_oracle(oo);
    if (*gen) return cmd_gen(go);
    return cmd_check(check_input);
  } catch (const ParseError& e) {
    std::cerr << "parse error at " << e.what() << "\n";
    return kUsage;
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kResourceLimit;
  } catch (const InvariantViolation& e) {
    std::cerr << "internal invariant violated: " << e.what() << "\n";
    return kInternal;
  } catch (const UnsupportedInstance& e) {
    std::cerr << "unsupported instance: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
