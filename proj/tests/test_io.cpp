#include "doctest.h"
#include "ipapprox/generate.hpp"
#include "ipapprox/instance_io.hpp"
#include "ipapprox/report.hpp"
#include "ipapprox/general_solver.hpp"

using namespace ipapprox;
using nlohmann::json;

namespace {

std::string error_path(const json& doc) {
  try {
    parse_instance(doc);
  } catch (const ParseError& e) {
    return e.path();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("parse a general instance") {
  auto doc = json::parse(R"({"format":1,"kind":"general","H":[["2","3/6","-5"]],"b":["10"],
                            "w":[1,1,"1"],"l":[0,0,0],"u":[3,3,2]})");
  auto inst = parse_instance(doc);
  REQUIRE(std::holds_alternative<GeneralIP>(inst));
  const auto& g = std::get<GeneralIP>(inst);
  CHECK(g.H(0, 1) == make_rat(1, 2));
  CHECK(g.H(0, 2) == -5);
  CHECK(g.u == IntVector{3, 3, 2});
  CHECK(kind_name(inst) == "general");
}

TEST_CASE("parse errors name the JSON path") {
  CHECK(error_path(json::parse(R"({"kind":"general"})")) == "/format");
  CHECK(error_path(json::parse(R"({"format":2,"kind":"general"})")) == "/format");
  CHECK(error_path(json::parse(R"({"format":1,"kind":"sphere"})")) == "/kind");
  CHECK(error_path(json::parse(R"({"format":1,"kind":"general","H":[["1","a"]],"b":[],"w":[],"l":[],"u":[]})")) == "/H/0/1");
  CHECK(error_path(json::parse(R"({"format":1,"kind":"general","H":[["1"],["1","2"]],"b":[],"w":[],"l":[],"u":[]})")) == "/H/1");
  CHECK(error_path(json::parse(R"({"format":1,"kind":"general","H":[["1"]],"b":["1"],"w":["1"],"l":["1/2"],"u":[1]})")) == "/l/0");
  CHECK(error_path(json::parse(R"({"format":1,"kind":"nfold_config","blocks":[{"D":[["1"]],"configs":[[0],[true]],"weights":["0"]}],"b0":["1"]})")) ==
        "/blocks/0/configs/1/0");
  CHECK(error_path(json::parse(R"({"format":1,"kind":"nfold_nonneg","blocks":[{"A":[["1"]],"D":[["1"]],"u":[1],"w":["0"]}],"b0":["1"]})")) ==
        "/blocks/0/bi");
  CHECK(error_path(json::parse(R"({"jobs":[["1","2"]]})")) == "/cmax");
}

TEST_CASE("scheduling files are recognised by their jobs member") {
  auto inst = parse_instance(json::parse(R"({"jobs":[[1,2],[3,"1/2"]],"cmax":"3"})"));
  REQUIRE(std::holds_alternative<SchedulingInstance>(inst));
  const auto& s = std::get<SchedulingInstance>(inst);
  CHECK(s.p[1][1] == make_rat(1, 2));
  CHECK_FALSE(s.costs.has_value());
}

TEST_CASE("property: generated instances survive a JSON round trip") {
  GenRng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    GeneralGenSpec gs;
    gs.m = static_cast<std::size_t>(rng.uniform(1, 3));
    gs.n = static_cast<std::size_t>(rng.uniform(1, 6));
    const GeneralIP g = generate_general(gs, rng);
    const Instance gi = parse_instance(json::parse(to_json(g).dump()));
    const auto& g2 = std::get<GeneralIP>(gi);
    CHECK(g2.H.rows() == g.H.rows());
    CHECK(g2.b == g.b);
    CHECK(g2.w == g.w);
    CHECK(g2.l == g.l);
    CHECK(g2.u == g.u);
    CHECK(to_json(g2) == to_json(g));

    ConfigGenSpec cs;
    cs.blocks = static_cast<std::size_t>(rng.uniform(1, 5));
    const auto c = generate_config(cs, rng);
    CHECK(to_json(std::get<NFoldConfigInstance>(parse_instance(to_json(c)))) == to_json(c));

    NonnegGenSpec ns;
    const auto nn = generate_nonneg(ns, rng);
    CHECK(to_json(std::get<NFoldNonnegInstance>(parse_instance(to_json(nn)))) == to_json(nn));

    SchedulingGenSpec ss;
    ss.with_costs = rng.coin();
    const auto sc = generate_scheduling(ss, rng);
    CHECK(to_json(std::get<SchedulingInstance>(parse_instance(to_json(sc)))) == to_json(sc));
  }
}

TEST_CASE("integers beyond 64 bits are written as strings") {
  GeneralIP g{RatMatrix{{1}}, {Rat(Int("123456789012345678901234567890"))}, {0}, {0}, {Int("123456789012345678901234567890")}};
  json j = to_json(g);
  CHECK(j["u"][0].is_string());
  CHECK(std::get<GeneralIP>(parse_instance(j)).u[0] == Int("123456789012345678901234567890"));
}

TEST_CASE("generators are deterministic in the seed") {
  GenRng a(7);
  GenRng b(7);
  CHECK(to_json(generate_general({}, a)).dump() == to_json(generate_general({}, b)).dump());
  GenRng c(8);
  CHECK(to_json(generate_general({}, a)).dump() != to_json(generate_general({}, c)).dump());
}

TEST_CASE("report carries exact strings and approximations") {
  GeneralIP g{RatMatrix{{2, 3, 5}}, {10}, {1, 1, 1}, {0, 0, 0}, {3, 3, 2}};
  ApproxParams p;
  p.epsilon = make_rat(1, 5);
  json r = report_json(solve_general(g, p));
  CHECK(r["status"] == "Solved");
  CHECK(r["objective"].is_string());
  CHECK(r["objective_approx"].is_number());
  CHECK(r["delta_used"] == "1/10");
  for (const char* key : {"residual", "max_abs_residual", "bound", "within_bound", "refinements", "solve_stats"})
    CHECK(r.contains(key));
  CHECK(dump_report(r) == dump_report(report_json(solve_general(g, p))));
}
