#include "ipapprox/instance_io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

namespace ipapprox {

using nlohmann::json;

namespace {

std::string at(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string at(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

const json& member(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.is_object()) throw ParseError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(at(path, key), "missing member");
  return *it;
}

Rat read_rat(const json& v, const std::string& path) {
  if (v.is_number_integer()) {
    if (v.is_number_unsigned()) return Rat(Int(std::to_string(v.get<std::uint64_t>())));
    return Rat(Int(std::to_string(v.get<std::int64_t>())));
  }
  if (v.is_string()) {
    try {
      return parse_rat(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ParseError(path, e.what());
    }
  }
  throw ParseError(path, "expected a rational as a string \"p/q\" or an integer");
}

Int read_int(const json& v, const std::string& path) {
  const Rat r = read_rat(v, path);
  if (!is_integer(r)) throw ParseError(path, "expected an integer");
  return r.get_num();
}

const json& array(const json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError(path, "expected an array");
  return v;
}

RatVector read_rat_vector(const json& v, const std::string& path) {
  RatVector out;
  const json& a = array(v, path);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(read_rat(a[i], at(path, i)));
  return out;
}

IntVector read_int_vector(const json& v, const std::string& path) {
  IntVector out;
  const json& a = array(v, path);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(read_int(a[i], at(path, i)));
  return out;
}

RatMatrix read_matrix(const json& v, const std::string& path) {
  const json& a = array(v, path);
  std::vector<RatVector> rows;
  for (std::size_t i = 0; i < a.size(); ++i) rows.push_back(read_rat_vector(a[i], at(path, i)));
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw ParseError(at(path, i), "row length differs from row 0");
  }
  return RatMatrix::from_rows(rows, cols);
}

json matrix_json(const RatMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (const auto& e : m.row(r)) row.push_back(rat_json(e));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const RatVector& v) {
  json a = json::array();
  for (const auto& e : v) a.push_back(rat_json(e));
  return a;
}

json vector_json(const IntVector& v) {
  json a = json::array();
  for (const auto& e : v) a.push_back(int_json(e));
  return a;
}

SchedulingInstance read_scheduling(const json& doc) {
  SchedulingInstance s;
  const json& jobs = array(member(doc, "", "jobs"), "/jobs");
  for (std::size_t i = 0; i < jobs.size(); ++i) s.p.push_back(read_rat_vector(jobs[i], at("/jobs", i)));
  s.cmax = read_rat(member(doc, "", "cmax"), "/cmax");
  if (doc.contains("costs") && !doc["costs"].is_null()) {
    const json& costs = array(doc["costs"], "/costs");
    std::vector<RatVector> c;
    for (std::size_t i = 0; i < costs.size(); ++i) c.push_back(read_rat_vector(costs[i], at("/costs", i)));
    s.costs = std::move(c);
  }
  return s;
}

}  // namespace

json rat_json(const Rat& v) { return to_string(v); }

json int_json(const Int& v) {
  if (v.fits_slong_p()) return static_cast<std::int64_t>(v.get_si());
  return to_string(v);
}

Instance parse_instance(const json& doc) {
  if (!doc.is_object()) throw ParseError("", "expected an object");
  if (doc.contains("jobs")) return read_scheduling(doc);
  const json& format = member(doc, "", "format");
  if (!format.is_number_integer() || format.get<std::int64_t>() != 1) {
    throw ParseError("/format", "unsupported format version (expected 1)");
  }
  const json& kind = member(doc, "", "kind");
  if (!kind.is_string()) throw ParseError("/kind", "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "general") {
    GeneralIP g;
    g.H = read_matrix(member(doc, "", "H"), "/H");
    g.b = read_rat_vector(member(doc, "", "b"), "/b");
    g.w = read_rat_vector(member(doc, "", "w"), "/w");
    g.l = read_int_vector(member(doc, "", "l"), "/l");
    g.u = read_int_vector(member(doc, "", "u"), "/u");
    return g;
  }
  if (k == "nfold_config") {
    NFoldConfigInstance c;
    const json& blocks = array(member(doc, "", "blocks"), "/blocks");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const std::string p = at("/blocks", i);
      ConfigBlock b;
      b.D = read_matrix(member(blocks[i], p, "D"), at(p, "D"));
      const json& configs = array(member(blocks[i], p, "configs"), at(p, "configs"));
      for (std::size_t c2 = 0; c2 < configs.size(); ++c2) {
        b.configs.push_back(read_int_vector(configs[c2], at(at(p, "configs"), c2)));
      }
      b.weights = read_rat_vector(member(blocks[i], p, "weights"), at(p, "weights"));
      c.blocks.push_back(std::move(b));
    }
    c.b0 = read_rat_vector(member(doc, "", "b0"), "/b0");
    return c;
  }
  if (k == "nfold_nonneg") {
    NFoldNonnegInstance nn;
    const json& blocks = array(member(doc, "", "blocks"), "/blocks");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const std::string p = at("/blocks", i);
      NonnegBlock b;
      b.A = read_matrix(member(blocks[i], p, "A"), at(p, "A"));
      b.D = read_matrix(member(blocks[i], p, "D"), at(p, "D"));
      b.bi = read_rat_vector(member(blocks[i], p, "bi"), at(p, "bi"));
      b.u = read_int_vector(member(blocks[i], p, "u"), at(p, "u"));
      b.w = read_rat_vector(member(blocks[i], p, "w"), at(p, "w"));
      nn.blocks.push_back(std::move(b));
    }
    nn.b0 = read_rat_vector(member(doc, "", "b0"), "/b0");
    return nn;
  }
  if (k == "scheduling") return read_scheduling(doc);
  throw ParseError("/kind", "unknown kind \"" + k + "\"");
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("", "cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_instance(doc);
}

std::string kind_name(const Instance& inst) {
  switch (inst.index()) {
    case 0:
      return "general";
    case 1:
      return "nfold_config";
    case 2:
      return "nfold_nonneg";
    default:
      return "scheduling";
  }
}

json to_json(const GeneralIP& inst) {
  json j;
  j["format"] = 1;
  j["kind"] = "general";
  j["H"] = matrix_json(inst.H);
  j["b"] = vector_json(inst.b);
  j["w"] = vector_json(inst.w);
  j["l"] = vector_json(inst.l);
  j["u"] = vector_json(inst.u);
  return j;
}

json to_json(const NFoldConfigInstance& inst) {
  json j;
  j["format"] = 1;
  j["kind"] = "nfold_config";
  json blocks = json::array();
  for (const auto& b : inst.blocks) {
    json jb;
    jb["D"] = matrix_json(b.D);
    jb["configs"] = json::array();
    for (const auto& c : b.configs) jb["configs"].push_back(vector_json(c));
    jb["weights"] = vector_json(b.weights);
    blocks.push_back(std::move(jb));
  }
  j["blocks"] = std::move(blocks);
  j["b0"] = vector_json(inst.b0);
  return j;
}

json to_json(const NFoldNonnegInstance& inst) {
  json j;
  j["format"] = 1;
  j["kind"] = "nfold_nonneg";
  json blocks = json::array();
  for (const auto& b : inst.blocks) {
    json jb;
    jb["A"] = matrix_json(b.A);
    jb["D"] = matrix_json(b.D);
    jb["bi"] = vector_json(b.bi);
    jb["u"] = vector_json(b.u);
    jb["w"] = vector_json(b.w);
    blocks.push_back(std::move(jb));
  }
  j["blocks"] = std::move(blocks);
  j["b0"] = vector_json(inst.b0);
  return j;
}

json to_json(const SchedulingInstance& inst) {
  json j;
  j["jobs"] = json::array();
  for (const auto& row : inst.p) j["jobs"].push_back(vector_json(row));
  j["cmax"] = rat_json(inst.cmax);
  if (inst.costs) {
    j["costs"] = json::array();
    for (const auto& row : *inst.costs) j["costs"].push_back(vector_json(row));
  }
  return j;
}

json to_json(const Instance& inst) {
  return std::visit([](const auto& v) { return to_json(v); }, inst);
}

}  // namespace ipapprox
