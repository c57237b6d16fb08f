#include "ipapprox/instance.hpp"

#include <algorithm>
#include <stdexcept>

namespace ipapprox {

namespace {

std::string dims(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

ViolationReport finish(RatVector residual, const ViolationMode& mode, Rat objective) {
  ViolationReport rep;
  rep.mode = mode.kind;
  rep.max_abs_residual = inf_norm(residual);
  rep.residual = std::move(residual);
  rep.bound = mode.value;
  rep.within_bound = rep.max_abs_residual <= mode.value;
  rep.objective = std::move(objective);
  return rep;
}

bool in_window(const Rat& activity, const Rat& rhs, const Rat& epsilon) {
  const Rat lo = (1 - epsilon) * rhs;
  const Rat hi = (1 + epsilon) * rhs;
  return lo <= activity && activity <= hi;
}

}  // namespace

Validation validate_general(const GeneralIP& inst) {
  Validation v;
  const std::size_t m = inst.H.rows();
  const std::size_t n = inst.H.cols();
  if (m == 0 || n == 0) v.errors.push_back("H must have at least one row and one column");
  if (inst.b.size() != m) v.errors.push_back("dimension mismatch: b has length " +
                                             std::to_string(inst.b.size()) + ", H is " + dims(m, n));
  if (inst.w.size() != n) v.errors.push_back("dimension mismatch: w has length " +
                                             std::to_string(inst.w.size()) + ", H is " + dims(m, n));
  if (inst.l.size() != n || inst.u.size() != n) {
    v.errors.push_back("dimension mismatch: bounds must have length " + std::to_string(n));
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      if (inst.l[j] > inst.u[j]) v.errors.push_back("bounds crossed on variable " + std::to_string(j));
    }
  }
  v.delta = inf_norm(inst.H);
  return v;
}

Validation validate_config(const NFoldConfigInstance& inst) {
  Validation v;
  if (inst.blocks.empty()) v.errors.push_back("instance has no blocks");
  const std::size_t s = inst.b0.size();
  if (s == 0) v.errors.push_back("b0 must be nonempty");
  std::optional<std::size_t> t;
  for (std::size_t i = 0; i < inst.blocks.size(); ++i) {
    const auto& blk = inst.blocks[i];
    const std::string where = "block " + std::to_string(i) + ": ";
    if (blk.D.rows() != s) v.errors.push_back(where + "dimension mismatch: D has " +
                                              std::to_string(blk.D.rows()) + " rows, b0 has " + std::to_string(s));
    if (!t) t = blk.D.cols();
    if (blk.D.cols() != *t || *t == 0) v.errors.push_back(where + "dimension mismatch: blocks must share t >= 1");
    if (blk.weights.size() != blk.D.cols()) v.errors.push_back(where + "dimension mismatch: weights");
    for (std::size_t c = 0; c < blk.configs.size(); ++c) {
      if (blk.configs[c].size() != blk.D.cols()) {
        v.errors.push_back(where + "dimension mismatch: config " + std::to_string(c));
      }
    }
    v.delta = std::max(v.delta, inf_norm(blk.D));
  }
  return v;
}

Validation validate_nonneg(const NFoldNonnegInstance& inst) {
  Validation v;
  if (inst.blocks.empty()) v.errors.push_back("instance has no blocks");
  const std::size_t sd = inst.b0.size();
  if (sd == 0) v.errors.push_back("b0 must be nonempty");
  for (std::size_t r = 0; r < sd; ++r) {
    if (sgn(inst.b0[r]) < 0) v.errors.push_back("b0 entry " + std::to_string(r) + " is negative");
  }
  std::optional<std::size_t> t;
  std::optional<std::size_t> sa;
  for (std::size_t i = 0; i < inst.blocks.size(); ++i) {
    const auto& blk = inst.blocks[i];
    const std::string where = "block " + std::to_string(i) + ": ";
    if (!t) t = blk.A.cols();
    if (!sa) sa = blk.A.rows();
    if (blk.A.cols() != *t || blk.D.cols() != *t || *t == 0) {
      v.errors.push_back(where + "dimension mismatch: blocks must share t >= 1");
    }
    if (blk.A.rows() != *sa) v.errors.push_back(where + "dimension mismatch: blocks must share s_A");
    if (blk.D.rows() != sd) v.errors.push_back(where + "dimension mismatch: D rows must equal length of b0");
    if (blk.bi.size() != blk.A.rows()) v.errors.push_back(where + "dimension mismatch: bi");
    if (blk.u.size() != blk.A.cols() || blk.w.size() != blk.A.cols()) {
      v.errors.push_back(where + "dimension mismatch: u and w must have length t");
    }
    for (const auto& e : blk.A.entries()) {
      if (sgn(e) < 0) {
        v.errors.push_back(where + "A has a negative entry");
        break;
      }
    }
    for (const auto& e : blk.D.entries()) {
      if (sgn(e) < 0) {
        v.errors.push_back(where + "D has a negative entry");
        break;
      }
    }
    for (const auto& e : blk.bi) {
      if (sgn(e) < 0) {
        v.errors.push_back(where + "bi has a negative entry");
        break;
      }
    }
    for (const auto& e : blk.u) {
      if (sgn(e) < 0) {
        v.errors.push_back(where + "u has a negative entry");
        break;
      }
    }
    v.delta = std::max(v.delta, inf_norm(blk.D));
  }
  return v;
}

Int kappa(const NFoldConfigInstance& inst) {
  Int k = 0;
  for (const auto& blk : inst.blocks)
    for (const auto& p : blk.configs)
      for (const auto& e : p) k = std::max(k, Int(abs(e)));
  return k;
}

ViolationReport violation_report(const GeneralIP& inst, const IntVector& x,
                                 const ViolationMode& mode) {
  if (x.size() != inst.H.cols()) throw std::invalid_argument("violation_report: dimension mismatch");
  if (mode.kind != ViolationMode::Kind::Additive) {
    throw std::invalid_argument("violation_report: general instances use the additive mode");
  }
  RatVector residual = inst.H.multiply(x);
  for (std::size_t r = 0; r < residual.size(); ++r) residual[r] -= inst.b[r];
  return finish(std::move(residual), mode, dot(inst.w, x));
}

ViolationReport violation_report(const NFoldConfigInstance& inst, const IntVector& x,
                                 const ViolationMode& mode) {
  const std::size_t t = inst.blocks.empty() ? 0 : inst.blocks.front().D.cols();
  if (x.size() != t * inst.blocks.size()) {
    throw std::invalid_argument("violation_report: dimension mismatch");
  }
  RatVector activity(inst.b0.size());
  Rat objective = 0;
  for (std::size_t i = 0; i < inst.blocks.size(); ++i) {
    IntVector xi(x.begin() + static_cast<std::ptrdiff_t>(i * t),
                 x.begin() + static_cast<std::ptrdiff_t>((i + 1) * t));
    const RatVector di = inst.blocks[i].D.multiply(xi);
    for (std::size_t r = 0; r < activity.size(); ++r) activity[r] += di[r];
    objective += dot(inst.blocks[i].weights, xi);
  }
  if (mode.kind == ViolationMode::Kind::Multiplicative) {
    RatVector residual(activity.size());
    bool ok = true;
    for (std::size_t r = 0; r < activity.size(); ++r) {
      residual[r] = activity[r] - inst.b0[r];
      ok = ok && in_window(activity[r], inst.b0[r], mode.value);
    }
    ViolationReport rep = finish(std::move(residual), mode, std::move(objective));
    rep.within_bound = ok;
    return rep;
  }
  for (std::size_t r = 0; r < activity.size(); ++r) activity[r] -= inst.b0[r];
  return finish(std::move(activity), mode, std::move(objective));
}

RatVector nonneg_activity(const NFoldNonnegInstance& inst, const IntVector& x) {
  const std::size_t t = inst.blocks.empty() ? 0 : inst.blocks.front().A.cols();
  if (x.size() != t * inst.blocks.size()) {
    throw std::invalid_argument("violation_report: dimension mismatch");
  }
  RatVector top(inst.b0.size());
  RatVector local;
  for (std::size_t i = 0; i < inst.blocks.size(); ++i) {
    IntVector xi(x.begin() + static_cast<std::ptrdiff_t>(i * t),
                 x.begin() + static_cast<std::ptrdiff_t>((i + 1) * t));
    const RatVector di = inst.blocks[i].D.multiply(xi);
    for (std::size_t r = 0; r < top.size(); ++r) top[r] += di[r];
    const RatVector ai = inst.blocks[i].A.multiply(xi);
    local.insert(local.end(), ai.begin(), ai.end());
  }
  top.insert(top.end(), local.begin(), local.end());
  return top;
}

RatVector nonneg_rhs(const NFoldNonnegInstance& inst) {
  RatVector rhs = inst.b0;
  for (const auto& blk : inst.blocks) rhs.insert(rhs.end(), blk.bi.begin(), blk.bi.end());
  return rhs;
}

ViolationReport violation_report(const NFoldNonnegInstance& inst, const IntVector& x,
                                 const ViolationMode& mode) {
  const RatVector activity = nonneg_activity(inst, x);
  const RatVector rhs = nonneg_rhs(inst);
  const std::size_t t = inst.blocks.empty() ? 0 : inst.blocks.front().A.cols();
  Rat objective = 0;
  for (std::size_t i = 0; i < inst.blocks.size(); ++i)
    for (std::size_t j = 0; j < t; ++j) objective += inst.blocks[i].w[j] * x[i * t + j];

  RatVector residual(activity.size());
  bool ok = true;
  for (std::size_t r = 0; r < activity.size(); ++r) {
    residual[r] = activity[r] - rhs[r];
    if (mode.kind == ViolationMode::Kind::Multiplicative) ok = ok && in_window(activity[r], rhs[r], mode.value);
  }
  ViolationReport rep = finish(std::move(residual), mode, std::move(objective));
  if (mode.kind == ViolationMode::Kind::Multiplicative) rep.within_bound = ok;
  return rep;
}

GeneralIP flatten(const NFoldNonnegInstance& inst) {
  const std::size_t n = inst.blocks.size();
  const std::size_t t = n == 0 ? 0 : inst.blocks.front().A.cols();
  const std::size_t sd = inst.b0.size();
  const std::size_t sa = n == 0 ? 0 : inst.blocks.front().A.rows();
  GeneralIP g;
  g.H = RatMatrix(sd + n * sa, n * t);
  g.b = nonneg_rhs(inst);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& blk = inst.blocks[i];
    for (std::size_t j = 0; j < t; ++j) {
      const std::size_t col = i * t + j;
      for (std::size_t r = 0; r < sd; ++r) g.H(r, col) = blk.D(r, j);
      for (std::size_t r = 0; r < sa; ++r) g.H(sd + i * sa + r, col) = blk.A(r, j);
      g.w.push_back(blk.w[j]);
      g.l.push_back(0);
      g.u.push_back(blk.u[j]);
    }
  }
  return g;
}

}  // namespace ipapprox
