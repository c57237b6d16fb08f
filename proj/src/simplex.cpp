#include "ipapprox/simplex.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace ipapprox {

void check_well_formed(const LinearProgram& lp) {
  const std::size_t r = lp.A.rows();
  const std::size_t c = lp.A.cols();
  if (lp.rhs.size() != r || lp.lower.size() != c || lp.upper.size() != c ||
      lp.objective.size() != c) {
    throw std::invalid_argument("linear program: dimension mismatch");
  }
  for (std::size_t j = 0; j < c; ++j) {
    if (lp.lower[j] > lp.upper[j]) {
      throw std::invalid_argument("linear program: bounds crossed on column " +
                                  std::to_string(j));
    }
  }
}

namespace {

// Columns [0, c) are structural, [c, c + r) are phase-1 artificials.
class Tableau {
 public:
  explicit Tableau(const LinearProgram& lp)
      : rows_(lp.A.rows()),
        structural_(lp.A.cols()),
        total_(structural_ + rows_),
        t_(rows_, std::vector<Rat>(total_)),
        x_(total_),
        lower_(total_),
        upper_(total_),
        cost_(total_),
        reduced_(total_),
        basic_row_(total_, kNonBasic),
        basis_(rows_),
        active_(total_, true) {
    for (std::size_t j = 0; j < structural_; ++j) {
      lower_[j] = lp.lower[j];
      upper_[j] = lp.upper[j];
      x_[j] = lp.lower[j];
    }
    for (std::size_t i = 0; i < rows_; ++i) {
      Rat residual = lp.rhs[i];
      for (std::size_t j = 0; j < structural_; ++j) {
        const Rat& a = lp.A(i, j);
        if (sgn(a) != 0 && sgn(x_[j]) != 0) residual -= a * x_[j];
      }
      const bool flip = sgn(residual) < 0;
      for (std::size_t j = 0; j < structural_; ++j) {
        if (sgn(lp.A(i, j)) != 0) t_[i][j] = flip ? Rat(-lp.A(i, j)) : lp.A(i, j);
      }
      const std::size_t art = structural_ + i;
      t_[i][art] = 1;
      lower_[art] = 0;
      upper_[art] = std::nullopt;
      x_[art] = flip ? Rat(-residual) : residual;
      basis_[i] = art;
      basic_row_[art] = i;
    }
  }

  // Minimizes the sum of artificials; returns false if it stays positive.
  bool phase_one() {
    for (std::size_t j = 0; j < total_; ++j) cost_[j] = j >= structural_ ? 1 : 0;
    if (!run()) throw std::logic_error("simplex: phase one reported unbounded");
    Rat infeasibility = 0;
    for (std::size_t j = structural_; j < total_; ++j) infeasibility += x_[j];
    if (sgn(infeasibility) != 0) return false;
    // Artificials are pinned to zero from here on; non-basic ones never
    // re-enter, so their columns need no further updates.
    for (std::size_t j = structural_; j < total_; ++j) {
      upper_[j] = Rat(0);
      if (basic_row_[j] == kNonBasic) active_[j] = false;
    }
    return true;
  }

  // Returns false on an unbounded ray.
  bool phase_two(const RatVector& objective) {
    for (std::size_t j = 0; j < total_; ++j) cost_[j] = j < structural_ ? objective[j] : 0;
    return run();
  }

  VertexSolution extract(LpStatus status) const {
    VertexSolution sol;
    sol.status = status;
    sol.pivots = pivots_;
    if (status != LpStatus::Optimal) return sol;
    sol.values.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(structural_));
    for (std::size_t j = 0; j < structural_; ++j) {
      if (basic_row_[j] != kNonBasic) sol.basis.push_back(j);
      if (sgn(cost_[j]) != 0 && sgn(x_[j]) != 0) sol.objective_value += cost_[j] * x_[j];
    }
    return sol;
  }

  std::uint64_t pivots() const { return pivots_; }

 private:
  static constexpr std::size_t kNonBasic = static_cast<std::size_t>(-1);

  bool at_upper(std::size_t j) const { return upper_[j] && x_[j] == *upper_[j]; }

  bool can_move(std::size_t j) const { return !upper_[j] || *upper_[j] != lower_[j]; }

  void compute_reduced_costs() {
    for (std::size_t j = 0; j < total_; ++j) {
      if (!active_[j]) continue;
      if (basic_row_[j] != kNonBasic) {
        reduced_[j] = 0;
        continue;
      }
      Rat d = cost_[j];
      for (std::size_t i = 0; i < rows_; ++i) {
        const Rat& cb = cost_[basis_[i]];
        if (sgn(cb) != 0 && sgn(t_[i][j]) != 0) d -= cb * t_[i][j];
      }
      reduced_[j] = std::move(d);
    }
  }

  // Bland: the smallest eligible index enters.
  std::optional<std::size_t> choose_entering() const {
    for (std::size_t j = 0; j < total_; ++j) {
      if (!active_[j] || basic_row_[j] != kNonBasic || !can_move(j)) continue;
      const int s = sgn(reduced_[j]);
      if (s == 0) continue;
      if (at_upper(j) ? s > 0 : s < 0) return j;
    }
    return std::nullopt;
  }

  bool run() {
    compute_reduced_costs();
    Rat ratio;
    Rat best;
    Rat step;
    for (;;) {
      const auto entering = choose_entering();
      if (!entering) return true;
      const std::size_t e = *entering;
      const int dir = at_upper(e) ? -1 : 1;

      std::optional<std::size_t> leave_row;
      std::size_t leave_var = kNonBasic;
      bool leave_to_upper = false;
      for (std::size_t i = 0; i < rows_; ++i) {
        const Rat& alpha = t_[i][e];
        const int g = sgn(alpha) * dir;
        if (g == 0) continue;
        const std::size_t b = basis_[i];
        if (g > 0) {
          ratio = (x_[b] - lower_[b]) / abs(alpha);
        } else {
          if (!upper_[b]) continue;
          ratio = (*upper_[b] - x_[b]) / abs(alpha);
        }
        if (!leave_row || ratio < best || (ratio == best && b < leave_var)) {
          leave_row = i;
          leave_var = b;
          leave_to_upper = g < 0;
          best = ratio;
        }
      }

      const bool has_flip = upper_[e].has_value();
      if (!leave_row && !has_flip) return false;
      bool flip = false;
      if (has_flip) {
        Rat range = *upper_[e] - lower_[e];
        if (!leave_row || range < best) {
          flip = true;
          best = range;
        }
      }
      step = best;

      if (sgn(step) != 0) {
        for (std::size_t i = 0; i < rows_; ++i) {
          const Rat& alpha = t_[i][e];
          if (sgn(alpha) == 0) continue;
          if (dir > 0) {
            x_[basis_[i]] -= alpha * step;
          } else {
            x_[basis_[i]] += alpha * step;
          }
        }
        if (dir > 0) {
          x_[e] += step;
        } else {
          x_[e] -= step;
        }
      }

      if (flip) {
        x_[e] = dir > 0 ? *upper_[e] : lower_[e];
        continue;
      }

      const std::size_t p = *leave_row;
      x_[leave_var] = leave_to_upper ? *upper_[leave_var] : lower_[leave_var];
      pivot(p, e);
    }
  }

  void pivot(std::size_t p, std::size_t e) {
    ++pivots_;
    const std::size_t leaving = basis_[p];
    std::vector<Rat>& prow = t_[p];
    const Rat inv = 1 / prow[e];

    nonzero_.clear();
    for (std::size_t j = 0; j < total_; ++j) {
      if (active_[j] && sgn(prow[j]) != 0) nonzero_.push_back(j);
    }
    for (std::size_t j : nonzero_) prow[j] *= inv;

    Rat factor;
    Rat tmp;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == p) continue;
      std::vector<Rat>& row = t_[i];
      if (sgn(row[e]) == 0) continue;
      factor = row[e];
      for (std::size_t j : nonzero_) {
        mpq_mul(tmp.get_mpq_t(), factor.get_mpq_t(), prow[j].get_mpq_t());
        mpq_sub(row[j].get_mpq_t(), row[j].get_mpq_t(), tmp.get_mpq_t());
      }
    }
    if (sgn(reduced_[e]) != 0) {
      factor = reduced_[e];
      for (std::size_t j : nonzero_) reduced_[j] -= factor * prow[j];
    }

    basis_[p] = e;
    basic_row_[e] = p;
    basic_row_[leaving] = kNonBasic;
    reduced_[e] = 0;
  }

  std::size_t rows_;
  std::size_t structural_;
  std::size_t total_;
  std::vector<std::vector<Rat>> t_;
  std::vector<Rat> x_;
  std::vector<Rat> lower_;
  std::vector<std::optional<Rat>> upper_;
  std::vector<Rat> cost_;
  std::vector<Rat> reduced_;
  std::vector<std::size_t> basic_row_;
  std::vector<std::size_t> basis_;
  std::vector<bool> active_;
  std::vector<std::size_t> nonzero_;
  std::uint64_t pivots_ = 0;
};

}  // namespace

VertexSolution solve_lp_vertex(const LinearProgram& lp) {
  check_well_formed(lp);
  Tableau tableau(lp);
  if (!tableau.phase_one()) return tableau.extract(LpStatus::Infeasible);
  if (!tableau.phase_two(lp.objective)) return tableau.extract(LpStatus::Unbounded);
  return tableau.extract(LpStatus::Optimal);
}

std::vector<std::size_t> nonintegral_support(const RatVector& values) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (!is_integer(values[j])) out.push_back(j);
  }
  return out;
}

std::vector<std::size_t> nonintegral_support(const VertexSolution& sol) {
  return nonintegral_support(sol.values);
}

std::vector<std::size_t> strictly_interior_columns(const LinearProgram& lp,
                                                    const RatVector& values) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (lp.lower[j] < values[j] && values[j] < lp.upper[j]) out.push_back(j);
  }
  return out;
}

bool is_feasible_point(const LinearProgram& lp, const RatVector& x) {
  if (x.size() != lp.A.cols()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < lp.lower[j] || x[j] > lp.upper[j]) return false;
  }
  return lp.A.multiply(x) == lp.rhs;
}

}  // namespace ipapprox
