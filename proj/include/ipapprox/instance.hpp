#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ipapprox/matrix.hpp"

namespace ipapprox {

/// min w·x  s.t.  H x = b,  l <= x <= u,  x integer.
struct GeneralIP {
  RatMatrix H;
  RatVector b;
  RatVector w;
  IntVector l;
  IntVector u;
};

struct ConfigBlock {
  RatMatrix D;                   // s × t
  std::vector<IntVector> configs;  // each of length t
  RatVector weights;             // length t
};

/// Each block picks one configuration; Σ_i D^i x^i = b0.
struct NFoldConfigInstance {
  std::vector<ConfigBlock> blocks;
  RatVector b0;
};

struct NonnegBlock {
  RatMatrix A;   // s_A × t, nonnegative
  RatMatrix D;   // s_D × t, nonnegative
  RatVector bi;  // length s_A
  IntVector u;   // length t, nonnegative
  RatVector w;   // length t
};

/// Σ_i D^i x^i = b0,  A^i x^i = b^i,  0 <= x^i <= u^i, integer.
struct NFoldNonnegInstance {
  std::vector<NonnegBlock> blocks;
  RatVector b0;
};

struct PipelineObserver;

struct ApproxParams {
  Rat epsilon = Rat(1, 2);
  std::optional<Rat> delta_override;
  std::size_t refinement_limit = 8;
  std::uint64_t node_limit = 1'000'000;
  std::uint64_t enumeration_limit = 1'000'000;
  const PipelineObserver* observer = nullptr;
};

struct ViolationMode {
  enum class Kind { Additive, Multiplicative };
  Kind kind = Kind::Additive;
  /// Additive: the permitted ∞-norm of the residual. Multiplicative: ε.
  Rat value;

  static ViolationMode additive(Rat bound) { return {Kind::Additive, std::move(bound)}; }
  static ViolationMode multiplicative(Rat epsilon) {
    return {Kind::Multiplicative, std::move(epsilon)};
  }
};

struct ViolationReport {
  ViolationMode::Kind mode = ViolationMode::Kind::Additive;
  /// Row activity minus right-hand side, exactly.
  RatVector residual;
  Rat max_abs_residual;
  Rat bound;
  bool within_bound = false;
  Rat objective;
};

struct Validation {
  std::vector<std::string> errors;
  /// ‖H‖∞ (general), max_i ‖D^i‖∞ (n-fold forms).
  Rat delta;
  bool ok() const { return errors.empty(); }
};

Validation validate_general(const GeneralIP& inst);
Validation validate_config(const NFoldConfigInstance& inst);
Validation validate_nonneg(const NFoldNonnegInstance& inst);

/// Largest absolute configuration entry.
Int kappa(const NFoldConfigInstance& inst);

/// Residuals of H x − b. Only the additive mode applies.
ViolationReport violation_report(const GeneralIP& inst, const IntVector& x,
                                 const ViolationMode& mode);

/// `x` is the concatenation of the chosen x^i. Residuals of Σ D^i x^i − b0.
ViolationReport violation_report(const NFoldConfigInstance& inst, const IntVector& x,
                                 const ViolationMode& mode);

/// `x` is the concatenation of the x^i. Residuals are Σ D^i x^i − b0
/// followed by A^i x^i − b^i for each block in order. The multiplicative
/// mode demands (1−ε)b <= activity <= (1+ε)b on every row.
ViolationReport violation_report(const NFoldNonnegInstance& inst, const IntVector& x,
                                 const ViolationMode& mode);

/// Row activities of an n-fold point in the same order as its residuals.
RatVector nonneg_activity(const NFoldNonnegInstance& inst, const IntVector& x);
RatVector nonneg_rhs(const NFoldNonnegInstance& inst);

/// The n-fold instance written out as one equality system.
GeneralIP flatten(const NFoldNonnegInstance& inst);

}  // namespace ipapprox
