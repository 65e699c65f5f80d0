#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "jetcheck/arcs.hpp"
#include "jetcheck/perturbation.hpp"
#include "jetcheck/poly_map.hpp"
#include "jetcheck/sampling.hpp"
#include "jetcheck/sigma.hpp"

namespace jetcheck {

enum class Status { Holds, Fails, Inconclusive };

enum class ConditionTag {
  K,                    // kappa(df) >= C d^(r-1) on the horn H_r(f; w)
  KTilde,               // d kappa(df) + |f| >= C d^r
  Gram3,                // Gram-determinant ratio in place of kappa
  Dual4,                // inf over unit y of |df* y|, i.e. nu, in place of kappa
  KDelta,               // kappa(df) >= C d^(r-delta) on H_{r+1}(g; w), every g in the family
  KTildeDelta,          // d kappa + |g| >= C d^(r+1-delta), every g in the family
  KZ,                   // (d nu(df) + |f|) / d^(r+1) -> infinity
  Certificate,          // d kappa(df) + |f| >= C d^(r+1-delta), f only
  SingularContainment,  // Sing(f) inside the horn lies in Sigma
};

std::string to_string(Status status);
std::string to_string(ConditionTag tag);
/// Accepts the names printed by to_string (K, K_tilde, gram3, dual4,
/// K_delta, K_tilde_delta, KZ, certificate, singular_containment).
std::optional<ConditionTag> parse_condition_tag(const std::string& name);
std::optional<Status> parse_status(const std::string& name);

/// Verdict tolerances. Every field can be overridden from the problem config.
struct Thresholds {
  double slope_tol = 0.05;
  double delta_floor = 0.05;
  double margin_floor = 1e-8;
  double rank_tol = 1e-8;
  double containment_tol = 1e-6;
  double min_r2 = 0.95;
  double w_bar = 1.0;
  /// Worst points per shell handed to the local witness search.
  int refine_per_shell = 3;
  /// Objective evaluations per witness search.
  int refine_evaluations = 2000;
  int max_witnesses = 10;

  bool operator==(const Thresholds&) const = default;
};

struct ShellInfimum {
  double radius;                  // outer radius alpha 2^-k
  std::optional<double> infimum;  // empty when the shell has no admissible point
  int points = 0;

  bool operator==(const ShellInfimum&) const = default;
};

/// Log2-log2 least squares of per-shell infima against shell radius.
struct ExponentEstimate {
  std::optional<double> slope;  // present iff >= 4 shells have a positive infimum
  std::optional<double> intercept;
  double r2 = 0.0;
  std::vector<ShellInfimum> per_shell_infima;
  int usable_shells = 0;
  int zero_shells = 0;

  /// 2^intercept * radius^slope, when a fit exists.
  std::optional<double> fitted_value(double radius) const;

  bool operator==(const ExponentEstimate&) const = default;
};

/// Fits the given per-shell infima; never throws (slope empty when fewer
/// than 4 shells have a positive infimum).
ExponentEstimate fit_infima(std::vector<ShellInfimum> infima);

/// Per-shell infimum of `quantity` over the sample points, then the
/// log2-log2 fit. Throws EstimationError with fewer than 4 usable shells.
ExponentEstimate estimate_exponent(const ShellSample& sample, const ScalarField& quantity);

struct Witness {
  std::vector<double> x;
  double distance = 0.0;
  double ratio = 0.0;  // the checked quantity divided by d^target
  int shell = -1;
  std::string member;  // family member label for the family-relative checks

  bool operator==(const Witness&) const = default;
};

struct Regression {
  std::string label;
  double target_exponent = 0.0;
  ExponentEstimate estimate;

  bool operator==(const Regression&) const = default;
};

struct ConditionVerdict {
  ConditionTag condition = ConditionTag::K;
  Status status = Status::Inconclusive;
  /// The deciding regression (also listed in `regressions`).
  ExponentEstimate estimate;
  double target_exponent = 0.0;
  /// Smallest per-shell infimum of quantity / d^target.
  std::optional<double> margin;
  std::vector<Witness> witnesses;
  std::optional<double> delta_hat;
  std::vector<Regression> regressions;
  std::vector<std::string> notes;
  /// Same status at alpha and alpha/4; set by the analysis pipeline.
  std::optional<bool> stable;

  bool operator==(const ConditionVerdict&) const = default;
};

ConditionVerdict check_K(const PolyMap& f, const SigmaSet& sigma, int r, const ShellSample& sample,
                         const Thresholds& th = {});
ConditionVerdict check_K_tilde(const PolyMap& f, const SigmaSet& sigma, int r, const ShellSample& sample,
                               const Thresholds& th = {});
ConditionVerdict check_gram3(const PolyMap& f, const SigmaSet& sigma, int r, const ShellSample& sample,
                             const Thresholds& th = {});
ConditionVerdict check_dual4(const PolyMap& f, const SigmaSet& sigma, int r, const ShellSample& sample,
                             const Thresholds& th = {});
ConditionVerdict check_K_delta(const PolyMap& f, const SigmaSet& sigma, int r, const PerturbationFamily& family,
                               const ShellSample& sample, const Thresholds& th = {});
ConditionVerdict check_K_tilde_delta(const PolyMap& f, const SigmaSet& sigma, int r,
                                     const PerturbationFamily& family, const ShellSample& sample,
                                     const Thresholds& th = {});
ConditionVerdict check_KZ(const PolyMap& f, const SigmaSet& sigma, int r, const ShellSample& sample,
                          const Thresholds& th = {});
ConditionVerdict check_certificate(const PolyMap& f, const SigmaSet& sigma, int r, const ShellSample& sample,
                                   const Thresholds& th = {});
ConditionVerdict check_singular_containment(const PolyMap& f, const SigmaSet& sigma, int r,
                                            const ShellSample& sample, const Thresholds& th = {});

}  // namespace jetcheck
