#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "jetcheck/conditions.hpp"
#include "jetcheck/poly_map.hpp"
#include "jetcheck/sampling.hpp"
#include "jetcheck/sigma.hpp"

namespace jetcheck {

struct SigmaSpec {
  SigmaKind kind = SigmaKind::Origin;
  /// Spanning vectors of a linear subspace.
  std::vector<std::vector<double>> span;
  /// Defining polynomials of a zero set.
  std::vector<std::string> equations;

  bool operator==(const SigmaSpec&) const = default;
};

struct ArcSpec {
  std::string name;
  std::vector<std::string> curve;
  std::vector<double> grid;  // empty: default grid

  bool operator==(const ArcSpec&) const = default;
};

struct ProblemConfig {
  std::vector<std::string> germ;
  std::size_t n = 0;
  SigmaSpec sigma;
  int r = 1;
  std::vector<ConditionTag> checks;
  SamplingConfig sampling;
  std::vector<std::vector<std::string>> extra_perturbations;
  std::vector<double> amplitudes{-1.0, 1.0};
  std::vector<ArcSpec> arcs;
  Thresholds thresholds;
  /// Rerun every check at alpha/4 and flag status changes.
  bool stability = true;

  PolyMap germ_map() const;
  SigmaSet build_sigma() const;
  std::vector<PolyMap> extra_maps() const;
};

/// Parses YAML (JSON is accepted as well) and validates. Errors are
/// ConfigError naming the offending key.
ProblemConfig parse_config(const std::string& text);
ProblemConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError unless every extra g has the shape of f and g - f is
/// (r+1)-flat relative to Sigma on a coarse sample.
void validate_perturbations(const ProblemConfig& config);

/// Fitted log2 slope of the per-shell sup of |h| / d^(r+1); empty when h
/// vanishes on the sample or fewer than 4 shells are usable.
std::optional<double> flatness_slope(const PolyMap& h, int r, const ShellSample& sample);

}  // namespace jetcheck
