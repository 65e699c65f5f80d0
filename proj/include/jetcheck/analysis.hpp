#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jetcheck/arcs.hpp"
#include "jetcheck/conditions.hpp"
#include "jetcheck/config.hpp"
#include "jetcheck/error.hpp"

namespace jetcheck {

inline constexpr const char* kVersion = "0.1.0";

/// A module error tagged with the pipeline stage it came from.
class PipelineError : public Error {
 public:
  PipelineError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct ShellTableRow {
  double radius = 0.0;
  int points = 0;
  std::optional<double> kappa;
  std::optional<double> nu;
  std::optional<double> eta;  // empty when the minor enumeration is too large
  std::optional<double> f_norm;
  std::optional<double> lhs;  // d kappa(df) + |f|

  bool operator==(const ShellTableRow&) const = default;
};

struct ArcReport {
  std::string name;
  std::vector<std::string> curve;
  std::vector<std::string> quantities;
  std::vector<ArcOrder> orders;
  std::string error;  // set when the fit could not be made

  bool operator==(const ArcReport& o) const {
    if (name != o.name || curve != o.curve || quantities != o.quantities || error != o.error) return false;
    if (orders.size() != o.orders.size()) return false;
    for (std::size_t i = 0; i < orders.size(); ++i) {
      const auto& a = orders[i];
      const auto& b = o.orders[i];
      if (a.order != b.order || a.degenerate != b.degenerate || a.r2 != b.r2 || a.usable_points != b.usable_points)
        return false;
    }
    return true;
  }
};

struct Environment {
  std::string version = kVersion;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  int shells = 0;
  int points_per_shell = 0;
  bool operator==(const Environment&) const = default;
};

struct Timing {
  double sampling_seconds = 0.0;
  double checks_seconds = 0.0;
  double total_seconds = 0.0;
  int threads = 1;
  bool operator==(const Timing&) const = default;
};

struct AnalysisReport {
  std::vector<std::string> germ;
  std::size_t n = 0;
  std::size_t p = 0;
  int r = 1;
  std::string sigma;
  std::string sigma_kind;
  Thresholds thresholds;
  std::vector<ConditionVerdict> verdicts;     // requested checks, in request order
  std::vector<ConditionVerdict> diagnostics;  // singular containment when K holds
  std::vector<ShellTableRow> shell_table;
  std::vector<ArcReport> arcs;
  std::vector<std::string> warnings;
  Environment environment;
  Timing timing;

  /// 0 all holds, 1 any fails, 2 any inconclusive and none fails.
  int exit_code() const;

  /// Equality ignoring the timing block.
  bool same_content(const AnalysisReport& other) const;
  bool operator==(const AnalysisReport&) const = default;
};

ConditionVerdict run_check(ConditionTag tag, const PolyMap& f, const SigmaSet& sigma, int r,
                           const ShellSample& sample, const Thresholds& th,
                           const std::optional<PerturbationFamily>& family);

std::vector<ShellTableRow> shell_table(const PolyMap& f, const ShellSample& sample);

AnalysisReport run_analysis(const ProblemConfig& config);

}  // namespace jetcheck
