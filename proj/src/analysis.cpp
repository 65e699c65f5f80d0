#include "jetcheck/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "jetcheck/functionals.hpp"
#include "jetcheck/parallel.hpp"

namespace jetcheck {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <class Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(name, e.what());
  }
}

bool needs_family(ConditionTag tag) { return tag == ConditionTag::KDelta || tag == ConditionTag::KTildeDelta; }

void keep_min(std::optional<double>& slot, double v) {
  if (!std::isfinite(v)) return;
  slot = slot ? std::min(*slot, v) : v;
}

}  // namespace

int AnalysisReport::exit_code() const {
  bool any_fail = false, any_inconclusive = false;
  for (const auto& v : verdicts) {
    if (v.status == Status::Fails) any_fail = true;
    if (v.status == Status::Inconclusive) any_inconclusive = true;
  }
  if (any_fail) return 1;
  if (any_inconclusive) return 2;
  return 0;
}

bool AnalysisReport::same_content(const AnalysisReport& other) const {
  AnalysisReport a = *this;
  a.timing = other.timing;
  return a == other;
}

ConditionVerdict run_check(ConditionTag tag, const PolyMap& f, const SigmaSet& sigma, int r,
                           const ShellSample& sample, const Thresholds& th,
                           const std::optional<PerturbationFamily>& family) {
  switch (tag) {
    case ConditionTag::K: return check_K(f, sigma, r, sample, th);
    case ConditionTag::KTilde: return check_K_tilde(f, sigma, r, sample, th);
    case ConditionTag::Gram3: return check_gram3(f, sigma, r, sample, th);
    case ConditionTag::Dual4: return check_dual4(f, sigma, r, sample, th);
    case ConditionTag::KZ: return check_KZ(f, sigma, r, sample, th);
    case ConditionTag::Certificate: return check_certificate(f, sigma, r, sample, th);
    case ConditionTag::SingularContainment: return check_singular_containment(f, sigma, r, sample, th);
    case ConditionTag::KDelta:
    case ConditionTag::KTildeDelta:
      if (!family) throw InputError("family-relative checks need a perturbation family");
      return tag == ConditionTag::KDelta ? check_K_delta(f, sigma, r, *family, sample, th)
                                         : check_K_tilde_delta(f, sigma, r, *family, sample, th);
  }
  throw InputError("unknown condition");
}

std::vector<ShellTableRow> shell_table(const PolyMap& f, const ShellSample& sample) {
  const bool with_eta = binomial(f.n(), f.p()) <= kMaxMinorSubsets;
  std::vector<ShellTableRow> rows(sample.shells.size());
  parallel_for(sample.shells.size(), [&](std::size_t k) {
    const Shell& shell = sample.shells[k];
    ShellTableRow& row = rows[k];
    row.radius = shell.outer;
    row.points = static_cast<int>(shell.points.size());
    for (const auto& pt : shell.points) {
      const LinearMap df = jacobian(f, pt.x);
      const double kappa = kuo_distance(df);
      const double fn = eval_map(f, pt.x).norm();
      keep_min(row.kappa, kappa);
      keep_min(row.nu, rabier_nu(df));
      if (with_eta) keep_min(row.eta, eta(df));
      keep_min(row.f_norm, fn);
      keep_min(row.lhs, pt.distance * kappa + fn);
    }
  });
  return rows;
}

AnalysisReport run_analysis(const ProblemConfig& config) {
  const auto t0 = Clock::now();
  AnalysisReport report;
  if (config.checks.empty()) throw PipelineError("config", "checks: must not be empty");

  const PolyMap f = stage("germ", [&] { return config.germ_map(); });
  const SigmaSet sigma = stage("sigma", [&] { return config.build_sigma(); });
  report.germ = config.germ;
  report.n = f.n();
  report.p = f.p();
  report.r = config.r;
  report.sigma = sigma.describe();
  report.sigma_kind = to_string(sigma.kind());
  report.thresholds = config.thresholds;
  report.warnings = sigma.warnings();
  report.environment.seed = config.sampling.seed;
  report.environment.alpha = config.sampling.alpha;
  report.environment.shells = config.sampling.shells;
  report.environment.points_per_shell = config.sampling.points_per_shell;
  report.timing.threads = worker_threads();

  const auto t_sample = Clock::now();
  const ShellSample sample = stage("sampling", [&] { return sample_shells(sigma, config.sampling); });
  std::optional<ShellSample> coarse;
  if (config.stability) {
    SamplingConfig quarter = config.sampling;
    quarter.alpha /= 4.0;
    coarse = stage("sampling", [&] { return sample_shells(sigma, quarter); });
  }
  report.timing.sampling_seconds = seconds_since(t_sample);

  std::optional<PerturbationFamily> family;
  if (std::any_of(config.checks.begin(), config.checks.end(), needs_family)) {
    family = stage("perturbation_family", [&] {
      PerturbationFamily fam = make_perturbation_family(f, sigma, config.r, config.amplitudes);
      const auto extras = config.extra_maps();
      for (std::size_t i = 0; i < extras.size(); ++i) fam.add_extra("extra" + std::to_string(i + 1), extras[i]);
      return fam;
    });
    const double ratio = family->bound_ratio(sample);
    if (ratio > 1.0 + 1e-9)
      report.warnings.push_back("perturbation generators exceed d^(r+1) by a factor " + std::to_string(ratio));
  }

  const auto t_checks = Clock::now();
  auto evaluate = [&](ConditionTag tag) {
    return stage("check " + to_string(tag), [&] {
      ConditionVerdict v = run_check(tag, f, sigma, config.r, sample, config.thresholds, family);
      if (coarse) {
        const ConditionVerdict c = run_check(tag, f, sigma, config.r, *coarse, config.thresholds, family);
        v.stable = c.status == v.status;
        if (!*v.stable)
          v.notes.push_back("status at alpha/4 is " + std::string(c.status == Status::Holds   ? "holds"
                                                                  : c.status == Status::Fails ? "fails"
                                                                                              : "inconclusive"));
      }
      return v;
    });
  };
  for (ConditionTag tag : config.checks) report.verdicts.push_back(evaluate(tag));

  const bool k_holds = std::any_of(report.verdicts.begin(), report.verdicts.end(), [](const ConditionVerdict& v) {
    return v.condition == ConditionTag::K && v.status == Status::Holds;
  });
  const bool requested = std::find(config.checks.begin(), config.checks.end(), ConditionTag::SingularContainment) !=
                         config.checks.end();
  if (k_holds && !requested) report.diagnostics.push_back(evaluate(ConditionTag::SingularContainment));
  report.timing.checks_seconds = seconds_since(t_checks);

  report.shell_table = stage("shell_table", [&] { return shell_table(f, sample); });

  for (const auto& spec : config.arcs) {
    ArcReport arc;
    arc.name = spec.name;
    arc.curve = spec.curve;
    arc.quantities = {"kappa(df)", "nu(df)", "|f|", "d*kappa(df)+|f|"};
    try {
      const ArcProbe probe = spec.grid.empty() ? ArcProbe::parse(spec.curve) : ArcProbe::parse(spec.curve, spec.grid);
      const std::vector<ScalarField> fields = {
          [&](const Eigen::VectorXd& x) { return kuo_distance(jacobian(f, x)); },
          [&](const Eigen::VectorXd& x) { return rabier_nu(jacobian(f, x)); },
          [&](const Eigen::VectorXd& x) { return eval_map(f, x).norm(); },
          [&](const Eigen::VectorXd& x) {
            return distance_to_sigma(sigma, x) * kuo_distance(jacobian(f, x)) + eval_map(f, x).norm();
          },
      };
      arc.orders = arc_orders(probe, sigma, fields);
    } catch (const EstimationError& e) {
      arc.error = e.what();
    } catch (const std::exception& e) {
      throw PipelineError("arcs", e.what());
    }
    report.arcs.push_back(std::move(arc));
  }

  report.timing.total_seconds = seconds_since(t0);
  return report;
}

}  // namespace jetcheck
