#include "jetcheck/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "jetcheck/error.hpp"
#include "jetcheck/fit.hpp"
#include "jetcheck/functionals.hpp"
#include "jetcheck/parallel.hpp"

namespace jetcheck {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using PointFn = std::function<double(const Eigen::VectorXd&, double)>;
using PointPred = std::function<bool(const Eigen::VectorXd&, double)>;

// Q(x) = lhs(x, d) / d^exponent, minimised over the admissible points.
struct Problem {
  PointFn lhs;
  double exponent = 0.0;
  PointPred admissible;  // empty: every point
  double stop_below = 0.0;
  PointFn horn_gap;  // |g| / (w d^order), searched when a shell has few admissible points
};

struct Candidate {
  Eigen::VectorXd x;
  double d = 0.0;
  double lhs = 0.0;
  double q = 0.0;
  int shell = -1;
};

struct ShellResult {
  int count = 0;
  double inf_lhs = kInf;
  double inf_q = kInf;
  std::vector<Candidate> best;  // lowest q first
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

double ratio(double lhs, double d, double exponent) {
  if (exponent == 0.0) return lhs;
  return lhs / std::pow(d, exponent);
}

// Nelder-Mead on y -> log Q(x(y)) restricted to one shell.
class ShellSearch {
 public:
  ShellSearch(const Problem& problem, const SigmaSet& sigma, double alpha, const Shell& shell, int shell_index)
      : problem_(problem), sigma_(sigma), alpha_(alpha), shell_(shell), k_(shell_index) {}

  // Reflects v back into [lo, hi].
  static double fold(double v, double lo, double hi) {
    const double w = hi - lo;
    if (!(w > 0.0)) return lo;
    const double m = std::fmod(std::abs(v - lo), 2.0 * w);
    return lo + (m <= w ? m : 2.0 * w - m);
  }

  // Maps a trial point into the shell when possible, else returns false.
  bool place(const Eigen::VectorXd& y, Eigen::VectorXd& x, double& d) const {
    if (sigma_.is_linear()) {
      Eigen::VectorXd normal = y;
      if (sigma_.basis().cols() > 0) normal -= sigma_.basis() * (sigma_.basis().transpose() * y);
      const double dn = normal.norm();
      if (!(dn > 0.0)) return false;
      const double lo = shell_.inner * (1.0 + 1e-9);
      const double dd = fold(dn, lo, shell_.outer);
      Eigen::VectorXd along = y - normal;
      const double room = alpha_ * alpha_ - dd * dd;
      if (room < 0.0) return false;
      const double an = along.norm();
      if (an > 0.0) along *= fold(an, 0.0, std::sqrt(room)) / an;
      x = along + normal * (dd / dn);
      d = dd;
    } else {
      x = y;
      d = distance_to_sigma(sigma_, x);
      if (!(d > shell_.inner) || d > shell_.outer) return false;
    }
    return x.norm() <= alpha_ * (1.0 + 1e-12);
  }

  std::optional<Candidate> evaluate(const Eigen::VectorXd& y) const {
    Eigen::VectorXd x;
    double d = 0.0;
    if (!place(y, x, d)) return std::nullopt;
    if (problem_.admissible && !problem_.admissible(x, d)) return std::nullopt;
    const double lhs = problem_.lhs(x, d);
    if (!std::isfinite(lhs)) return std::nullopt;
    return Candidate{std::move(x), d, lhs, ratio(lhs, d, problem_.exponent), k_};
  }

  // Simplex edges follow the offsets to the nearest sample points, so the search turns with the data.
  Eigen::MatrixXd frame(const Eigen::VectorXd& x0, std::size_t skip) const {
    const Eigen::Index n = x0.size();
    std::vector<std::pair<double, std::size_t>> near;
    for (std::size_t i = 0; i < shell_.points.size(); ++i) near.push_back({(shell_.points[i].x - x0).norm(), i});
    std::sort(near.begin(), near.end());
    Eigen::MatrixXd q(n, n);
    Eigen::Index cols = 0;
    auto push = [&](Eigen::VectorXd v) {
      const double len = v.norm();
      if (!(len > 0.0)) return;
      for (Eigen::Index j = 0; j < cols; ++j) v -= q.col(j).dot(v) * q.col(j);
      if (v.norm() > 1e-6 * len) q.col(cols++) = v.normalized();
    };
    for (std::size_t j = std::min(skip, near.size()); j < near.size() && cols < n; ++j)
      push(shell_.points[near[j].second].x - x0);
    for (Eigen::Index i = 0; cols < n && i < n; ++i) push(Eigen::VectorXd::Unit(n, i));
    return q;
  }

  // Restarts from the best point with a fresh simplex until a round stops paying off.
  Candidate run(const Candidate& start, int budget) const {
    Candidate best = start;
    int evals = 0;
    for (std::size_t round = 0; evals < budget && best.q > problem_.stop_below; ++round) {
      const double before = best.q;
      best = descend(best, frame(best.x, round * static_cast<std::size_t>(best.x.size())), budget, evals);
      if (round > 0 && !(best.q < before * (1.0 - 1e-12))) break;
    }
    return best;
  }

  Candidate descend(const Candidate& start, const Eigen::MatrixXd& edges, int budget, int& evals) const {
    const Eigen::Index n = start.x.size();
    const std::size_t vertices = static_cast<std::size_t>(n) + 1;
    std::vector<Eigen::VectorXd> simplex(vertices, start.x);
    std::vector<double> values(vertices, kInf);
    Candidate best = start;
    auto objective = [&](const Eigen::VectorXd& y) {
      ++evals;
      const auto c = evaluate(y);
      if (!c) return kInf;
      if (c->q < best.q) best = *c;
      return c->q > 0.0 ? std::log(c->q) : -kInf;
    };
    const double step = 0.1 * start.d;
    values[0] = start.q > 0.0 ? std::log(start.q) : -kInf;
    for (Eigen::Index i = 0; i < n; ++i) {
      simplex[static_cast<std::size_t>(i) + 1] += step * edges.col(i);
      values[static_cast<std::size_t>(i) + 1] = objective(simplex[static_cast<std::size_t>(i) + 1]);
    }
    std::vector<std::size_t> order(vertices);
    while (evals < budget && best.q > problem_.stop_below) {
      for (std::size_t i = 0; i < vertices; ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
      const std::size_t lo = order.front(), hi = order.back(), second = order[vertices - 2];
      double size = 0.0;
      for (std::size_t i = 0; i < vertices; ++i) size = std::max(size, (simplex[i] - simplex[lo]).norm());
      if (size < 1e-11 * start.d) break;
      if (std::isfinite(values[hi]) && std::isfinite(values[lo]) && values[hi] - values[lo] < 1e-13) break;

      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
      for (std::size_t i = 0; i < vertices; ++i)
        if (i != hi) centroid += simplex[i];
      centroid /= static_cast<double>(n);

      const Eigen::VectorXd reflected = centroid + (centroid - simplex[hi]);
      const double fr = objective(reflected);
      if (fr < values[lo]) {
        const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex[hi]);
        const double fe = objective(expanded);
        if (fe < fr) {
          simplex[hi] = expanded;
          values[hi] = fe;
        } else {
          simplex[hi] = reflected;
          values[hi] = fr;
        }
        continue;
      }
      if (fr < values[second]) {
        simplex[hi] = reflected;
        values[hi] = fr;
        continue;
      }
      const bool outside = fr < values[hi];
      const Eigen::VectorXd contracted =
          outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                  : Eigen::VectorXd(centroid + 0.5 * (simplex[hi] - centroid));
      const double fc = objective(contracted);
      if (fc < (outside ? fr : values[hi])) {
        simplex[hi] = contracted;
        values[hi] = fc;
        continue;
      }
      for (std::size_t i = 0; i < vertices; ++i) {
        if (i == lo) continue;
        simplex[i] = simplex[lo] + 0.5 * (simplex[i] - simplex[lo]);
        values[i] = objective(simplex[i]);
      }
    }
    return best;
  }

 private:
  const Problem& problem_;
  const SigmaSet& sigma_;
  double alpha_;
  const Shell& shell_;
  int k_;
};

std::vector<ShellResult> evaluate(const Problem& problem, const SigmaSet& sigma, const ShellSample& sample,
                                  const Thresholds& th) {
  std::vector<ShellResult> results(sample.shells.size());
  const std::size_t keep = static_cast<std::size_t>(std::max({th.refine_per_shell, th.max_witnesses, 1}));
  const int budget = sigma.is_linear() ? th.refine_evaluations : std::min(th.refine_evaluations, 120);
  parallel_for(sample.shells.size(), [&](std::size_t k) {
    const Shell& shell = sample.shells[k];
    ShellResult& res = results[k];
    std::vector<Candidate> all;
    for (const auto& pt : shell.points) {
      if (problem.admissible && !problem.admissible(pt.x, pt.distance)) continue;
      const double lhs = problem.lhs(pt.x, pt.distance);
      if (!std::isfinite(lhs)) continue;
      all.push_back({pt.x, pt.distance, lhs, ratio(lhs, pt.distance, problem.exponent), static_cast<int>(k)});
    }
    if (problem.horn_gap && all.size() < keep && budget > 0) {
      const Problem seek{problem.horn_gap, 0.0, {}, 0.5, {}};
      std::vector<Candidate> near;
      for (const auto& pt : shell.points) {
        const double gap = problem.horn_gap(pt.x, pt.distance);
        if (std::isfinite(gap)) near.push_back({pt.x, pt.distance, gap, gap, static_cast<int>(k)});
      }
      std::stable_sort(near.begin(), near.end(), [](const Candidate& a, const Candidate& b) { return a.q < b.q; });
      const ShellSearch search(seek, sigma, sample.alpha, shell, static_cast<int>(k));
      const std::size_t starts = std::min(near.size(), static_cast<std::size_t>(std::max(th.refine_per_shell, 1)));
      for (std::size_t i = 0; i < starts; ++i) {
        const Candidate found = near[i].q <= 1.0 ? near[i] : search.run(near[i], budget);
        if (found.q > 1.0 || !problem.admissible(found.x, found.d)) continue;
        const double lhs = problem.lhs(found.x, found.d);
        if (!std::isfinite(lhs)) continue;
        all.push_back({found.x, found.d, lhs, ratio(lhs, found.d, problem.exponent), static_cast<int>(k)});
      }
    }
    res.count = static_cast<int>(all.size());
    if (all.empty()) return;
    for (const auto& c : all) {
      res.inf_lhs = std::min(res.inf_lhs, c.lhs);
      res.inf_q = std::min(res.inf_q, c.q);
    }
    std::stable_sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) { return a.q < b.q; });
    if (all.size() > keep) all.resize(keep);

    if (th.refine_per_shell > 0 && budget > 0) {
      const ShellSearch search(problem, sigma, sample.alpha, shell, static_cast<int>(k));
      const std::size_t starts = std::min(all.size(), static_cast<std::size_t>(th.refine_per_shell));
      for (std::size_t i = 0; i < starts; ++i) {
        if (all[i].q <= problem.stop_below) break;
        Candidate refined = search.run(all[i], budget);
        if (refined.q < all[i].q) {
          res.inf_lhs = std::min(res.inf_lhs, refined.lhs);
          res.inf_q = std::min(res.inf_q, refined.q);
          all.push_back(std::move(refined));
        }
      }
      // The regression reads the smallest lhs, which sits elsewhere when Q is flat across the shell.
      Problem flat = problem;
      flat.exponent = 0.0;
      flat.stop_below = 0.0;
      const ShellSearch lhs_search(flat, sigma, sample.alpha, shell, static_cast<int>(k));
      std::vector<Candidate> low = all;
      std::stable_sort(low.begin(), low.end(), [](const Candidate& a, const Candidate& b) { return a.lhs < b.lhs; });
      for (std::size_t i = 0; i < std::min(low.size(), static_cast<std::size_t>(th.refine_per_shell)); ++i) {
        if (low[i].q <= problem.stop_below) break;
        Candidate start = low[i];
        start.q = start.lhs;
        Candidate refined = lhs_search.run(start, budget);
        refined.q = ratio(refined.lhs, refined.d, problem.exponent);
        if (refined.lhs < low[i].lhs) {
          res.inf_lhs = std::min(res.inf_lhs, refined.lhs);
          res.inf_q = std::min(res.inf_q, refined.q);
          all.push_back(std::move(refined));
        }
      }
      std::stable_sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) { return a.q < b.q; });
      if (all.size() > keep) all.resize(keep);
    }
    res.best = std::move(all);
  });
  return results;
}

std::vector<ShellInfimum> infima_of(const std::vector<ShellResult>& results, const ShellSample& sample, bool use_q) {
  std::vector<ShellInfimum> out;
  for (std::size_t k = 0; k < results.size(); ++k) {
    ShellInfimum s{sample.shells[k].outer, std::nullopt, results[k].count};
    if (results[k].count > 0) s.infimum = use_q ? results[k].inf_q : results[k].inf_lhs;
    out.push_back(s);
  }
  return out;
}

std::vector<Witness> witnesses_of(const std::vector<ShellResult>& results, int limit, const std::string& member) {
  std::vector<const Candidate*> all;
  for (const auto& r : results)
    for (const auto& c : r.best) all.push_back(&c);
  std::stable_sort(all.begin(), all.end(), [](const Candidate* a, const Candidate* b) { return a->q < b->q; });
  std::vector<Witness> out;
  for (const Candidate* c : all) {
    if (static_cast<int>(out.size()) >= limit) break;
    out.push_back({std::vector<double>(c->x.data(), c->x.data() + c->x.size()), c->d, c->q, c->shell, member});
  }
  return out;
}

struct Assessment {
  Status status = Status::Inconclusive;
  std::optional<double> margin;
  std::optional<double> delta_hat;
  std::vector<std::string> notes;
};

struct ShellStats {
  int nonempty = 0;
  int vanishing = 0;
  bool innermost_vanishes = false;
  std::optional<double> margin;
};

ShellStats shell_stats(const std::vector<ShellResult>& results, double floor) {
  ShellStats s;
  int innermost = -1;
  for (std::size_t k = 0; k < results.size(); ++k) {
    if (results[k].count == 0) continue;
    ++s.nonempty;
    innermost = static_cast<int>(k);
    if (results[k].inf_q <= floor) ++s.vanishing;
    s.margin = s.margin ? std::min(*s.margin, results[k].inf_q) : results[k].inf_q;
  }
  if (innermost >= 0) s.innermost_vanishes = results[static_cast<std::size_t>(innermost)].inf_q <= floor;
  return s;
}

bool vanishes(const ShellStats& s) { return s.innermost_vanishes && 2 * s.vanishing >= s.nonempty; }

// Shared preamble: empty, vanishing and unreliable fits.
std::optional<Assessment> screen(const ShellStats& s, const ExponentEstimate& est, const Thresholds& th) {
  Assessment a;
  a.margin = s.margin;
  if (s.nonempty == 0) {
    a.notes.push_back("no admissible sample points");
    return a;
  }
  if (vanishes(s)) {
    a.status = Status::Fails;
    a.notes.push_back("ratio vanishes (<= " + fmt(th.margin_floor) + ") on " + std::to_string(s.vanishing) + " of " +
                      std::to_string(s.nonempty) + " shells, including the innermost");
    return a;
  }
  if (!est.slope) {
    a.notes.push_back("fewer than 4 shells with a positive infimum");
    return a;
  }
  if (est.r2 < th.min_r2) {
    a.notes.push_back("poor log-log fit (r2 = " + fmt(est.r2) + ")");
    return a;
  }
  return std::nullopt;
}

// kappa-type: lhs >= C d^target.
Assessment assess_bound(const ShellStats& s, const ExponentEstimate& est, double target, const Thresholds& th) {
  if (auto early = screen(s, est, th)) return *early;
  Assessment a;
  a.margin = s.margin;
  const double slope = *est.slope;
  if (slope > target + th.slope_tol) {
    a.status = Status::Fails;
    a.notes.push_back("fitted slope " + fmt(slope) + " exceeds target " + fmt(target));
  } else if (s.vanishing == 0) {
    a.status = Status::Holds;
  } else {
    a.notes.push_back("slope within tolerance but the ratio vanishes on " + std::to_string(s.vanishing) + " shells");
  }
  return a;
}

// delta-type: lhs >= C d^(top - delta) for some delta > 0.
Assessment assess_delta(const ShellStats& s, const ExponentEstimate& est, double top, const Thresholds& th) {
  if (auto early = screen(s, est, th)) return *early;
  Assessment a;
  a.margin = s.margin;
  const double slope = *est.slope;
  if (slope >= top - th.slope_tol) {
    a.status = Status::Fails;
    a.notes.push_back("fitted slope " + fmt(slope) + " reaches the top exponent " + fmt(top));
  } else if (slope <= top - th.delta_floor && s.vanishing == 0) {
    a.status = Status::Holds;
    a.delta_hat = top - slope;
  } else {
    a.notes.push_back("fitted slope " + fmt(slope) + " leaves a gap below delta_floor");
  }
  return a;
}

struct Run {
  std::vector<ShellResult> results;
  ExponentEstimate estimate;
  ShellStats stats;
};

Run run_problem(const Problem& problem, const SigmaSet& sigma, const ShellSample& sample, const Thresholds& th,
                bool regress_ratio) {
  Run run;
  run.results = evaluate(problem, sigma, sample, th);
  run.estimate = fit_infima(infima_of(run.results, sample, regress_ratio));
  run.stats = shell_stats(run.results, th.margin_floor);
  return run;
}

// Admissible points on the inner half of the shells.
int inner_points(const Run& run) {
  int count = 0;
  for (std::size_t k = run.results.size() / 2; k < run.results.size(); ++k) count += run.results[k].count;
  return count;
}

void check_arity(const PolyMap& f, const SigmaSet& sigma, int r) {
  if (static_cast<std::size_t>(f.n()) != sigma.ambient_dim())
    throw InputError("map has n=" + std::to_string(f.n()) + " but Sigma lives in R^" +
                     std::to_string(sigma.ambient_dim()));
  if (r < 1) throw InputError("order r must be >= 1");
}

void check_sample(const ShellSample& sample, const SigmaSet& sigma) {
  if (sample.shells.empty()) throw InputError("empty shell sample");
  for (const auto& shell : sample.shells)
    for (const auto& pt : shell.points)
      if (static_cast<std::size_t>(pt.x.size()) != sigma.ambient_dim())
        throw InputError("sample dimension does not match Sigma");
}

PointPred horn(const PolyMap& g, int order, double w_bar) {
  return [&g, order, w_bar](const Eigen::VectorXd& x, double d) {
    return eval_map(g, x).norm() <= w_bar * std::pow(d, order) * (1.0 + 1e-12);
  };
}

PointFn horn_gap(const PolyMap& g, int order, double w_bar) {
  return [&g, order, w_bar](const Eigen::VectorXd& x, double d) {
    return eval_map(g, x).norm() / (w_bar * std::pow(d, order));
  };
}

ConditionVerdict make_verdict(ConditionTag tag, const Run& run, const Assessment& a, const std::string& label,
                              double target, const Thresholds& th, const std::string& member = {}) {
  ConditionVerdict v;
  v.condition = tag;
  v.status = a.status;
  v.estimate = run.estimate;
  v.target_exponent = target;
  v.margin = a.margin;
  v.delta_hat = a.delta_hat;
  v.notes = a.notes;
  v.witnesses = witnesses_of(run.results, th.max_witnesses, member);
  v.regressions.push_back({label, target, run.estimate});
  return v;
}

ConditionVerdict bound_check(ConditionTag tag, const PolyMap& f, const SigmaSet& sigma, int r,
                             const ShellSample& sample, const Thresholds& th, const PointFn& lhs, double target,
                             const std::string& label, PointPred admissible = {},
                             PointFn gap = {}) {
  check_arity(f, sigma, r);
  check_sample(sample, sigma);
  const Problem problem{lhs, target, std::move(admissible), th.margin_floor * 1e-2, std::move(gap)};
  const Run run = run_problem(problem, sigma, sample, th, false);
  if (problem.admissible && inner_points(run) == 0) {
    Assessment a;
    a.status = Status::Holds;
    a.margin = run.stats.margin;
    a.notes.push_back("horn empty near Sigma, vacuous");
    return make_verdict(tag, run, a, label, target, th);
  }
  return make_verdict(tag, run, assess_bound(run.stats, run.estimate, target, th), label, target, th);
}

std::string rstr(int r) { return std::to_string(r); }

}  // namespace

std::string to_string(Status status) {
  switch (status) {
    case Status::Holds: return "HOLDS";
    case Status::Fails: return "FAILS";
    case Status::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

std::string to_string(ConditionTag tag) {
  switch (tag) {
    case ConditionTag::K: return "K";
    case ConditionTag::KTilde: return "K_tilde";
    case ConditionTag::Gram3: return "gram3";
    case ConditionTag::Dual4: return "dual4";
    case ConditionTag::KDelta: return "K_delta";
    case ConditionTag::KTildeDelta: return "K_tilde_delta";
    case ConditionTag::KZ: return "KZ";
    case ConditionTag::Certificate: return "certificate";
    case ConditionTag::SingularContainment: return "singular_containment";
  }
  return "K";
}

std::optional<ConditionTag> parse_condition_tag(const std::string& name) {
  for (auto tag : {ConditionTag::K, ConditionTag::KTilde, ConditionTag::Gram3, ConditionTag::Dual4,
                   ConditionTag::KDelta, ConditionTag::KTildeDelta, ConditionTag::KZ, ConditionTag::Certificate,
                   ConditionTag::SingularContainment})
    if (to_string(tag) == name) return tag;
  return std::nullopt;
}

std::optional<Status> parse_status(const std::string& name) {
  for (auto s : {Status::Holds, Status::Fails, Status::Inconclusive})
    if (to_string(s) == name) return s;
  return std::nullopt;
}

std::optional<double> ExponentEstimate::fitted_value(double radius) const {
  if (!slope || !intercept) return std::nullopt;
  return std::exp2(*intercept + *slope * std::log2(radius));
}

ExponentEstimate fit_infima(std::vector<ShellInfimum> infima) {
  ExponentEstimate est;
  std::vector<double> xs, ys;
  for (const auto& s : infima) {
    if (!s.infimum) continue;
    if (*s.infimum > 0.0 && std::isfinite(*s.infimum)) {
      xs.push_back(std::log2(s.radius));
      ys.push_back(std::log2(*s.infimum));
    } else if (*s.infimum == 0.0) {
      ++est.zero_shells;
    }
  }
  est.usable_shells = static_cast<int>(xs.size());
  est.per_shell_infima = std::move(infima);
  if (xs.size() >= 4) {
    const LineFit fit = fit_line(xs, ys);
    est.slope = fit.slope;
    est.intercept = fit.intercept;
    est.r2 = fit.r2;
  }
  return est;
}

ExponentEstimate estimate_exponent(const ShellSample& sample, const ScalarField& quantity) {
  std::vector<ShellInfimum> infima;
  for (const auto& shell : sample.shells) {
    ShellInfimum s{shell.outer, std::nullopt, 0};
    for (const auto& pt : shell.points) {
      const double v = quantity(pt.x);
      if (!std::isfinite(v)) continue;
      ++s.points;
      s.infimum = s.infimum ? std::min(*s.infimum, v) : v;
    }
    infima.push_back(s);
  }
  ExponentEstimate est = fit_infima(std::move(infima));
  if (!est.slope)
    throw EstimationError("only " + std::to_string(est.usable_shells) +
                          " shells have a positive infimum; at least 4 are needed");
  return est;
}

ConditionVerdict check_K(const PolyMap& f, const SigmaSet& sigma, int r, const ShellSample& sample,
                         const Thresholds& th) {
  if (!(th.w_bar > 0.0)) throw InputError("horn width must be positive");
  const PointFn lhs = [&f](const Eigen::VectorXd& x, double) { return kuo_distance(jacobian(f, x)); };
  // Narrower horns are subsets, so holding at any width on the ladder settles the condition.
  ConditionVerdict first, result;
  for (int step = 0; step < 4; ++step) {
    const double w = th.w_bar * std::pow(10.0, -step);
    ConditionVerdict v = bound_check(ConditionTag::K, f, sigma, r, sample, th, lhs, r - 1.0, "kappa(df)",
                                     horn(f, r, w), horn_gap(f, r, w));
    if (step == 0) first = result = v;
    if (v.status == Status::Holds) {
      if (step > 0) v.notes.push_back("holds at horn width " + fmt(w) + ", not at width " + fmt(th.w_bar));
      return v;
    }
    if (v.status == Status::Inconclusive && result.status == Status::Fails) result = v;
  }
  return result;
}

ConditionVerdict check_K_tilde(const PolyMap& f, const SigmaSet& sigma, int r, const ShellSample& sample,
                               const Thresholds& th) {
  const PointFn lhs = [&f](const Eigen::VectorXd& x, double d) {
    return d * kuo_distance(jacobian(f, x)) + eval_map(f, x).norm();
  };
  return bound_check(ConditionTag::KTilde, f, sigma, r, sample, th, lhs, r, "d*kappa(df)+|f|");
}

ConditionVerdict check_gram3(const PolyMap& f, const SigmaSet& sigma, int r, const ShellSample& sample,
                             const Thresholds& th) {
  const PointFn lhs = [&f](const Eigen::VectorXd& x, double d) {
    return d * gram_ratio(jacobian(f, x)) + eval_map(f, x).norm();
  };
  return bound_check(ConditionTag::Gram3, f, sigma, r, sample, th, lhs, r, "d*gram_ratio(df)+|f|");
}

ConditionVerdict check_dual4(const PolyMap& f, const SigmaSet& sigma, int r, const ShellSample& sample,
                             const Thresholds& th) {
  const PointFn lhs = [&f](const Eigen::VectorXd& x, double d) {
    return d * rabier_nu(jacobian(f, x)) + eval_map(f, x).norm();
  };
  return bound_check(ConditionTag::Dual4, f, sigma, r, sample, th, lhs, r, "d*nu(df)+|f|");
}

ConditionVerdict check_certificate(const PolyMap& f, const SigmaSet& sigma, int r, const ShellSample& sample,
                                   const Thresholds& th) {
  check_arity(f, sigma, r);
  check_sample(sample, sigma);
  const double top = r + 1.0;
  const PointFn lhs = [&f](const Eigen::VectorXd& x, double d) {
    return d * kuo_distance(jacobian(f, x)) + eval_map(f, x).norm();
  };
  const Problem problem{lhs, top - th.delta_floor, {}, th.margin_floor * 1e-2, {}};
  const Run run = run_problem(problem, sigma, sample, th, false);
  return make_verdict(ConditionTag::Certificate, run, assess_delta(run.stats, run.estimate, top, th),
                      "d*kappa(df)+|f|", top, th);
}

ConditionVerdict check_KZ(const PolyMap& f, const SigmaSet& sigma, int r, const ShellSample& sample,
                          const Thresholds& th) {
  check_arity(f, sigma, r);
  check_sample(sample, sigma);
  const double e = r + 1.0;
  const PointFn lhs = [&f](const Eigen::VectorXd& x, double d) {
    return d * rabier_nu(jacobian(f, x)) + eval_map(f, x).norm();
  };
  const Problem problem{lhs, e, {}, th.margin_floor * 1e-2, {}};
  const Run run = run_problem(problem, sigma, sample, th, true);
  Assessment a;
  if (auto early = screen(run.stats, run.estimate, th)) {
    a = *early;
  } else {
    a.margin = run.stats.margin;
    const double slope = *run.estimate.slope;
    if (slope <= -th.slope_tol) {
      a.status = Status::Holds;
    } else {
      a.status = Status::Fails;
      a.notes.push_back("ratio stays bounded (fitted slope " + fmt(slope) + ")");
    }
  }
  return make_verdict(ConditionTag::KZ, run, a, "(d*nu(df)+|f|)/d^" + rstr(r + 1), 0.0, th);
}

ConditionVerdict check_singular_containment(const PolyMap& f, const SigmaSet& sigma, int r,
                                            const ShellSample& sample, const Thresholds& th) {
  check_arity(f, sigma, r);
  check_sample(sample, sigma);
  if (!(th.w_bar > 0.0)) throw InputError("horn width must be positive");
  const PointFn lhs = [&f, r](const Eigen::VectorXd& x, double d) {
    const LinearMap df = jacobian(f, x);
    const double scale = std::max(df.matrix().norm(), std::pow(d, r - 1));
    return rabier_nu(df) / scale;
  };
  const Problem problem{lhs, 0.0, horn(f, r, th.w_bar), th.rank_tol * 1e-2, horn_gap(f, r, th.w_bar)};
  const Run run = run_problem(problem, sigma, sample, th, true);
  ConditionVerdict v;
  v.condition = ConditionTag::SingularContainment;
  v.estimate = run.estimate;
  v.margin = run.stats.margin;
  v.regressions.push_back({"nu(df)/max(|df|,d^" + rstr(r - 1) + ")", 0.0, run.estimate});
  v.witnesses = witnesses_of(run.results, th.max_witnesses, {});
  std::erase_if(v.witnesses, [&](const Witness& w) { return !(w.ratio <= th.rank_tol && w.distance > th.containment_tol); });
  if (run.stats.nonempty == 0) {
    v.status = Status::Inconclusive;
    v.notes.push_back("no horn points in the sample");
  } else if (!v.witnesses.empty()) {
    v.status = Status::Fails;
    v.notes.push_back("singular points of f in the horn lie off Sigma");
  } else {
    v.status = Status::Holds;
  }
  return v;
}

ConditionVerdict check_K_delta(const PolyMap& f, const SigmaSet& sigma, int r, const PerturbationFamily& family,
                               const ShellSample& sample, const Thresholds& th) {
  check_arity(f, sigma, r);
  check_sample(sample, sigma);
  if (!(th.w_bar > 0.0)) throw InputError("horn width must be positive");
  const double top = r;
  const PointFn lhs = [&f](const Eigen::VectorXd& x, double) { return kuo_distance(jacobian(f, x)); };

  ConditionVerdict v;
  v.condition = ConditionTag::KDelta;
  v.target_exponent = top;
  bool any_fail = false, all_hold = true, first = true;
  const auto members = family.members();
  for (const auto& member : members) {
    const Problem problem{lhs, top - th.delta_floor, horn(member.g, r + 1, th.w_bar), th.margin_floor * 1e-2,
                          horn_gap(member.g, r + 1, th.w_bar)};
    const Run run = run_problem(problem, sigma, sample, th, false);
    v.regressions.push_back({"kappa(df) on horn of " + member.label, top, run.estimate});

    // A horn with no points on the inner half of the shells carries no constraint.
    Assessment a;
    if (inner_points(run) == 0) {
      a.status = Status::Holds;
      v.notes.push_back(member.label + ": horn empty near Sigma, vacuous");
    } else {
      a = assess_delta(run.stats, run.estimate, top, th);
      for (const auto& note : a.notes) v.notes.push_back(member.label + ": " + note);
    }
    const bool decisive = first || (a.status == Status::Fails && !any_fail);
    if (a.status == Status::Fails) any_fail = true;
    if (a.status != Status::Holds) all_hold = false;
    if (decisive) {
      v.estimate = run.estimate;
      v.witnesses = witnesses_of(run.results, th.max_witnesses, member.label);
    }
    if (a.margin) v.margin = v.margin ? std::min(*v.margin, *a.margin) : *a.margin;
    if (a.delta_hat) v.delta_hat = v.delta_hat ? std::min(*v.delta_hat, *a.delta_hat) : *a.delta_hat;
    first = false;
  }
  v.status = any_fail ? Status::Fails : (all_hold ? Status::Holds : Status::Inconclusive);
  if (v.status != Status::Holds) v.delta_hat.reset();
  v.notes.push_back("checked over " + std::to_string(members.size()) + " realisations of the relative jet");
  return v;
}

ConditionVerdict check_K_tilde_delta(const PolyMap& f, const SigmaSet& sigma, int r,
                                     const PerturbationFamily& family, const ShellSample& sample,
                                     const Thresholds& th) {
  check_arity(f, sigma, r);
  check_sample(sample, sigma);
  const double top = r + 1.0;

  ConditionVerdict v;
  v.condition = ConditionTag::KTildeDelta;
  v.target_exponent = top;
  bool any_fail = false, all_hold = true, first = true;
  const auto members = family.members();
  for (const auto& member : members) {
    const PolyMap& g = member.g;
    const PointFn with_f = [&f, &g](const Eigen::VectorXd& x, double d) {
      return d * kuo_distance(jacobian(f, x)) + eval_map(g, x).norm();
    };
    const PointFn with_g = [&g](const Eigen::VectorXd& x, double d) {
      return d * kuo_distance(jacobian(g, x)) + eval_map(g, x).norm();
    };
    Status member_status = Status::Inconclusive;
    std::vector<Status> variant_status;
    for (int variant = 0; variant < 2; ++variant) {
      const Problem problem{variant == 0 ? with_f : with_g, top - th.delta_floor, {}, th.margin_floor * 1e-2, {}};
      const Run run = run_problem(problem, sigma, sample, th, false);
      const std::string label = variant == 0 ? "d*kappa(df)+|g|" : "d*kappa(dg)+|g|";
      v.regressions.push_back({label + " for " + member.label, top, run.estimate});
      const Assessment a = assess_delta(run.stats, run.estimate, top, th);
      for (const auto& note : a.notes) v.notes.push_back(member.label + " (" + label + "): " + note);
      variant_status.push_back(a.status);
      const bool decisive = first || (a.status == Status::Fails && !any_fail);
      if (decisive) {
        v.estimate = run.estimate;
        v.witnesses = witnesses_of(run.results, th.max_witnesses, member.label);
      }
      if (a.status == Status::Fails) any_fail = true;
      if (a.margin) v.margin = v.margin ? std::min(*v.margin, *a.margin) : *a.margin;
      if (a.delta_hat) v.delta_hat = v.delta_hat ? std::min(*v.delta_hat, *a.delta_hat) : *a.delta_hat;
      first = false;
    }
    if (variant_status[0] == variant_status[1]) {
      member_status = variant_status[0];
    } else if (variant_status[0] != Status::Inconclusive && variant_status[1] != Status::Inconclusive) {
      v.notes.push_back(member.label + ": the df and dg variants disagree");
    }
    if (member_status != Status::Holds) all_hold = false;
  }
  v.status = any_fail ? Status::Fails : (all_hold ? Status::Holds : Status::Inconclusive);
  if (v.status != Status::Holds) v.delta_hat.reset();
  v.notes.push_back("checked over " + std::to_string(members.size()) + " realisations of the relative jet");
  return v;
}

}  // namespace jetcheck
