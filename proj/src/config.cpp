#include "jetcheck/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "jetcheck/error.hpp"
#include "jetcheck/fit.hpp"
#include "jetcheck/parser.hpp"

namespace jetcheck {

namespace {

constexpr int kFlatnessPoints = 64;

[[noreturn]] void fail(const std::string& key, const std::string& message) {
  throw ConfigError(key + ": " + message);
}

void check_keys(const YAML::Node& node, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& item : node) {
    const auto key = item.first.as<std::string>();
    if (!allowed.count(key)) fail(where.empty() ? key : where + "." + key, "unknown key");
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) fail(key, "expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(key, "cannot read '" + node.Scalar() + "'");
  }
}

std::vector<std::string> string_list(const YAML::Node& node, const std::string& key) {
  std::vector<std::string> out;
  if (node.IsScalar()) {
    out.push_back(node.Scalar());
  } else if (node.IsSequence()) {
    for (std::size_t i = 0; i < node.size(); ++i) out.push_back(scalar<std::string>(node[i], key));
  } else {
    fail(key, "expected a string or a list of strings");
  }
  if (out.empty()) fail(key, "must not be empty");
  return out;
}

std::vector<double> number_list(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) fail(key, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(scalar<double>(node[i], key));
  return out;
}

SigmaKind parse_kind(const std::string& name, const std::string& key) {
  if (name == "origin") return SigmaKind::Origin;
  if (name == "subspace" || name == "linear_subspace") return SigmaKind::LinearSubspace;
  if (name == "zero_set" || name == "polynomial_zero_set") return SigmaKind::PolynomialZeroSet;
  fail(key, "unknown Sigma kind '" + name + "' (origin, subspace, zero_set)");
}

SigmaSpec parse_sigma(const YAML::Node& node, std::vector<int>& axes) {
  SigmaSpec spec;
  if (node.IsScalar()) {
    spec.kind = parse_kind(node.Scalar(), "sigma");
    if (spec.kind != SigmaKind::Origin) fail("sigma", "only 'origin' may be given without details");
    return spec;
  }
  if (!node.IsMap()) fail("sigma", "expected a kind name or a mapping");
  check_keys(node, "sigma", {"kind", "span", "axes", "equations"});
  if (!node["kind"]) fail("sigma.kind", "missing");
  spec.kind = parse_kind(scalar<std::string>(node["kind"], "sigma.kind"), "sigma.kind");
  if (spec.kind == SigmaKind::LinearSubspace) {
    if (node["span"]) {
      if (!node["span"].IsSequence()) fail("sigma.span", "expected a list of vectors");
      for (std::size_t i = 0; i < node["span"].size(); ++i) spec.span.push_back(number_list(node["span"][i], "sigma.span"));
    }
    if (node["axes"]) {
      if (!node["axes"].IsSequence()) fail("sigma.axes", "expected a list of coordinate indices");
      for (std::size_t i = 0; i < node["axes"].size(); ++i) {
        const int a = scalar<int>(node["axes"][i], "sigma.axes");
        if (a < 1) fail("sigma.axes", "coordinate indices start at 1");
        axes.push_back(a);
      }
    }
    if (spec.span.empty() && axes.empty()) fail("sigma.span", "a subspace needs span or axes");
  } else if (spec.kind == SigmaKind::PolynomialZeroSet) {
    if (!node["equations"]) fail("sigma.equations", "missing");
    spec.equations = string_list(node["equations"], "sigma.equations");
  }
  return spec;
}

void apply_thresholds(const YAML::Node& node, Thresholds& th) {
  if (!node.IsMap()) fail("thresholds", "expected a mapping");
  check_keys(node, "thresholds",
             {"slope_tol", "delta_floor", "margin_floor", "rank_tol", "containment_tol", "min_r2", "w_bar",
              "refine_per_shell", "refine_evaluations", "max_witnesses"});
  auto num = [&](const char* key, double& out) {
    if (node[key]) out = scalar<double>(node[key], std::string("thresholds.") + key);
  };
  auto integer = [&](const char* key, int& out) {
    if (node[key]) out = scalar<int>(node[key], std::string("thresholds.") + key);
  };
  num("slope_tol", th.slope_tol);
  num("delta_floor", th.delta_floor);
  num("margin_floor", th.margin_floor);
  num("rank_tol", th.rank_tol);
  num("containment_tol", th.containment_tol);
  num("min_r2", th.min_r2);
  num("w_bar", th.w_bar);
  integer("refine_per_shell", th.refine_per_shell);
  integer("refine_evaluations", th.refine_evaluations);
  integer("max_witnesses", th.max_witnesses);
  if (!(th.slope_tol > 0.0)) fail("thresholds.slope_tol", "must be positive");
  if (!(th.delta_floor >= th.slope_tol)) fail("thresholds.delta_floor", "must be at least slope_tol");
  if (!(th.margin_floor > 0.0)) fail("thresholds.margin_floor", "must be positive");
  if (!(th.rank_tol > 0.0)) fail("thresholds.rank_tol", "must be positive");
  if (!(th.containment_tol >= 0.0)) fail("thresholds.containment_tol", "must be non-negative");
  if (!(th.min_r2 >= 0.0 && th.min_r2 <= 1.0)) fail("thresholds.min_r2", "must lie in [0, 1]");
  if (!(th.w_bar > 0.0)) fail("thresholds.w_bar", "must be positive");
  if (th.refine_per_shell < 0) fail("thresholds.refine_per_shell", "must be non-negative");
  if (th.refine_evaluations < 0) fail("thresholds.refine_evaluations", "must be non-negative");
  if (th.max_witnesses < 1) fail("thresholds.max_witnesses", "must be positive");
}

void apply_sampling(const YAML::Node& node, SamplingConfig& s) {
  if (!node.IsMap()) fail("sampling", "expected a mapping");
  check_keys(node, "sampling", {"alpha", "shells", "K", "points_per_shell", "m", "seed"});
  if (node["alpha"]) s.alpha = scalar<double>(node["alpha"], "sampling.alpha");
  if (node["shells"]) s.shells = scalar<int>(node["shells"], "sampling.shells");
  if (node["K"]) s.shells = scalar<int>(node["K"], "sampling.K");
  if (node["points_per_shell"]) s.points_per_shell = scalar<int>(node["points_per_shell"], "sampling.points_per_shell");
  if (node["m"]) s.points_per_shell = scalar<int>(node["m"], "sampling.m");
  if (node["seed"]) s.seed = scalar<std::uint64_t>(node["seed"], "sampling.seed");
  if (!(s.alpha > 0.0) || !std::isfinite(s.alpha)) fail("sampling.alpha", "must be positive");
  if (s.shells < 4) fail("sampling.shells", "at least 4 shells are needed for a regression");
  if (s.points_per_shell < 1) fail("sampling.points_per_shell", "must be positive");
}

std::size_t max_index(const std::vector<std::string>& texts) {
  std::size_t n = 0;
  for (const auto& t : texts) n = std::max(n, max_variable_index(t));
  return n;
}

}  // namespace

PolyMap ProblemConfig::germ_map() const { return parse_map(germ, n); }

SigmaSet ProblemConfig::build_sigma() const {
  switch (sigma.kind) {
    case SigmaKind::Origin: return SigmaSet::origin(n);
    case SigmaKind::LinearSubspace: {
      Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(sigma.span.size()));
      for (std::size_t j = 0; j < sigma.span.size(); ++j) {
        if (sigma.span[j].size() != n)
          throw ConfigError("sigma.span: vector " + std::to_string(j + 1) + " has length " +
                            std::to_string(sigma.span[j].size()) + ", expected n=" + std::to_string(n));
        for (std::size_t i = 0; i < n; ++i)
          m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sigma.span[j][i];
      }
      return SigmaSet::linear_subspace(m);
    }
    case SigmaKind::PolynomialZeroSet: {
      std::vector<RealPolynomial> polys;
      for (const auto& e : sigma.equations) polys.push_back(parse_polynomial(e, n).cast<double>());
      return SigmaSet::polynomial_zero_set(std::move(polys));
    }
  }
  throw ConfigError("sigma: unknown kind");
}

std::vector<PolyMap> ProblemConfig::extra_maps() const {
  std::vector<PolyMap> out;
  for (const auto& g : extra_perturbations) out.push_back(parse_map(g, n));
  return out;
}

std::optional<double> flatness_slope(const PolyMap& h, int r, const ShellSample& sample) {
  std::vector<double> xs, ys;
  for (const auto& shell : sample.shells) {
    double sup = 0.0;
    for (const auto& pt : shell.points)
      sup = std::max(sup, eval_map(h, pt.x).norm() / std::pow(pt.distance, r + 1));
    if (sup > 0.0 && std::isfinite(sup)) {
      xs.push_back(std::log2(shell.outer));
      ys.push_back(std::log2(sup));
    }
  }
  if (xs.size() < 4) return std::nullopt;
  return fit_line(xs, ys).slope;
}

void validate_perturbations(const ProblemConfig& config) {
  if (config.extra_perturbations.empty()) return;
  const PolyMap f = config.germ_map();
  const SigmaSet sigma = config.build_sigma();
  const ShellSample sample =
      sample_shells(sigma, config.sampling.alpha, config.sampling.shells, kFlatnessPoints, config.sampling.seed);
  for (std::size_t i = 0; i < config.extra_perturbations.size(); ++i) {
    const std::string key = "extra_perturbations[" + std::to_string(i) + "]";
    const auto& text = config.extra_perturbations[i];
    if (text.size() != f.p())
      fail(key, "has " + std::to_string(text.size()) + " components, the germ has p=" + std::to_string(f.p()));
    const PolyMap g = parse_map(text, config.n);
    const auto slope = flatness_slope(g - f, config.r, sample);
    if (slope && *slope < -config.thresholds.slope_tol)
      fail(key, "g - f is not " + std::to_string(config.r + 1) +
                    "-flat relative to Sigma (|g - f| / d^(r+1) grows with slope " + std::to_string(*slope) + ")");
  }
}

ProblemConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("parse error: the config must be a mapping");
  check_keys(root, "",
             {"germ", "n", "sigma", "r", "checks", "sampling", "extra_perturbations", "amplitudes", "arcs",
              "thresholds", "stability"});

  ProblemConfig cfg;
  if (!root["germ"]) fail("germ", "missing");
  cfg.germ = string_list(root["germ"], "germ");

  std::vector<int> axes;
  if (root["sigma"]) cfg.sigma = parse_sigma(root["sigma"], axes);

  if (!root["r"]) fail("r", "missing");
  cfg.r = scalar<int>(root["r"], "r");
  if (cfg.r < 1) fail("r", "must be >= 1");

  if (!root["checks"]) fail("checks", "missing");
  for (const auto& name : string_list(root["checks"], "checks")) {
    const auto tag = parse_condition_tag(name);
    if (!tag) fail("checks", "unknown condition '" + name + "'");
    if (std::find(cfg.checks.begin(), cfg.checks.end(), *tag) == cfg.checks.end()) cfg.checks.push_back(*tag);
  }

  if (root["sampling"]) apply_sampling(root["sampling"], cfg.sampling);
  if (root["thresholds"]) apply_thresholds(root["thresholds"], cfg.thresholds);
  if (root["stability"]) cfg.stability = scalar<bool>(root["stability"], "stability");

  if (root["extra_perturbations"]) {
    const YAML::Node& node = root["extra_perturbations"];
    if (!node.IsSequence()) fail("extra_perturbations", "expected a list");
    for (std::size_t i = 0; i < node.size(); ++i)
      cfg.extra_perturbations.push_back(string_list(node[i], "extra_perturbations[" + std::to_string(i) + "]"));
  }
  if (root["amplitudes"]) {
    cfg.amplitudes = number_list(root["amplitudes"], "amplitudes");
    if (std::none_of(cfg.amplitudes.begin(), cfg.amplitudes.end(), [](double a) { return a != 0.0; }))
      fail("amplitudes", "needs a non-zero amplitude");
  }
  if (root["arcs"]) {
    const YAML::Node& node = root["arcs"];
    if (!node.IsSequence()) fail("arcs", "expected a list");
    for (std::size_t i = 0; i < node.size(); ++i) {
      const std::string key = "arcs[" + std::to_string(i) + "]";
      ArcSpec arc;
      if (node[i].IsMap()) {
        check_keys(node[i], key, {"name", "curve", "grid"});
        if (!node[i]["curve"]) fail(key + ".curve", "missing");
        arc.curve = string_list(node[i]["curve"], key + ".curve");
        if (node[i]["name"]) arc.name = scalar<std::string>(node[i]["name"], key + ".name");
        if (node[i]["grid"]) arc.grid = number_list(node[i]["grid"], key + ".grid");
      } else {
        arc.curve = string_list(node[i], key);
      }
      if (arc.name.empty()) arc.name = "arc" + std::to_string(i + 1);
      cfg.arcs.push_back(std::move(arc));
    }
  }

  // Ambient dimension: explicit, else the largest variable index in use.
  std::size_t inferred = max_index(cfg.germ);
  inferred = std::max(inferred, max_index(cfg.sigma.equations));
  for (const auto& g : cfg.extra_perturbations) inferred = std::max(inferred, max_index(g));
  for (int a : axes) inferred = std::max(inferred, static_cast<std::size_t>(a));
  for (const auto& v : cfg.sigma.span) inferred = std::max(inferred, v.size());
  if (root["n"]) {
    const int n = scalar<int>(root["n"], "n");
    if (n < 1) fail("n", "must be positive");
    cfg.n = static_cast<std::size_t>(n);
    if (cfg.n < inferred) fail("n", "variables up to x" + std::to_string(inferred) + " are used");
  } else {
    cfg.n = std::max<std::size_t>(inferred, 1);
  }
  const std::size_t p = cfg.germ.size();
  if (cfg.n < p)
    fail("germ", "n ≥ p required (n=" + std::to_string(cfg.n) + ", p=" + std::to_string(p) + ")");
  for (int a : axes) {
    std::vector<double> e(cfg.n, 0.0);
    e[static_cast<std::size_t>(a - 1)] = 1.0;
    cfg.sigma.span.push_back(std::move(e));
  }

  try {
    (void)cfg.germ_map();
  } catch (const Error& e) {
    fail("germ", e.what());
  }
  try {
    (void)cfg.build_sigma();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail("sigma", e.what());
  }
  for (std::size_t i = 0; i < cfg.arcs.size(); ++i) {
    try {
      const ArcProbe probe = cfg.arcs[i].grid.empty() ? ArcProbe::parse(cfg.arcs[i].curve)
                                                      : ArcProbe::parse(cfg.arcs[i].curve, cfg.arcs[i].grid);
      if (probe.dimension() != cfg.n)
        fail("arcs[" + std::to_string(i) + "]", "curve has " + std::to_string(probe.dimension()) +
                                                    " components, expected n=" + std::to_string(cfg.n));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      fail("arcs[" + std::to_string(i) + "]", e.what());
    }
  }
  try {
    validate_perturbations(cfg);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail("extra_perturbations", e.what());
  }
  return cfg;
}

ProblemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace jetcheck
