#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "jetcheck/analysis.hpp"
#include "jetcheck/config.hpp"
#include "jetcheck/functionals.hpp"
#include "jetcheck/report.hpp"

using namespace jetcheck;

namespace {

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  ss.imbue(std::locale::classic());
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InputError("bad coordinate '" + item + "' in point '" + text + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw InputError("empty point");
  return out;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error("cannot write to '" + out_path + "'");
  out << text;
}

ProblemConfig load_with_overrides(const std::string& path, const std::optional<double>& alpha,
                                  const std::optional<std::uint64_t>& seed) {
  ProblemConfig cfg = load_config(path);
  if (alpha) {
    if (!(*alpha > 0.0)) throw ConfigError("--alpha: must be positive");
    cfg.sampling.alpha = *alpha;
  }
  if (seed) cfg.sampling.seed = *seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of relative Kuo-type sufficiency conditions for jets"};
  app.require_subcommand(1);

  std::string config_path, out_path, format = "human";
  std::optional<double> alpha;
  std::optional<std::uint64_t> seed;
  bool no_stability = false;

  auto* check = app.add_subcommand("check", "Run the full pipeline on a problem config");
  check->add_option("--config", config_path, "Problem config (YAML or JSON)")->required();
  check->add_option("--out", out_path, "Write the report here instead of stdout");
  check->add_option("--format", format, "json, csv or human")->check(CLI::IsMember({"json", "csv", "human"}));
  check->add_option("--alpha", alpha, "Neighbourhood radius");
  check->add_option("--seed", seed, "Sampling seed");
  check->add_flag("--no-stability", no_stability, "Skip the alpha/4 rerun");

  std::vector<std::string> germ;
  std::vector<std::string> points;
  std::size_t n = 0;
  auto* functionals = app.add_subcommand("functionals", "Evaluate kappa, nu, eta and Gamma of df at points");
  functionals->add_option("--germ", germ, "Map components, one per flag")->required();
  functionals->add_option("--point", points, "Comma separated coordinates, one point per flag")->required();
  functionals->add_option("--n", n, "Ambient dimension (default: inferred)");

  std::string sample_config;
  auto* sample = app.add_subcommand("sample", "Emit the shell sample of a config as CSV");
  sample->add_option("--config", sample_config, "Problem config")->required();
  sample->add_option("--out", out_path, "Output path");
  sample->add_option("--alpha", alpha, "Neighbourhood radius");
  sample->add_option("--seed", seed, "Sampling seed");

  std::string arcs_config;
  auto* arcs = app.add_subcommand("arcs", "Order of vanishing along the arcs of a config");
  arcs->add_option("--config", arcs_config, "Problem config")->required();
  arcs->add_option("--out", out_path, "Output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (*check) {
      ProblemConfig cfg = load_with_overrides(config_path, alpha, seed);
      if (no_stability) cfg.stability = false;
      const AnalysisReport report = run_analysis(cfg);
      const ReportFormat fmt = parse_report_format(format);
      if (out_path.empty())
        std::cout << emit_report(report, fmt);
      else
        write_report(report, fmt, out_path);
      return report.exit_code();
    }
    if (*functionals) {
      std::size_t dim = n;
      for (const auto& c : germ) dim = std::max(dim, max_variable_index(c));
      const PolyMap f = parse_map(germ, dim);
      nlohmann::json out = nlohmann::json::array();
      for (const auto& text : points) {
        const auto coords = parse_point(text);
        if (coords.size() != f.n())
          throw InputError("point '" + text + "' has " + std::to_string(coords.size()) + " coordinates, expected " +
                           std::to_string(f.n()));
        const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(coords.data(), static_cast<Eigen::Index>(coords.size()));
        const LinearMap df = jacobian(f, x);
        nlohmann::json row = {{"point", coords},
                              {"kappa", kuo_distance(df)},
                              {"nu", rabier_nu(df)},
                              {"gram", gram_det(df.matrix().transpose())},
                              {"f_norm", eval_map(f, x).norm()}};
        if (binomial(f.n(), f.p()) <= kMaxMinorSubsets) {
          row["eta"] = eta(df);
          row["eta_tilde"] = eta_tilde(df);
          row["minor_sum"] = squared_minor_sum(df);
        }
        out.push_back(row);
      }
      emit(out.dump(2) + "\n", out_path);
      return 0;
    }
    if (*sample) {
      const ProblemConfig cfg = load_with_overrides(sample_config, alpha, seed);
      const ShellSample s = sample_shells(cfg.build_sigma(), cfg.sampling);
      std::string text = "shell,shell_radius,distance";
      for (std::size_t i = 1; i <= cfg.n; ++i) text += ",x" + std::to_string(i);
      text += "\n";
      for (std::size_t k = 0; k < s.shells.size(); ++k)
        for (const auto& pt : s.shells[k].points) {
          text += std::to_string(k) + "," + format_number(s.shells[k].outer) + "," + format_number(pt.distance);
          for (Eigen::Index i = 0; i < pt.x.size(); ++i) text += "," + format_number(pt.x(i));
          text += "\n";
        }
      emit(text, out_path);
      return 0;
    }
    if (*arcs) {
      ProblemConfig cfg = load_config(arcs_config);
      if (cfg.arcs.empty()) throw ConfigError("arcs: the config lists no arcs");
      const PolyMap f = cfg.germ_map();
      const SigmaSet sigma = cfg.build_sigma();
      std::string text = "arc,quantity,order,degenerate,r2,usable_points\n";
      for (const auto& spec : cfg.arcs) {
        const ArcProbe probe = spec.grid.empty() ? ArcProbe::parse(spec.curve) : ArcProbe::parse(spec.curve, spec.grid);
        const std::vector<std::string> names = {"kappa(df)", "nu(df)", "|f|"};
        const auto orders = arc_orders(probe, sigma,
                                       {[&](const Eigen::VectorXd& x) { return kuo_distance(jacobian(f, x)); },
                                        [&](const Eigen::VectorXd& x) { return rabier_nu(jacobian(f, x)); },
                                        [&](const Eigen::VectorXd& x) { return eval_map(f, x).norm(); }});
        for (std::size_t i = 0; i < orders.size(); ++i)
          text += spec.name + "," + names[i] + "," + format_number(orders[i].order) + "," +
                  (orders[i].degenerate ? "true" : "false") + "," + format_number(orders[i].r2) + "," +
                  std::to_string(orders[i].usable_points) + "\n";
      }
      emit(text, out_path);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
