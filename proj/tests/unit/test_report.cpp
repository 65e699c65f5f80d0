#include <doctest.h>

#include <regex>
#include <sstream>

#include "jetcheck/config.hpp"
#include "jetcheck/report.hpp"

using namespace jetcheck;

namespace {

ProblemConfig quick(std::string text) {
  text += "\nsampling: {points_per_shell: 64}\nstability: false\n";
  return parse_config(text);
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("config defaults") {
  const ProblemConfig c = parse_config("germ: \"x1^2+x2^2\"\nsigma: origin\nr: 2\nchecks: [K_tilde]\n");
  CHECK(c.sampling.alpha == 0.5);
  CHECK(c.sampling.shells == 12);
  CHECK(c.sampling.points_per_shell == 512);
  CHECK(c.n == 2);
  CHECK(c.thresholds == Thresholds{});
  CHECK(c.checks == std::vector<ConditionTag>{ConditionTag::KTilde});
}

TEST_CASE("config accepts JSON") {
  const ProblemConfig c = parse_config(
      R"({"germ": ["x1^3"], "sigma": {"kind": "subspace", "axes": [2]}, "r": 3, "checks": ["K"]})");
  CHECK(c.n == 2);
  CHECK(c.sigma.span == std::vector<std::vector<double>>{{0.0, 1.0}});
}

TEST_CASE("config rejections name the key") {
  CHECK_THROWS_WITH_AS(parse_config("germ: [x1, x2]\nn: 1\nr: 1\nchecks: [K]\n"), doctest::Contains("n"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("germ: [x1, x1^2]\nr: 1\nchecks: [K]\n"), doctest::Contains("n ≥ p required"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("germ: x1\nr: 0\nchecks: [K]\n"), doctest::Contains("r:"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("germ: x1\nr: 1\nchecks: [K]\nbogus: 1\n"), doctest::Contains("bogus"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("germ: x1\nr: 1\nchecks: [Q]\n"), doctest::Contains("checks"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("germ: x1\nr: 1\nchecks: [K]\nthresholds: {slope_tol: -1}\n"),
                       doctest::Contains("thresholds.slope_tol"), ConfigError);
  CHECK_THROWS_AS(parse_config("germ: [x1\n"), ConfigError);
}

TEST_CASE("extra perturbations must be flat") {
  const std::string base = "germ: \"x1^2 + x2^2\"\nsigma: origin\nr: 2\nchecks: [K_delta]\n";
  CHECK_THROWS_WITH_AS(parse_config(base + "extra_perturbations: [\"x1^2 + x2^2 + x1^2\"]\n"),
                       doctest::Contains("extra_perturbations[0]"), ConfigError);
  CHECK_NOTHROW(parse_config(base + "extra_perturbations: [\"x1^2 + x2^2 + 5*x1^3\"]\n"));
  CHECK_THROWS_AS(parse_config(base + "extra_perturbations: [[\"x1^3\", \"x2^3\"]]\n"), ConfigError);
}

TEST_CASE("exit codes on the canonical trio") {
  const AnalysisReport pos = run_analysis(quick("germ: \"x1^2+x2^2\"\nr: 2\nchecks: [K, K_tilde, gram3, dual4]"));
  CHECK(pos.exit_code() == 0);
  CHECK(pos.diagnostics.size() == 1);  // singular containment rides along when K holds
  const AnalysisReport neg = run_analysis(quick("germ: x1^2\nn: 2\nr: 2\nchecks: [K_tilde]"));
  CHECK(neg.exit_code() == 1);
  const auto& x = neg.verdicts.front().witnesses.front().x;
  CHECK(std::abs(x[0]) <= 1e-3 * std::abs(x[1]));
  const AnalysisReport rel = run_analysis(quick("germ: x1^3\nsigma: {kind: subspace, axes: [2]}\nr: 3\nchecks: [K]"));
  CHECK(rel.exit_code() == 0);
}

TEST_CASE("report serialization") {
  ProblemConfig cfg = quick(
      "germ: \"x1^2 + x2^2\"\nr: 2\nchecks: [K, K_tilde_delta, KZ]\narcs: [{name: diag, curve: [t, t]}]");
  cfg.stability = true;
  const AnalysisReport report = run_analysis(cfg);

  const auto json_text = emit_report(report, ReportFormat::Json);
  const AnalysisReport back = report_from_json(nlohmann::json::parse(json_text));
  CHECK(back == report);

  std::size_t regressions = 0;
  for (const auto& v : report.verdicts) regressions += v.regressions.size();
  for (const auto& v : report.diagnostics) regressions += v.regressions.size();
  const auto csv = lines_of(emit_report(report, ReportFormat::Csv));
  CHECK(csv.size() == 1 + regressions * 12);
  CHECK(csv.front().find("shell_radius,points,infimum,fitted_value") != std::string::npos);

  const auto human = lines_of(emit_report(report, ReportFormat::Human));
  const std::regex word("\\b(HOLDS|FAILS|INCONCLUSIVE)\\b");
  std::size_t status_lines = 0;
  for (const auto& line : human) {
    const auto hits = std::distance(std::sregex_iterator(line.begin(), line.end(), word), std::sregex_iterator());
    CHECK(hits <= 1);
    if (hits == 1) ++status_lines;
  }
  CHECK(status_lines == cfg.checks.size());
}

TEST_CASE("json keeps non-finite and absent values apart") {
  AnalysisReport r;
  ConditionVerdict v;
  v.estimate.per_shell_infima.push_back({0.5, std::nullopt, 0});
  v.estimate.per_shell_infima.push_back({0.25, std::numeric_limits<double>::infinity(), 3});
  r.verdicts.push_back(v);
  const AnalysisReport back = report_from_json(report_to_json(r));
  CHECK(back == r);
  CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("determinism") {
  const ProblemConfig cfg = quick("germ: \"x1^2 - x2^3\"\nr: 2\nchecks: [K, K_tilde, certificate]");
  const AnalysisReport a = run_analysis(cfg);
  const AnalysisReport b = run_analysis(cfg);
  auto strip = [](const AnalysisReport& r) {
    auto j = report_to_json(r);
    j.erase("timing");
    return j.dump();
  };
  CHECK(strip(a) == strip(b));
  CHECK(a.same_content(b));
}

TEST_CASE("unwritable destination") {
  const AnalysisReport r;
  CHECK_THROWS_AS(write_report(r, ReportFormat::Json, "/nonexistent-dir/report.json"), Error);
  CHECK_THROWS_AS(parse_report_format("xml"), InputError);
}
