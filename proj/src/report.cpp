#include "jetcheck/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace jetcheck {

using nlohmann::json;

namespace {

json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double to_num(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw InputError("report: unexpected number '" + s + "'");
  }
  return j.get<double>();
}

json opt(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

std::optional<double> to_opt(const json& j) {
  if (j.is_null()) return std::nullopt;
  return to_num(j);
}

json estimate_to_json(const ExponentEstimate& e) {
  json shells = json::array();
  for (const auto& s : e.per_shell_infima)
    shells.push_back({{"radius", num(s.radius)}, {"infimum", opt(s.infimum)}, {"points", s.points}});
  return {{"slope", opt(e.slope)},
          {"intercept", opt(e.intercept)},
          {"r2", num(e.r2)},
          {"usable_shells", e.usable_shells},
          {"zero_shells", e.zero_shells},
          {"per_shell_infima", shells}};
}

ExponentEstimate estimate_from_json(const json& j) {
  ExponentEstimate e;
  e.slope = to_opt(j.at("slope"));
  e.intercept = to_opt(j.at("intercept"));
  e.r2 = to_num(j.at("r2"));
  e.usable_shells = j.at("usable_shells").get<int>();
  e.zero_shells = j.at("zero_shells").get<int>();
  for (const auto& s : j.at("per_shell_infima"))
    e.per_shell_infima.push_back({to_num(s.at("radius")), to_opt(s.at("infimum")), s.at("points").get<int>()});
  return e;
}

json thresholds_to_json(const Thresholds& t) {
  return {{"slope_tol", num(t.slope_tol)},
          {"delta_floor", num(t.delta_floor)},
          {"margin_floor", num(t.margin_floor)},
          {"rank_tol", num(t.rank_tol)},
          {"containment_tol", num(t.containment_tol)},
          {"min_r2", num(t.min_r2)},
          {"w_bar", num(t.w_bar)},
          {"refine_per_shell", t.refine_per_shell},
          {"refine_evaluations", t.refine_evaluations},
          {"max_witnesses", t.max_witnesses}};
}

Thresholds thresholds_from_json(const json& j) {
  Thresholds t;
  t.slope_tol = to_num(j.at("slope_tol"));
  t.delta_floor = to_num(j.at("delta_floor"));
  t.margin_floor = to_num(j.at("margin_floor"));
  t.rank_tol = to_num(j.at("rank_tol"));
  t.containment_tol = to_num(j.at("containment_tol"));
  t.min_r2 = to_num(j.at("min_r2"));
  t.w_bar = to_num(j.at("w_bar"));
  t.refine_per_shell = j.at("refine_per_shell").get<int>();
  t.refine_evaluations = j.at("refine_evaluations").get<int>();
  t.max_witnesses = j.at("max_witnesses").get<int>();
  return t;
}

std::string status_word(Status s) {
  switch (s) {
    case Status::Holds: return "holds";
    case Status::Fails: return "fails";
    case Status::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string short_number(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(4);
  os << v;
  return os.str();
}

std::string opt_short(const std::optional<double>& v) { return v ? short_number(*v) : "-"; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string emit_csv(const AnalysisReport& report) {
  std::string out = "check,regression,target_exponent,shell_index,shell_radius,points,infimum,fitted_value\n";
  auto block = [&](const ConditionVerdict& v) {
    for (const auto& reg : v.regressions) {
      const auto& shells = reg.estimate.per_shell_infima;
      for (std::size_t k = 0; k < shells.size(); ++k) {
        const auto fitted = reg.estimate.fitted_value(shells[k].radius);
        out += to_string(v.condition) + "," + csv_field(reg.label) + "," + format_number(reg.target_exponent) + "," +
               std::to_string(k) + "," + format_number(shells[k].radius) + "," + std::to_string(shells[k].points) +
               "," + (shells[k].infimum ? format_number(*shells[k].infimum) : "") + "," +
               (fitted ? format_number(*fitted) : "") + "\n";
      }
    }
  };
  for (const auto& v : report.verdicts) block(v);
  for (const auto& v : report.diagnostics) block(v);
  return out;
}

std::string emit_human(const AnalysisReport& report) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "germ: [";
  for (std::size_t i = 0; i < report.germ.size(); ++i) os << (i ? "; " : "") << report.germ[i];
  os << "]  n=" << report.n << " p=" << report.p << " r=" << report.r << "\n";
  os << "sigma: " << report.sigma << "\n";
  os << "sample: alpha=" << short_number(report.environment.alpha) << " shells=" << report.environment.shells
     << " m=" << report.environment.points_per_shell << " seed=" << report.environment.seed << "\n";
  for (const auto& w : report.warnings) os << "warning: " << w << "\n";
  for (const auto& v : report.verdicts) {
    std::string name = to_string(v.condition);
    name.resize(std::max<std::size_t>(name.size(), 14), ' ');
    std::string status = to_string(v.status);
    status.resize(13, ' ');
    os << name << " " << status << " margin=" << opt_short(v.margin) << " slope=" << opt_short(v.estimate.slope)
       << " target=" << short_number(v.target_exponent) << " r2=" << short_number(v.estimate.r2);
    if (v.delta_hat) os << " delta=" << short_number(*v.delta_hat);
    os << " stable=" << (v.stable ? (*v.stable ? "yes" : "no") : "-") << "\n";
    for (const auto& note : v.notes) os << "    note: " << note << "\n";
    if (!v.witnesses.empty() && v.status != Status::Holds) {
      const Witness& w = v.witnesses.front();
      os << "    witness: x=(";
      for (std::size_t i = 0; i < w.x.size(); ++i) os << (i ? ", " : "") << short_number(w.x[i]);
      os << ") d=" << short_number(w.distance) << " ratio=" << short_number(w.ratio) << "\n";
    }
  }
  for (const auto& v : report.diagnostics)
    os << "diagnostic " << to_string(v.condition) << ": " << status_word(v.status) << "\n";
  for (const auto& arc : report.arcs) {
    os << "arc " << arc.name << ":";
    if (!arc.error.empty()) {
      os << " " << arc.error << "\n";
      continue;
    }
    for (std::size_t i = 0; i < arc.orders.size(); ++i)
      os << " " << arc.quantities[i] << "~d^" << short_number(arc.orders[i].order);
    os << "\n";
  }
  os << "exit code " << report.exit_code() << "\n";
  return os.str();
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "human") return ReportFormat::Human;
  throw InputError("unknown report format '" + name + "' (json, csv, human)");
}

std::string format_number(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

json verdict_to_json(const ConditionVerdict& v) {
  json witnesses = json::array();
  for (const auto& w : v.witnesses) {
    json x = json::array();
    for (double c : w.x) x.push_back(num(c));
    witnesses.push_back(
        {{"x", x}, {"distance", num(w.distance)}, {"ratio", num(w.ratio)}, {"shell", w.shell}, {"member", w.member}});
  }
  json regressions = json::array();
  for (const auto& r : v.regressions)
    regressions.push_back(
        {{"label", r.label}, {"target_exponent", num(r.target_exponent)}, {"estimate", estimate_to_json(r.estimate)}});
  return {{"condition", to_string(v.condition)},
          {"status", to_string(v.status)},
          {"estimate", estimate_to_json(v.estimate)},
          {"target_exponent", num(v.target_exponent)},
          {"margin", opt(v.margin)},
          {"delta_hat", opt(v.delta_hat)},
          {"witnesses", witnesses},
          {"regressions", regressions},
          {"notes", v.notes},
          {"stable", v.stable ? json(*v.stable) : json(nullptr)}};
}

ConditionVerdict verdict_from_json(const json& j) {
  ConditionVerdict v;
  const auto tag = parse_condition_tag(j.at("condition").get<std::string>());
  const auto status = parse_status(j.at("status").get<std::string>());
  if (!tag || !status) throw InputError("report: unknown condition or status");
  v.condition = *tag;
  v.status = *status;
  v.estimate = estimate_from_json(j.at("estimate"));
  v.target_exponent = to_num(j.at("target_exponent"));
  v.margin = to_opt(j.at("margin"));
  v.delta_hat = to_opt(j.at("delta_hat"));
  for (const auto& w : j.at("witnesses")) {
    Witness out;
    for (const auto& c : w.at("x")) out.x.push_back(to_num(c));
    out.distance = to_num(w.at("distance"));
    out.ratio = to_num(w.at("ratio"));
    out.shell = w.at("shell").get<int>();
    out.member = w.at("member").get<std::string>();
    v.witnesses.push_back(std::move(out));
  }
  for (const auto& r : j.at("regressions"))
    v.regressions.push_back(
        {r.at("label").get<std::string>(), to_num(r.at("target_exponent")), estimate_from_json(r.at("estimate"))});
  v.notes = j.at("notes").get<std::vector<std::string>>();
  if (!j.at("stable").is_null()) v.stable = j.at("stable").get<bool>();
  return v;
}

json report_to_json(const AnalysisReport& report) {
  json verdicts = json::array(), diagnostics = json::array(), table = json::array(), arcs = json::array();
  for (const auto& v : report.verdicts) verdicts.push_back(verdict_to_json(v));
  for (const auto& v : report.diagnostics) diagnostics.push_back(verdict_to_json(v));
  for (const auto& row : report.shell_table)
    table.push_back({{"radius", num(row.radius)},
                     {"points", row.points},
                     {"kappa", opt(row.kappa)},
                     {"nu", opt(row.nu)},
                     {"eta", opt(row.eta)},
                     {"f_norm", opt(row.f_norm)},
                     {"lhs", opt(row.lhs)}});
  for (const auto& arc : report.arcs) {
    json orders = json::array();
    for (const auto& o : arc.orders)
      orders.push_back(
          {{"order", num(o.order)}, {"degenerate", o.degenerate}, {"r2", num(o.r2)}, {"usable_points", o.usable_points}});
    arcs.push_back({{"name", arc.name},
                    {"curve", arc.curve},
                    {"quantities", arc.quantities},
                    {"orders", orders},
                    {"error", arc.error}});
  }
  return {{"germ", report.germ},
          {"n", report.n},
          {"p", report.p},
          {"r", report.r},
          {"sigma", report.sigma},
          {"sigma_kind", report.sigma_kind},
          {"thresholds", thresholds_to_json(report.thresholds)},
          {"verdicts", verdicts},
          {"diagnostics", diagnostics},
          {"shell_table", table},
          {"arcs", arcs},
          {"warnings", report.warnings},
          {"exit_code", report.exit_code()},
          {"environment",
           {{"version", report.environment.version},
            {"seed", report.environment.seed},
            {"alpha", num(report.environment.alpha)},
            {"shells", report.environment.shells},
            {"points_per_shell", report.environment.points_per_shell}}},
          {"timing",
           {{"sampling_seconds", num(report.timing.sampling_seconds)},
            {"checks_seconds", num(report.timing.checks_seconds)},
            {"total_seconds", num(report.timing.total_seconds)},
            {"threads", report.timing.threads}}}};
}

AnalysisReport report_from_json(const json& j) {
  AnalysisReport r;
  r.germ = j.at("germ").get<std::vector<std::string>>();
  r.n = j.at("n").get<std::size_t>();
  r.p = j.at("p").get<std::size_t>();
  r.r = j.at("r").get<int>();
  r.sigma = j.at("sigma").get<std::string>();
  r.sigma_kind = j.at("sigma_kind").get<std::string>();
  r.thresholds = thresholds_from_json(j.at("thresholds"));
  for (const auto& v : j.at("verdicts")) r.verdicts.push_back(verdict_from_json(v));
  for (const auto& v : j.at("diagnostics")) r.diagnostics.push_back(verdict_from_json(v));
  for (const auto& row : j.at("shell_table"))
    r.shell_table.push_back({to_num(row.at("radius")), row.at("points").get<int>(), to_opt(row.at("kappa")),
                             to_opt(row.at("nu")), to_opt(row.at("eta")), to_opt(row.at("f_norm")),
                             to_opt(row.at("lhs"))});
  for (const auto& a : j.at("arcs")) {
    ArcReport arc;
    arc.name = a.at("name").get<std::string>();
    arc.curve = a.at("curve").get<std::vector<std::string>>();
    arc.quantities = a.at("quantities").get<std::vector<std::string>>();
    arc.error = a.at("error").get<std::string>();
    for (const auto& o : a.at("orders"))
      arc.orders.push_back(
          {to_num(o.at("order")), o.at("degenerate").get<bool>(), to_num(o.at("r2")), o.at("usable_points").get<int>()});
    r.arcs.push_back(std::move(arc));
  }
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  const auto& env = j.at("environment");
  r.environment.version = env.at("version").get<std::string>();
  r.environment.seed = env.at("seed").get<std::uint64_t>();
  r.environment.alpha = to_num(env.at("alpha"));
  r.environment.shells = env.at("shells").get<int>();
  r.environment.points_per_shell = env.at("points_per_shell").get<int>();
  const auto& t = j.at("timing");
  r.timing.sampling_seconds = to_num(t.at("sampling_seconds"));
  r.timing.checks_seconds = to_num(t.at("checks_seconds"));
  r.timing.total_seconds = to_num(t.at("total_seconds"));
  r.timing.threads = t.at("threads").get<int>();
  return r;
}

std::string emit_report(const AnalysisReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json: return report_to_json(report).dump(2) + "\n";
    case ReportFormat::Csv: return emit_csv(report);
    case ReportFormat::Human: return emit_human(report);
  }
  return {};
}

void write_report(const AnalysisReport& report, ReportFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write report to '" + path.string() + "'");
  out << emit_report(report, format);
  out.flush();
  if (!out) throw Error("cannot write report to '" + path.string() + "'");
}

}  // namespace jetcheck
