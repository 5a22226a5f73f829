#include "cli_app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "sinr/oracle.hpp"
#include "sinr/spec_io.hpp"
#include "sinr/static_region.hpp"
#include "sinr/time_varying.hpp"

namespace sinr::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUnbounded = 2;  // solve/tv-solve; verify reuses it for gap breach

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string json_str(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

// numbers as JSON values; non-finite becomes null (JSON has no inf)
std::string json_num(double x) { return std::isfinite(x) ? fmt_num(x) : "null"; }

std::string json_vec(const Vector& v) {
  std::string out = "[";
  for (Index i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += json_num(v(i));
  }
  return out + "]";
}

Vector rates_of(const Vector& sinr) {
  return (sinr.array() + 1.0).log() / std::log(2.0);
}

// ---------- input helpers ----------

std::vector<double> read_number_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open file");
  std::vector<double> vals;
  std::string tok;
  while (in >> tok) {
    std::replace(tok.begin(), tok.end(), ',', ' ');
    std::istringstream ts(tok);
    double x;
    while (ts >> x) vals.push_back(x);
  }
  return vals;
}

Direction resolve_mu(const RunConfig& cfg, int n) {
  Vector mu;
  if (!cfg.mu.empty() && !cfg.mu_file.empty())
    throw ValidationError("--mu and --mu-file are mutually exclusive");
  if (!cfg.mu.empty()) {
    mu = Eigen::Map<const Vector>(cfg.mu.data(), cfg.mu.size());
  } else if (!cfg.mu_file.empty()) {
    const auto vals = read_number_file(cfg.mu_file);
    mu = Eigen::Map<const Vector>(vals.data(), vals.size());
  } else {
    mu = Vector::Ones(n);
  }
  if (mu.size() != n)
    throw ValidationError("mu: expected " + std::to_string(n) + " entries, got " +
                          std::to_string(mu.size()));
  Direction d{mu};
  d.validate();
  return d;
}

std::vector<Direction> read_directions_file(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open file");
  std::vector<Direction> dirs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::vector<double> vals;
    double x;
    while (ls >> x) vals.push_back(x);
    if (vals.empty()) continue;  // blank line
    if (static_cast<int>(vals.size()) != n)
      throw ValidationError(path + ":" + std::to_string(lineno) + ": expected " +
                            std::to_string(n) + " weights, got " +
                            std::to_string(vals.size()));
    Direction d{Eigen::Map<const Vector>(vals.data(), vals.size())};
    d.validate();
    dirs.push_back(std::move(d));
  }
  if (dirs.empty()) throw ValidationError(path + ": no directions found");
  return dirs;
}

// Output sink: file when --output given, the provided stream otherwise.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ValidationError(path + ": cannot open for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

 private:
  std::ofstream file_;
  std::ostream& fallback_;
};

// ---------- solve / tv-solve ----------

void emit_report_json(std::ostream& os, const SolveReport& rep) {
  os << "{\n";
  os << "  \"gamma_star\": " << json_num(rep.gamma_star) << ",\n";
  os << "  \"unbounded\": " << (rep.unbounded ? "true" : "false") << ",\n";
  os << "  \"binding\": " << json_str(rep.binding) << ",\n";
  os << "  \"ties\": [";
  for (std::size_t k = 0; k < rep.ties.size(); ++k) {
    if (k) os << ",";
    os << json_str("c" + std::to_string(rep.ties[k] + 1));
  }
  os << "],\n";
  os << "  \"sinr\": " << json_vec(rep.sinr) << ",\n";
  os << "  \"rate\": " << json_vec(rates_of(rep.sinr)) << ",\n";
  os << "  \"power\": " << json_vec(rep.power);
  if (rep.average_power.size() > 0)
    os << ",\n  \"average_power\": " << json_vec(rep.average_power);
  os << "\n}\n";
}

void emit_report_csv(std::ostream& os, const SolveReport& rep, int n, int l) {
  const Vector rate = rates_of(rep.sinr);
  auto block_header = [&](const char* name, Index count) {
    for (Index i = 0; i < count; ++i) {
      os << ",";
      if (l > 1) {
        os << name << "_s" << (i / n + 1) << "u" << (i % n + 1);
      } else {
        os << name << (i + 1);
      }
    }
  };
  os << "gamma_star,unbounded,binding";
  block_header("sinr", rep.sinr.size());
  block_header("rate", rate.size());
  block_header("power", rep.power.size());
  for (Index i = 0; i < rep.average_power.size(); ++i) os << ",avg_power" << (i + 1);
  os << "\n";
  os << fmt_num(rep.gamma_star) << "," << (rep.unbounded ? "true" : "false") << ","
     << csv_field(rep.binding);
  for (Index i = 0; i < rep.sinr.size(); ++i) os << "," << fmt_num(rep.sinr(i));
  for (Index i = 0; i < rate.size(); ++i) os << "," << fmt_num(rate(i));
  for (Index i = 0; i < rep.power.size(); ++i) os << "," << fmt_num(rep.power(i));
  for (Index i = 0; i < rep.average_power.size(); ++i)
    os << "," << fmt_num(rep.average_power(i));
  os << "\n";
}

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const LoadedSpec spec = load_channel_spec(cfg.input_path);
  if (spec.time_varying)
    throw ValidationError("input is time-varying (has states); use tv-solve");
  const Direction d = resolve_mu(cfg, spec.channel.n);
  const SolveReport rep = multi_constrained_max_sinr(spec.channel, d, spec.constraints);

  Sink sink(cfg.output_path, out);
  const std::string format = cfg.format.empty() ? "json" : cfg.format;
  if (format == "json")
    emit_report_json(sink.stream(), rep);
  else
    emit_report_csv(sink.stream(), rep, spec.channel.n, 1);
  if (rep.unbounded) {
    err << "unbounded: no interference limits the balanced SINR in this direction\n";
    return kExitUnbounded;
  }
  return kExitOk;
}

int cmd_tv_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const LoadedSpec spec = load_channel_spec(cfg.input_path);
  if (!spec.time_varying)
    throw ValidationError("input is not time-varying (no states); use solve");
  const TimeVaryingChannel& tv = *spec.time_varying;
  const Direction d = resolve_mu(cfg, tv.user_count());
  const SolveReport rep = tv_multi(tv, d, spec.constraints);

  Sink sink(cfg.output_path, out);
  const std::string format = cfg.format.empty() ? "json" : cfg.format;
  if (format == "json")
    emit_report_json(sink.stream(), rep);
  else
    emit_report_csv(sink.stream(), rep, tv.user_count(), tv.state_count());
  if (rep.unbounded) {
    err << "unbounded: no interference limits the balanced SINR in this direction\n";
    return kExitUnbounded;
  }
  return kExitOk;
}

// ---------- sweep ----------

struct Curve {
  std::string label;
  std::vector<BoundaryPoint> points;
};

void emit_sweep_csv(std::ostream& os, const std::vector<Curve>& curves, int n,
                    bool with_curve_column) {
  if (with_curve_column) os << "curve,";
  os << "theta";
  for (int i = 1; i <= n; ++i) os << ",mu" << i;
  os << ",gamma_star";
  for (int i = 1; i <= n; ++i) os << ",sinr" << i;
  for (int i = 1; i <= n; ++i) os << ",rate" << i;
  os << ",binding,error\n";
  for (const auto& curve : curves) {
    for (const auto& pt : curve.points) {
      if (with_curve_column) os << csv_field(curve.label) << ",";
      os << (std::isnan(pt.theta) ? std::string() : fmt_num(pt.theta));
      for (Index i = 0; i < pt.mu.mu.size(); ++i) os << "," << fmt_num(pt.mu.mu(i));
      if (pt.error) {
        for (int i = 0; i < 2 * n + 2; ++i) os << ",";  // gamma, sinr, rate, binding
        os << "," << csv_field(*pt.error) << "\n";
        continue;
      }
      os << "," << fmt_num(pt.gamma_star);
      for (Index i = 0; i < pt.sinr.size(); ++i) os << "," << fmt_num(pt.sinr(i));
      for (Index i = 0; i < pt.rate.size(); ++i) os << "," << fmt_num(pt.rate(i));
      os << "," << csv_field(pt.binding) << ",\n";
    }
  }
}

void emit_sweep_json(std::ostream& os, const std::vector<Curve>& curves,
                     bool grouped) {
  auto emit_point = [&](const BoundaryPoint& pt, const char* indent) {
    os << indent << "{\"theta\": " << json_num(pt.theta)
       << ", \"mu\": " << json_vec(pt.mu.mu);
    if (pt.error) {
      os << ", \"error\": " << json_str(*pt.error) << "}";
      return;
    }
    os << ", \"gamma_star\": " << json_num(pt.gamma_star)
       << ", \"sinr\": " << json_vec(pt.sinr) << ", \"rate\": " << json_vec(pt.rate)
       << ", \"binding\": " << json_str(pt.binding) << "}";
  };
  if (!grouped) {
    os << "{\"points\": [\n";
    const auto& pts = curves.front().points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      emit_point(pts[i], "  ");
      os << (i + 1 < pts.size() ? ",\n" : "\n");
    }
    os << "]}\n";
    return;
  }
  os << "{\"curves\": [\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    os << "  {\"label\": " << json_str(curves[c].label) << ", \"points\": [\n";
    for (std::size_t i = 0; i < curves[c].points.size(); ++i) {
      emit_point(curves[c].points[i], "    ");
      os << (i + 1 < curves[c].points.size() ? ",\n" : "\n");
    }
    os << "  ]}" << (c + 1 < curves.size() ? ",\n" : "\n");
  }
  os << "]}\n";
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const LoadedSpec spec = load_channel_spec(cfg.input_path);
  if (spec.time_varying)
    throw ValidationError("sweep supports static channels only");
  const ChannelModel& ch = spec.channel;

  std::optional<std::vector<Direction>> dirs;
  if (!cfg.directions_file.empty())
    dirs = read_directions_file(cfg.directions_file, ch.n);
  else if (ch.n != 2)
    throw ValidationError("sweep: channels with n != 2 need --directions");
  if (!dirs && cfg.points < 2)
    throw ValidationError("sweep: --points must be >= 2");

  auto run_sweep = [&](const std::vector<PowerConstraint>& cs) {
    return dirs ? sweep_boundary(ch, cs, *dirs) : sweep_boundary(ch, cs, cfg.points);
  };

  std::vector<Curve> curves;
  if (cfg.per_constraint) {
    curves.push_back({"unconstrained", run_sweep({})});
    for (std::size_t k = 0; k < spec.constraints.size(); ++k) {
      Curve c{"c" + std::to_string(k + 1), run_sweep({spec.constraints[k]})};
      for (auto& pt : c.points)  // rebind the singleton label to the global id
        if (!pt.error) pt.binding = c.label;
      curves.push_back(std::move(c));
    }
  }
  curves.push_back({"combined", run_sweep(spec.constraints)});

  Sink sink(cfg.output_path, out);
  const std::string format = cfg.format.empty() ? "csv" : cfg.format;
  if (format == "csv")
    emit_sweep_csv(sink.stream(), curves, ch.n, cfg.per_constraint);
  else
    emit_sweep_json(sink.stream(), curves, cfg.per_constraint);
  return kExitOk;
}

// ---------- verify ----------

struct VerifyRow {
  std::string label;
  Vector mu;
  double closed = 0.0;
  double bisect = 0.0;
  double abs_gap = 0.0;
  double rel_gap = 0.0;
  bool pass = false;
};

VerifyRow verify_direction(const LoadedSpec& spec, const Direction& d,
                           const std::string& label, bool corrupt, double gate) {
  VerifyRow row;
  row.label = label;
  row.mu = d.mu;
  if (spec.time_varying) {
    row.closed = tv_multi(*spec.time_varying, d, spec.constraints).gamma_star;
    row.bisect = bisect_max_sinr(expand(*spec.time_varying, d), spec.constraints);
  } else {
    row.closed =
        multi_constrained_max_sinr(spec.channel, d, spec.constraints).gamma_star;
    row.bisect = bisect_max_sinr(spec.channel, d, spec.constraints);
  }
  if (corrupt) row.closed *= 1.001;

  if (std::isinf(row.closed) && std::isinf(row.bisect)) {
    row.abs_gap = 0.0;
    row.rel_gap = 0.0;
  } else if (std::isinf(row.closed) || std::isinf(row.bisect)) {
    row.abs_gap = std::numeric_limits<double>::infinity();
    row.rel_gap = std::numeric_limits<double>::infinity();
  } else {
    row.abs_gap = std::abs(row.closed - row.bisect);
    row.rel_gap = row.abs_gap / row.bisect;
  }
  row.pass = row.rel_gap <= gate;
  return row;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const LoadedSpec spec = load_channel_spec(cfg.input_path);
  const int n = spec.time_varying ? spec.time_varying->user_count() : spec.channel.n;

  double gate = Tolerances{}.verify_rel_gap;
  if (const char* env = std::getenv("SINR_REGION_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || !(v > 0.0))
      throw ValidationError("SINR_REGION_TOL: expected a positive number");
    gate = v;
  }
  if (cfg.tol_override >= 0.0) gate = cfg.tol_override;

  std::vector<std::pair<std::string, Direction>> dirs;
  dirs.emplace_back("given", resolve_mu(cfg, n));
  if (cfg.has_seed) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> exponent(-1.0, 1.0);
    for (int k = 1; k <= 8; ++k) {
      Vector mu(n);
      for (int i = 0; i < n; ++i) mu(i) = std::pow(10.0, exponent(rng));
      dirs.emplace_back("r" + std::to_string(k), Direction{mu});
    }
  }

  std::vector<VerifyRow> rows;
  for (const auto& [label, d] : dirs)
    rows.push_back(verify_direction(spec, d, label, cfg.corrupt_gamma, gate));
  const bool all_pass =
      std::all_of(rows.begin(), rows.end(), [](const VerifyRow& r) { return r.pass; });

  Sink sink(cfg.output_path, out);
  std::ostream& os = sink.stream();
  const std::string format = cfg.format.empty() ? "csv" : cfg.format;
  if (format == "csv") {
    os << "direction,mu,closed,bisect,abs_gap,rel_gap,status\n";
    for (const auto& r : rows) {
      std::string mu_text;
      for (Index i = 0; i < r.mu.size(); ++i) {
        if (i) mu_text += "|";
        mu_text += fmt_num(r.mu(i));
      }
      os << r.label << "," << csv_field(mu_text) << "," << fmt_num(r.closed) << ","
         << fmt_num(r.bisect) << "," << fmt_num(r.abs_gap) << "," << fmt_num(r.rel_gap)
         << "," << (r.pass ? "pass" : "FAIL") << "\n";
    }
  } else {
    os << "{\"results\": [\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      os << "  {\"direction\": " << json_str(r.label) << ", \"mu\": " << json_vec(r.mu)
         << ", \"closed\": " << json_num(r.closed) << ", \"bisect\": " << json_num(r.bisect)
         << ", \"abs_gap\": " << json_num(r.abs_gap) << ", \"rel_gap\": " << json_num(r.rel_gap)
         << ", \"pass\": " << (r.pass ? "true" : "false") << "}"
         << (i + 1 < rows.size() ? ",\n" : "\n");
    }
    os << "], \"pass\": " << (all_pass ? "true" : "false") << "}\n";
  }
  if (!all_pass) {
    err << "verify: relative gap exceeds " << fmt_num(gate) << "\n";
    return kExitUnbounded;
  }
  return kExitOk;
}

}  // namespace

std::string fmt_num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

int run_config(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "solve") return cmd_solve(cfg, out, err);
    if (cfg.command == "sweep") return cmd_sweep(cfg, out, err);
    if (cfg.command == "tv-solve") return cmd_tv_solve(cfg, out, err);
    if (cfg.command == "verify") return cmd_verify(cfg, out, err);
    err << "error: unknown command '" << cfg.command << "'\n";
    return kExitError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Exact balanced-SINR and rate-region solver for power-constrained "
               "Gaussian interference channels"};
  app.require_subcommand(1);

  auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("--input", cfg.input_path, "channel spec file (JSON)")->required();
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output", cfg.output_path, "output file (default stdout)");
  };
  auto add_mu = [&cfg](CLI::App* sub) {
    sub->add_option("--mu", cfg.mu, "direction weights v1,v2,...")->delimiter(',');
    sub->add_option("--mu-file", cfg.mu_file, "file with direction weights");
  };

  CLI::App* solve = app.add_subcommand("solve", "max balanced SINR for one direction");
  add_common(solve);
  add_mu(solve);
  CLI::App* sweep = app.add_subcommand("sweep", "trace the region boundary");
  add_common(sweep);
  sweep->add_option("--points", cfg.points, "sample count for 2-user angle sweeps");
  sweep->add_flag("--per-constraint", cfg.per_constraint,
                  "emit one curve per constraint plus the combined minimum");
  sweep->add_option("--directions", cfg.directions_file,
                    "file of explicit directions, one per line");
  CLI::App* tv = app.add_subcommand("tv-solve", "time-varying (states) solve");
  add_common(tv);
  add_mu(tv);
  CLI::App* verify =
      app.add_subcommand("verify", "cross-check closed form against bisection");
  add_common(verify);
  add_mu(verify);
  verify->add_option("--seed", cfg.seed, "also check 8 seeded random directions")
      ->each([&cfg](const std::string&) { cfg.has_seed = true; });
  verify->add_option("--tol", cfg.tol_override,
                     "relative gap gate (overrides SINR_REGION_TOL)");
  verify->add_flag("--corrupt-gamma", cfg.corrupt_gamma)->group("");  // negative control

  std::vector<const char*> argv;
  argv.push_back("sinr-region");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return run_config(cfg, out, err);
}

}  // namespace sinr::cli
