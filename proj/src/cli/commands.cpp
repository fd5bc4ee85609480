#include "rpolar/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "rpolar/branches.hpp"
#include "rpolar/energy.hpp"
#include "rpolar/error.hpp"
#include "rpolar/relax.hpp"
#include "rpolar/report_json.hpp"
#include "rpolar/sampling.hpp"

namespace rpolar::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_real(std::string_view token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v))
    throw UsageError("not a finite real number: '" + std::string(token) + "'");
  return v;
}

// Splits every token on commas and whitespace and parses the pieces.
std::vector<double> parse_reals(const std::vector<std::string>& tokens) {
  std::vector<double> out;
  for (const std::string& token : tokens) {
    std::string piece;
    for (char ch : token + ' ') {
      if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
        if (!piece.empty()) out.push_back(parse_real(piece));
        piece.clear();
      } else {
        piece += ch;
      }
    }
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

unsigned default_workers() {
  if (const char* env = std::getenv("RELAXED_POLAR_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct Output {
  std::string path;
  bool timing = false;
};

void emit(std::ostream& out, const Output& o, const std::string& text) {
  if (o.path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.path, std::ios::binary);
  if (!file) throw UsageError("cannot open output file '" + o.path + "'");
  file << text;
}

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string row;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) row += ',';
    row += c;
    first = false;
  }
  return row + '\n';
}

std::string num(double v) { return format_number(v); }

using Clock = std::chrono::steady_clock;

std::string envelope_text(const std::vector<std::string>& args, std::optional<std::uint64_t> seed, json payload,
                          const Output& o, Clock::time_point start) {
  ResultEnvelope env;
  env.command = args;
  env.seed = seed;
  env.payload = std::move(payload);
  if (o.timing) env.timing_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return env.to_json().dump(2) + '\n';
}

// relax ---------------------------------------------------------------------

struct RelaxOptions {
  std::vector<std::string> F;
  std::vector<std::string> sigma;
  double mu = 1.0;
  double muc = 0.0;
  std::string format = "json";
};

Mat3 matrix_from_tokens(const std::vector<std::string>& tokens) {
  if (tokens.size() == 1 && (tokens[0] == "identity" || tokens[0] == "I")) return Mat3::identity();
  const std::vector<double> v = parse_reals(tokens);
  if (v.size() != 9) throw UsageError("--F expects nine reals (row-major), got " + std::to_string(v.size()));
  Mat3 m;
  std::copy(v.begin(), v.end(), m.a.begin());
  return m;
}

Vec3 sigma_from_tokens(const std::vector<std::string>& tokens) {
  const std::vector<double> v = parse_reals(tokens);
  if (v.size() != 3) throw UsageError("--sigma expects three reals, got " + std::to_string(v.size()));
  return {v[0], v[1], v[2]};
}

std::string run_relax(const RelaxOptions& o, const std::vector<std::string>& args, const Output& out_opts) {
  const auto start = Clock::now();
  if (o.F.empty() == o.sigma.empty()) throw UsageError("relax needs exactly one of --F or --sigma");
  const MaterialParams p(o.mu, o.muc);
  Mat3 F;
  if (!o.F.empty()) {
    F = matrix_from_tokens(o.F);
  } else {
    const Vec3 s = sigma_from_tokens(o.sigma);
    require_positive_sigma(s);
    F = Mat3::diag(s);
  }
  const RelaxedRotations r = relaxed_polar(F, p);

  if (o.format == "csv") {
    const AxisAngle ap = axis_angle(transpose_times(r.decomposition.Rp, r.r_plus));
    const Vec3& s = r.decomposition.sigma;
    const auto rho = p.rho();
    std::string text = csv_row({"sigma1", "sigma2", "sigma3", "mu", "muc", "rho", "domain", "beta_plus", "beta_minus",
                                "axis_x", "axis_y", "axis_z", "u_mmp", "reduced_energy", "el_residual_plus",
                                "el_residual_minus"});
    text += csv_row({num(s[0]), num(s[1]), num(s[2]), num(p.mu()), num(p.muc()), rho ? num(*rho) : "inf",
                     std::string(to_string(r.domain_tag)), num(r.coincide ? 0.0 : ap.angle),
                     num(r.coincide ? 0.0 : 0.0 - ap.angle), num(r.axis[0]), num(r.axis[1]), num(r.axis[2]),
                     num(0.5 * (s[0] + s[1])), num(r.reduced_energy), num(r.el_residual_plus),
                     num(r.el_residual_minus)});
    return text;
  }
  return envelope_text(args, std::nullopt, to_json(r, p), out_opts, start);
}

// branches ------------------------------------------------------------------

struct BranchOptions {
  std::vector<std::string> sigma;
  bool limit_case = true;
  std::string format = "json";
};

std::string run_branches(const BranchOptions& o, const std::vector<std::string>& args, const Output& out_opts) {
  const auto start = Clock::now();
  const Vec3 sigma = sigma_from_tokens(o.sigma);
  require_positive_sigma(sigma);
  if (sigma[0] < sigma[1] || sigma[1] < sigma[2])
    throw Error(ErrorCode::InvalidArgument, "singular values must be in descending order; sort them first (e.g. " +
                                                num(std::max({sigma[0], sigma[1], sigma[2]})) + " first)");
  const std::vector<CriticalBranch> catalog = enumerate_branches(sigma);
  const MinimalSelection best = minimal_branch(sigma);
  const MaterialParams limit = MaterialParams::limit_case();

  auto is_minimal = [&](const CriticalBranch& b) {
    return std::any_of(best.branches.begin(), best.branches.end(), [&](const CriticalBranch& m) { return m.id() == b.id(); });
  };

  struct Row {
    const CriticalBranch* b;
    double direct = 0.0;
    double residual = 0.0;
    std::string kind;
  };
  std::vector<Row> rows;
  for (const CriticalBranch& b : catalog) {
    Row row{&b, 0.0, 0.0, {}};
    if (b.defined) {
      row.direct = lifted_energy(b.quaternion, sigma, limit);
      row.residual = verify_branch(b, sigma);
      row.kind = std::string(to_string(classify_branch(b, sigma)));
    }
    rows.push_back(row);
  }

  if (o.format == "csv") {
    std::string text = csv_row({"id", "defined", "domain_condition", "w", "x", "y", "z", "multiplier",
                                "closed_form_energy", "direct_energy", "residual", "classification", "minimal"});
    for (const Row& row : rows) {
      const CriticalBranch& b = *row.b;
      if (!b.defined) {
        text += csv_row({b.id(), "false", b.domain_condition, "", "", "", "", "", "", "", "", "", "false"});
        continue;
      }
      text += csv_row({b.id(), "true", b.domain_condition, num(b.quaternion.w), num(b.quaternion.x),
                       num(b.quaternion.y), num(b.quaternion.z), num(b.multiplier), num(b.closed_form_energy),
                       num(row.direct), num(row.residual), row.kind, is_minimal(b) ? "true" : "false"});
    }
    return text;
  }

  json table = json::array();
  for (const Row& row : rows) {
    const CriticalBranch& b = *row.b;
    json entry{{"id", b.id()}, {"defined", b.defined}, {"domain_condition", b.domain_condition}};
    if (b.defined) {
      entry["quaternion"] = to_json(b.quaternion);
      entry["multiplier"] = b.multiplier;
      entry["closed_form_energy"] = b.closed_form_energy;
      entry["direct_energy"] = row.direct;
      entry["residual"] = row.residual;
      entry["classification"] = row.kind;
    } else {
      entry["quaternion"] = nullptr;
    }
    entry["minimal"] = is_minimal(b);
    table.push_back(std::move(entry));
  }
  json minimal_ids = json::array();
  for (const CriticalBranch& b : best.branches) minimal_ids.push_back(b.id());
  json payload{{"sigma", to_json(sigma)},
               {"params", to_json(limit)},
               {"branches", std::move(table)},
               {"minimal", {{"ids", std::move(minimal_ids)}, {"energy", best.energy}}}};
  return envelope_text(args, std::nullopt, std::move(payload), out_opts, start);
}

// validate ------------------------------------------------------------------

struct ValidateOptions {
  double mu = 1.0;
  double muc = 0.0;
  int cases = 200;
  long samples = 100'000;
  std::uint64_t seed = 42;
  double tol = 1e-4;
  bool paper_scale = false;
  bool shared = false;
  double angle = 0.2;
  int threads = 0;
};

std::string run_validate(const ValidateOptions& o, const std::vector<std::string>& args, const Output& out_opts,
                         bool& failed) {
  const auto start = Clock::now();
  if (o.cases < 1 || o.samples < 1) throw UsageError("--cases-per-domain and --samples must be at least 1");
  ValidationConfig cfg;
  cfg.mu = o.mu;
  cfg.muc = o.muc;
  cfg.n_classical = o.cases;
  cfg.n_nonclassical = o.cases;
  cfg.n_samples = o.samples;
  cfg.seed = o.seed;
  cfg.tol = o.tol;
  cfg.shared_samples = o.shared;
  cfg.angle_threshold = o.angle;
  if (o.paper_scale) cfg = paper_scale(cfg);
  cfg.workers = o.threads > 0 ? static_cast<unsigned>(o.threads) : default_workers();
  const ValidationReport report = run_validation(cfg);
  failed = report.aggregates.failures > 0;
  return envelope_text(args, cfg.seed, to_json(report), out_opts, start);
}

// sweep ---------------------------------------------------------------------

struct SweepOptions {
  double mu = 1.0;
  double muc = 0.0;
  std::string s12 = "1:8:141";
  double sigma3 = 0.1;
  double delta = 0.1;
  std::string format = "csv";
};

std::string run_sweep(const SweepOptions& o, const std::vector<std::string>& args, const Output& out_opts) {
  const auto start = Clock::now();
  const auto parts = split(o.s12, ':');
  if (parts.size() != 3) throw UsageError("--s12 expects min:max:steps");
  const double lo = parse_real(parts[0]);
  const double hi = parse_real(parts[1]);
  const double steps_real = parse_real(parts[2]);
  const long steps = static_cast<long>(steps_real);
  if (steps < 2 || static_cast<double>(steps) != steps_real) throw UsageError("--s12 steps must be an integer >= 2");
  if (!(hi > lo)) throw UsageError("--s12 needs min < max");
  if (!(o.delta > 0.0)) throw UsageError("--delta must be positive");
  if (!(o.sigma3 > 0.0)) throw UsageError("--sigma3 must be positive");
  if (!(0.5 * lo - o.delta > o.sigma3))
    throw UsageError("sigma2 = s12/2 - delta must exceed --sigma3 over the whole range");
  const MaterialParams p(o.mu, o.muc);

  struct Row {
    double s12, beta, wred;
    DomainTag tag;
  };
  std::vector<Row> rows;
  for (long i = 0; i < steps; ++i) {
    const double s12 = i + 1 == steps ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
    const Vec3 sigma{0.5 * s12 + o.delta, 0.5 * s12 - o.delta, o.sigma3};
    rows.push_back({s12, optimal_relative_angle_sigma(sigma, p), reduced_energy_sigma(sigma, p), classify_sigma(sigma, p)});
  }

  if (o.format == "json") {
    json table = json::array();
    for (const Row& r : rows)
      table.push_back({{"s12", r.s12},
                       {"beta_plus", r.beta},
                       {"beta_minus", 0.0 - r.beta},
                       {"W_red", r.wred},
                       {"domain", std::string(to_string(r.tag))}});
    json payload{{"params", to_json(p)}, {"sigma3", o.sigma3}, {"delta", o.delta}, {"rows", std::move(table)}};
    return envelope_text(args, std::nullopt, std::move(payload), out_opts, start);
  }
  std::string text = csv_row({"s12", "beta_plus", "beta_minus", "W_red", "domain"});
  for (const Row& r : rows)
    text += csv_row({num(r.s12), num(r.beta), num(0.0 - r.beta), num(r.wred), std::string(to_string(r.tag))});
  return text;
}

// isosurface ----------------------------------------------------------------

struct IsoOptions {
  std::string levels = "0.1,0.4,0.8";
  int grid = 21;
  std::string range = "0.1:3";
};

std::string run_isosurface(const IsoOptions& o) {
  std::vector<double> levels;
  for (const std::string& s : split(o.levels, ',')) levels.push_back(parse_real(s));
  std::sort(levels.begin(), levels.end());
  const auto parts = split(o.range, ':');
  if (parts.size() != 2) throw UsageError("--range expects lo:hi");
  const double lo = parse_real(parts[0]);
  const double hi = parse_real(parts[1]);
  if (!(lo > 0.0) || !(hi > lo)) throw UsageError("--range needs 0 < lo < hi");
  if (o.grid < 2) throw UsageError("--grid must be at least 2");

  const MaterialParams limit = MaterialParams::limit_case();
  std::vector<double> axis(static_cast<std::size_t>(o.grid));
  for (int i = 0; i < o.grid; ++i)
    axis[static_cast<std::size_t>(i)] = i + 1 == o.grid ? hi : lo + (hi - lo) * i / static_cast<double>(o.grid - 1);

  std::string text = csv_row({"sigma1", "sigma2", "sigma3", "W_red", "level_index"});
  for (double a : axis)
    for (double b : axis)
      for (double c : axis) {
        const double w = reduced_energy_sigma({a, b, c}, limit);
        // Number of contour levels at or below this value.
        const auto band = std::upper_bound(levels.begin(), levels.end(), w) - levels.begin();
        text += csv_row({num(a), num(b), num(c), num(w), std::to_string(band)});
      }
  return text;
}

int exit_code_for(ErrorCode code) {
  return code == ErrorCode::InvalidArgument ? kExitUsage : kExitDomain;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energy-minimizing rotations of the Cosserat shear-stretch energy", "rpolar"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Output out_opts;
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", out_opts.path, "Write the result to this file instead of standard output");
    sub->add_flag("--timing", out_opts.timing, "Add wall-clock timing to the JSON envelope");
  };

  RelaxOptions relax;
  CLI::App* relax_cmd = app.add_subcommand("relax", "Relaxed polar factors of one deformation gradient");
  relax_cmd->add_option("--F", relax.F, "Nine reals, row-major, whitespace or comma separated, or 'identity'")
      ->expected(1, 9);
  relax_cmd->add_option("--sigma", relax.sigma, "Three singular values; F = diag(sigma)")->expected(1, 3);
  relax_cmd->add_option("--mu", relax.mu, "Shear modulus mu > 0")->capture_default_str();
  relax_cmd->add_option("--muc", relax.muc, "Cosserat couple modulus muc >= 0")->capture_default_str();
  relax_cmd->add_option("--format", relax.format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  add_output(relax_cmd);

  BranchOptions branches;
  CLI::App* branch_cmd = app.add_subcommand("branches", "Critical-point catalog for (mu, muc) = (1, 0)");
  branch_cmd->add_option("--sigma", branches.sigma, "Strictly descending singular values")->expected(1, 3)->required();
  branch_cmd->add_flag("--mu-limit-case", branches.limit_case, "Catalog weights (1, 0); always in effect");
  branch_cmd->add_option("--format", branches.format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  add_output(branch_cmd);

  ValidateOptions validate;
  CLI::App* validate_cmd = app.add_subcommand("validate", "Monte Carlo check of global optimality");
  validate_cmd->add_option("--mu", validate.mu)->capture_default_str();
  validate_cmd->add_option("--muc", validate.muc)->capture_default_str();
  validate_cmd->add_option("--cases-per-domain", validate.cases)->capture_default_str();
  validate_cmd->add_option("--samples", validate.samples, "Haar rotations per case")->capture_default_str();
  validate_cmd->add_option("--seed", validate.seed)->capture_default_str();
  validate_cmd->add_option("--tol", validate.tol, "Frobenius tolerance (enforced with --paper-scale)")
      ->capture_default_str();
  validate_cmd->add_option("--angle-threshold", validate.angle, "Geodesic-angle diagnostic threshold (rad)")
      ->capture_default_str();
  validate_cmd->add_flag("--paper-scale", validate.paper_scale,
                         "4629171 samples, 1000 cases per domain, Frobenius tolerance enforced");
  validate_cmd->add_flag("--shared-samples", validate.shared, "Use one quaternion set for all cases");
  validate_cmd->add_option("--threads", validate.threads,
                           "Worker threads (default: RELAXED_POLAR_THREADS or hardware concurrency)");
  add_output(validate_cmd);

  SweepOptions sweep;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Bifurcation diagram: beta and W_red along sigma1 + sigma2");
  sweep_cmd->add_option("--mu", sweep.mu)->capture_default_str();
  sweep_cmd->add_option("--muc", sweep.muc)->capture_default_str();
  sweep_cmd->add_option("--s12", sweep.s12, "min:max:steps (inclusive)")->capture_default_str();
  sweep_cmd->add_option("--sigma3", sweep.sigma3)->capture_default_str();
  sweep_cmd->add_option("--delta", sweep.delta, "sigma1 = s12/2 + delta, sigma2 = s12/2 - delta")
      ->capture_default_str();
  sweep_cmd->add_option("--format", sweep.format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  add_output(sweep_cmd);

  IsoOptions iso;
  CLI::App* iso_cmd = app.add_subcommand("isosurface", "W_red for (mu, muc) = (1, 0) on a sigma grid, as CSV");
  iso_cmd->add_option("--levels", iso.levels, "Comma-separated contour levels")->capture_default_str();
  iso_cmd->add_option("--grid", iso.grid, "Points per axis")->capture_default_str();
  iso_cmd->add_option("--range", iso.range, "lo:hi, positive")->capture_default_str();
  add_output(iso_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    bool failed = false;
    std::string text;
    if (relax_cmd->parsed()) {
      text = run_relax(relax, args, out_opts);
    } else if (branch_cmd->parsed()) {
      text = run_branches(branches, args, out_opts);
    } else if (validate_cmd->parsed()) {
      text = run_validate(validate, args, out_opts, failed);
    } else if (sweep_cmd->parsed()) {
      text = run_sweep(sweep, args, out_opts);
    } else {
      text = run_isosurface(iso);
    }
    emit(out, out_opts, text);
    if (failed) {
      err << "rpolar: validation reported failing cases\n";
      return kExitValidationFailed;
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "rpolar: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "rpolar: " << e.what() << '\n';
    // Ordering and degeneracy of sigma are precondition failures, not usage.
    if (e.code() == ErrorCode::InvalidArgument && branch_cmd->parsed()) return kExitDomain;
    return exit_code_for(e.code());
  }
}

}  // namespace rpolar::cli
