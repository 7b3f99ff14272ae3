// auctionlab -- batch front-end for the call-auction analytics library.
//
// Subcommands produce plain data tables (CSV or JSON) for the executed
// volume law, the clearing price bound densities, the clearing range
// density, the self-validation suite, and exponential spread fits. Every
// command is deterministic given its flags and seed, and every output
// starts with a metadata header recording parameters, tolerances, seed and
// version, so tables can be regenerated and diffed byte for byte.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "auctionlab/asymptotic.hpp"
#include "auctionlab/exact.hpp"
#include "auctionlab/montecarlo.hpp"
#include "auctionlab/params.hpp"
#include "auctionlab/price_dist.hpp"
#include "auctionlab/quadrature.hpp"
#include "auctionlab/special.hpp"
#include "auctionlab/validation.hpp"
#include "auctionlab/version.hpp"

namespace {

using namespace auctionlab;

// ---------------------------------------------------------------------------
// Formatting: locale-independent, shortest round-trip.

std::string fmt_double(double v) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

std::string fmt_int(long long v) { return std::to_string(v); }

// ---------------------------------------------------------------------------
// Output tables.

struct TableColumn {
  std::string name;
  bool integral = false;
};

struct Table {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<TableColumn> columns;
  std::vector<std::vector<double>> rows;

  void add_meta(std::string key, std::string value) {
    meta.emplace_back(std::move(key), std::move(value));
  }
};

void write_csv(std::ostream& os, const Table& t) {
  for (const auto& [k, v] : t.meta) os << "# " << k << "=" << v << "\n";
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c) os << ",";
    os << t.columns[c].name;
  }
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ",";
      os << (t.columns[c].integral ? fmt_int(static_cast<long long>(row[c]))
                                   : fmt_double(row[c]));
    }
    os << "\n";
  }
}

void write_json(std::ostream& os, const Table& t) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.meta) meta[k] = v;
  j["meta"] = meta;
  nlohmann::ordered_json cols = nlohmann::ordered_json::array();
  for (const auto& c : t.columns) cols.push_back(c.name);
  j["columns"] = cols;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (t.columns[c].integral) {
        r.push_back(static_cast<long long>(row[c]));
      } else {
        r.push_back(row[c]);
      }
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  os << j.dump() << "\n";
}

// ---------------------------------------------------------------------------
// Shared options.

struct CliOptions {
  double lambda = 10.0;
  std::string alpha_spec = "0.5";
  double horizon = 1.0;
  double theta_ask = 0.0;
  double theta_bid = 0.0;
  std::string dist_spec = "uniform:0,1";
  std::string grid_spec;             // lo:hi:n, empty -> per-command default
  int k_max = -1;                    // volume truncation, -1 -> automatic
  double tol = -1.0;                 // -1 -> per-command default
  long long reps = 0;                // sampling overlay budget (volume only)
  std::uint64_t seed = 20240901;
  std::string format = "csv";
  std::string out_path;              // empty -> standard output
  bool extended = false;             // validate: include the slowest checks
  int workers = 0;                   // validate: run_batch worker count
  std::string input_path;            // fit-spread: CSV of spread samples
};

struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  int n = 0;
};

double parse_double_token(std::string_view tok, const char* what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw std::invalid_argument(std::string(what) + ": bad number '" + std::string(tok) + "'");
  }
  return v;
}

GridSpec parse_grid(const std::string& spec) {
  GridSpec g;
  std::string_view s(spec);
  auto c1 = s.find(':');
  auto c2 = c1 == std::string_view::npos ? std::string_view::npos : s.find(':', c1 + 1);
  if (c1 == std::string_view::npos || c2 == std::string_view::npos ||
      s.find(':', c2 + 1) != std::string_view::npos) {
    throw std::invalid_argument("--grid: expected lo:hi:n, got '" + spec + "'");
  }
  g.lo = parse_double_token(s.substr(0, c1), "--grid lo");
  g.hi = parse_double_token(s.substr(c1 + 1, c2 - c1 - 1), "--grid hi");
  double n = parse_double_token(s.substr(c2 + 1), "--grid n");
  if (n != std::floor(n) || n < 2.0 || n > 1e7) {
    throw std::invalid_argument("--grid: point count must be an integer >= 2");
  }
  if (!(g.hi > g.lo)) throw std::invalid_argument("--grid: need hi > lo");
  g.n = static_cast<int>(n);
  return g;
}

std::vector<double> parse_alpha_list(const std::string& spec) {
  std::vector<double> out;
  std::string_view s(spec);
  while (!s.empty()) {
    auto comma = s.find(',');
    auto tok = s.substr(0, comma);
    out.push_back(parse_double_token(tok, "--alpha"));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
    if (s.empty()) throw std::invalid_argument("--alpha: trailing comma");
  }
  if (out.empty()) throw std::invalid_argument("--alpha: empty list");
  return out;
}

AuctionParams base_params(const CliOptions& opt, double alpha) {
  AuctionParams p;
  p.lambda_total = opt.lambda;
  p.alpha = alpha;
  p.horizon = opt.horizon;
  p.theta_ask = opt.theta_ask;
  p.theta_bid = opt.theta_bid;
  p.validate();
  return p;
}

double single_alpha(const CliOptions& opt, const char* cmd) {
  auto alphas = parse_alpha_list(opt.alpha_spec);
  if (alphas.size() != 1) {
    throw std::invalid_argument(std::string(cmd) + ": exactly one --alpha value expected");
  }
  return alphas.front();
}

void add_param_meta(Table& t, const CliOptions& opt, const AuctionParams& p) {
  t.add_meta("version", kVersion);
  t.add_meta("lambda", fmt_double(p.lambda_total));
  t.add_meta("alpha", opt.alpha_spec);
  t.add_meta("T", fmt_double(p.horizon));
  t.add_meta("theta_ask", fmt_double(p.theta_ask));
  t.add_meta("theta_bid", fmt_double(p.theta_bid));
}

void emit(const Table& t, const CliOptions& opt) {
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!opt.out_path.empty()) {
    file.open(opt.out_path, std::ios::binary);
    if (!file) throw std::invalid_argument("--out: cannot open '" + opt.out_path + "'");
    os = &file;
  }
  if (opt.format == "json") {
    write_json(*os, t);
  } else {
    write_csv(*os, t);
  }
  os->flush();
  if (!*os) throw std::runtime_error("output write failed");
}

void emit_raw(const std::string& text, const CliOptions& opt) {
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!opt.out_path.empty()) {
    file.open(opt.out_path, std::ios::binary);
    if (!file) throw std::invalid_argument("--out: cannot open '" + opt.out_path + "'");
    os = &file;
  }
  *os << text;
  os->flush();
  if (!*os) throw std::runtime_error("output write failed");
}

// ---------------------------------------------------------------------------
// volume: executed-volume pmf table.

int run_volume(const CliOptions& opt) {
  auto alphas = parse_alpha_list(opt.alpha_spec);
  double tol = opt.tol > 0.0 ? opt.tol : 1e-12;

  // The exact laws take the decay-adjusted parameters; the asymptotic and
  // sampling paths do their own adjustment internally.
  std::vector<AuctionParams> raw;
  std::vector<AuctionParams> folded;
  for (double a : alphas) {
    raw.push_back(base_params(opt, a));
    folded.push_back(fold_cancellation(raw.back()));
  }
  double mu_max = 0.0;
  for (const auto& p : folded) mu_max = std::max(mu_max, p.mu());
  int k_max = opt.k_max >= 0 ? opt.k_max : default_volume_k_max(mu_max);

  Table t;
  t.add_meta("command", "volume");
  add_param_meta(t, opt, raw.front());
  t.add_meta("k_max", fmt_int(k_max));
  t.add_meta("tol", fmt_double(tol));

  if (alphas.size() == 1) {
    DiscretePmf pmf = volume_pmf_table(folded[0], k_max, tol);
    NormalLaw law = asymptotic_volume(raw[0]);
    t.add_meta("tail_bound", fmt_double(pmf.tail_bound));
    t.columns = {{"k", true},
                 {"exact_pmf", false},
                 {"exact_pmf_hyp", false},
                 {"asymptotic_density", false},
                 {"tail_bound", false}};

    std::optional<SampleSummary> mc;
    if (opt.reps > 0) {
      mc = run_batch(raw[0], *parse_distribution(opt.dist_spec), opt.reps, opt.seed);
      t.add_meta("reps", fmt_int(opt.reps));
      t.add_meta("seed", fmt_int(static_cast<long long>(opt.seed)));
      t.columns.push_back({"mc_freq", false});
    }

    // tail_bound(k) bounds P(V > k): the in-table mass above k plus the
    // certified bound on everything past k_max, clamped at the trivial bound 1
    // (a short table could otherwise push the sum past it).
    std::vector<double> above(static_cast<std::size_t>(k_max) + 1, 0.0);
    double acc = pmf.tail_bound;
    for (int k = k_max; k >= 0; --k) {
      above[static_cast<std::size_t>(k)] = std::min(1.0, acc);
      acc += pmf.mass(k);
    }
    for (int k = 0; k <= k_max; ++k) {
      std::vector<double> row{static_cast<double>(k), pmf.mass(k),
                              volume_pmf_hyp(folded[0], k, tol).value, law.pdf(k),
                              above[static_cast<std::size_t>(k)]};
      if (mc) {
        auto it = mc->volume_counts.find(k);
        double c = it == mc->volume_counts.end() ? 0.0 : static_cast<double>(it->second);
        row.push_back(c / static_cast<double>(mc->n_reps));
      }
      t.rows.push_back(std::move(row));
    }
  } else {
    if (opt.reps > 0) {
      throw std::invalid_argument("volume: --reps requires a single --alpha value");
    }
    t.columns.push_back({"k", true});
    std::vector<DiscretePmf> pmfs;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      pmfs.push_back(volume_pmf_table(folded[i], k_max, tol));
      std::string tag = fmt_double(alphas[i]);
      t.columns.push_back({"exact_pmf_a" + tag, false});
      t.add_meta("tail_bound_a" + tag, fmt_double(pmfs.back().tail_bound));
    }
    for (int k = 0; k <= k_max; ++k) {
      std::vector<double> row{static_cast<double>(k)};
      for (const auto& pmf : pmfs) row.push_back(pmf.mass(k));
      t.rows.push_back(std::move(row));
    }
  }
  emit(t, opt);
  return 0;
}

// ---------------------------------------------------------------------------
// prices: lower/upper clearing price bound densities on a grid.

int run_prices(const CliOptions& opt) {
  double alpha = single_alpha(opt, "prices");
  AuctionParams raw = base_params(opt, alpha);
  AuctionParams eff = fold_cancellation(raw);
  PriceDistPtr dist = parse_distribution(opt.dist_spec);
  double tol = opt.tol > 0.0 ? opt.tol : 1e-9;

  GridSpec g;
  if (!opt.grid_spec.empty()) {
    g = parse_grid(opt.grid_spec);
  } else {
    auto [lo, hi] = dist->support();
    g = {lo, hi, 512};
  }
  std::vector<double> grid = linspace(g.lo, g.hi, g.n);
  DensityCurve lower = tabulate_lower_price_density(eff, *dist, grid, tol);
  DensityCurve upper = tabulate_upper_price_density(eff, *dist, grid, tol);

  double err_l = 0.0;
  double err_u = 0.0;
  for (double e : lower.error_bound) err_l = std::max(err_l, e);
  for (double e : upper.error_bound) err_u = std::max(err_u, e);

  Table t;
  t.add_meta("command", "prices");
  add_param_meta(t, opt, raw);
  t.add_meta("dist", dist->spec());
  t.add_meta("grid", fmt_double(g.lo) + ":" + fmt_double(g.hi) + ":" + fmt_int(g.n));
  t.add_meta("tol", fmt_double(tol));
  t.add_meta("max_error_bound_f_L", fmt_double(err_l));
  t.add_meta("max_error_bound_f_U", fmt_double(err_u));
  t.add_meta("conditioning", "both book sides nonempty");
  t.columns = {{"x", false}, {"f_L", false}, {"f_U", false}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    t.rows.push_back({grid[i], lower.density[i], upper.density[i]});
  }
  emit(t, opt);
  return 0;
}

// ---------------------------------------------------------------------------
// range: clearing range density on a grid.

int run_range(const CliOptions& opt) {
  double alpha = single_alpha(opt, "range");
  AuctionParams raw = base_params(opt, alpha);
  AuctionParams eff = fold_cancellation(raw);
  PriceDistPtr dist = parse_distribution(opt.dist_spec);
  bool uniform = dist->spec().rfind("uniform:", 0) == 0;
  double tol = opt.tol > 0.0 ? opt.tol : 1e-6;

  ExponentialLaw law = asymptotic_range(raw, *dist);
  GridSpec g;
  if (!opt.grid_spec.empty()) {
    g = parse_grid(opt.grid_spec);
  } else {
    auto [lo, hi] = dist->support();
    double width = hi - lo;
    g = {0.0, std::min(width, 14.0 / law.rate), 256};
  }

  Table t;
  t.add_meta("command", "range");
  add_param_meta(t, opt, raw);
  t.add_meta("dist", dist->spec());
  t.add_meta("grid", fmt_double(g.lo) + ":" + fmt_double(g.hi) + ":" + fmt_int(g.n));
  t.add_meta("tol", fmt_double(tol));
  t.add_meta("method", uniform ? "closed_uniform" : "general_mixture");
  t.add_meta("asymptotic_rate", fmt_double(law.rate));
  t.add_meta("conditioning", "both book sides nonempty");
  t.columns = {{"delta", false}, {"f_R", false}, {"asymptotic_density", false}};

  double max_err = 0.0;
  auto [lo_s, hi_s] = dist->support();
  for (double d : linspace(g.lo, g.hi, g.n)) {
    double fr = 0.0;
    if (uniform) {
      fr = range_density_uniform(eff, lo_s, hi_s, d);
    } else {
      SeriesResult r = range_density_general(eff, *dist, d, tol);
      fr = r.value;
      max_err = std::max(max_err, r.abs_error_bound);
    }
    t.rows.push_back({d, fr, law.pdf(d)});
  }
  if (!uniform) t.add_meta("max_error_bound", fmt_double(max_err));
  emit(t, opt);
  return 0;
}

// ---------------------------------------------------------------------------
// validate: deterministic self-check suite, JSON report.

int run_validate(const CliOptions& opt) {
  ValidationConfig cfg;
  cfg.seed = opt.seed;
  cfg.workers = opt.workers;
  cfg.extended = opt.extended;
  auto checks = run_validation_suite(cfg);
  emit_raw(validation_report_json(checks, cfg), opt);
  bool all_pass = std::all_of(checks.begin(), checks.end(),
                              [](const CheckResult& c) { return c.pass; });
  return all_pass ? 0 : 4;
}

// ---------------------------------------------------------------------------
// fit-spread: exponential MLE on a CSV of positive spread samples.

std::vector<double> read_spread_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("fit-spread: cannot open '" + path + "'");
  std::vector<double> out;
  std::string line;
  long long line_no = 0;
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
      s.remove_suffix(1);
    }
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    return s;
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view tok = trim(line);
    if (tok.empty()) continue;
    if (line_no == 1) {
      std::string low(tok);
      std::transform(low.begin(), low.end(), low.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      if (low == "spread") continue;
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v) || v <= 0.0) {
      throw std::invalid_argument("fit-spread: line " + std::to_string(line_no) +
                                  ": expected one positive value, got '" + std::string(tok) +
                                  "'");
    }
    out.push_back(v);
  }
  if (out.empty()) {
    throw std::invalid_argument("fit-spread: no samples in '" + path + "'");
  }
  return out;
}

int run_fit_spread(const CliOptions& opt) {
  std::vector<double> sample = read_spread_csv(opt.input_path);
  FitResult fit = fit_exponential_mle(sample);

  std::sort(sample.begin(), sample.end());
  Table t;
  t.add_meta("command", "fit-spread");
  t.add_meta("version", kVersion);
  t.add_meta("input", opt.input_path);
  t.add_meta("model", "exponential");
  t.add_meta("rate", fmt_double(fit.rate));
  t.add_meta("sample_size", fmt_int(fit.sample_size));
  t.add_meta("ks_stat", fmt_double(fit.ks_stat));
  t.columns = {{"x", false}, {"empirical_log_survival", false}, {"fitted_log_survival", false}};
  auto n = static_cast<double>(sample.size());
  // The last order statistic has empirical survival zero; the table stops
  // one short so the log-survival column stays finite.
  for (std::size_t i = 0; i + 1 < sample.size(); ++i) {
    double surv = (n - static_cast<double>(i + 1)) / n;
    t.rows.push_back({sample[i], std::log(surv), -fit.rate * sample[i]});
  }
  emit(t, opt);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "auctionlab -- call-auction outcome laws: exact series, asymptotics, simulation.\n"
      "All outputs are deterministic given flags + seed and start with a\n"
      "metadata header (parameters, tolerances, seed, version)."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(auctionlab::kVersion));

  CliOptions opt;
  auto add_model_flags = [&opt](CLI::App* cmd, bool with_dist) {
    cmd->add_option("--lambda", opt.lambda, "Total order arrival intensity (per unit time)")
        ->capture_default_str();
    cmd->add_option("--alpha", opt.alpha_spec,
                    "Ask fraction in (0,1); `volume` accepts a comma-separated list")
        ->capture_default_str();
    cmd->add_option("--T", opt.horizon, "Accumulation window length")->capture_default_str();
    cmd->add_option("--theta-ask", opt.theta_ask, "Ask cancellation rate (0 = no decay)")
        ->capture_default_str();
    cmd->add_option("--theta-bid", opt.theta_bid, "Bid cancellation rate (0 = no decay)")
        ->capture_default_str();
    if (with_dist) {
      cmd->add_option("--dist", opt.dist_spec,
                      "Price distribution: uniform:lo,hi | normal:mean,sd | exponential:rate")
          ->capture_default_str();
    }
    cmd->add_option("--tol", opt.tol, "Absolute tolerance for series/quadrature error bounds");
    cmd->add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", opt.out_path, "Output path (default: standard output)");
  };

  CLI::App* c_volume = app.add_subcommand(
      "volume",
      "Executed-volume law. Columns: k, exact_pmf, exact_pmf_hyp, asymptotic_density,\n"
      "tail_bound (bound on P(V > k)); with a multi-alpha list, one exact_pmf column\n"
      "per alpha; with --reps > 0, an mc_freq column of empirical frequencies.");
  add_model_flags(c_volume, true);
  c_volume->add_option("--k-max", opt.k_max,
                       "Last tabulated volume (default: tail bound below 1e-9)");
  c_volume->add_option("--reps", opt.reps, "Replications for the empirical overlay column");
  c_volume->add_option("--seed", opt.seed, "RNG seed for the empirical overlay")
      ->capture_default_str();

  CLI::App* c_prices = app.add_subcommand(
      "prices",
      "Clearing price bound densities, conditioned on both book sides nonempty.\n"
      "Columns: x, f_L, f_U. Default grid spans the price distribution support.");
  add_model_flags(c_prices, true);
  c_prices->add_option("--grid", opt.grid_spec, "Evaluation grid lo:hi:n (default support:512)");

  CLI::App* c_range = app.add_subcommand(
      "range",
      "Clearing range density, conditioned on both book sides nonempty. Columns:\n"
      "delta, f_R, asymptotic_density. Uniform prices use the closed form; other\n"
      "distributions the general mixture (see `method` in the metadata header).");
  add_model_flags(c_range, true);
  c_range->add_option("--grid", opt.grid_spec, "Evaluation grid lo:hi:n");

  CLI::App* c_validate = app.add_subcommand(
      "validate",
      "Run the self-check suite and print a machine-readable JSON report.\n"
      "Exit code 4 if any check fails. Byte-identical for a fixed seed.");
  c_validate->add_option("--seed", opt.seed, "Seed for every sampling check")
      ->capture_default_str();
  c_validate->add_option("--workers", opt.workers,
                         "Worker threads for sampling checks (0 = auto; results identical)");
  c_validate->add_flag("--extended", opt.extended,
                       "Include the slowest checks (large-intensity normality)");
  c_validate->add_option("--out", opt.out_path, "Output path (default: standard output)");

  CLI::App* c_fit = app.add_subcommand(
      "fit-spread",
      "Exponential MLE for spread samples (CSV, one positive value per line,\n"
      "optional `spread` header). Emits the fit and a survival table with\n"
      "columns: x, empirical_log_survival, fitted_log_survival = -rate*x.");
  c_fit->add_option("input", opt.input_path, "CSV file of spread samples")->required();
  c_fit->add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  c_fit->add_option("--out", opt.out_path, "Output path (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(c_volume)) return run_volume(opt);
    if (app.got_subcommand(c_prices)) return run_prices(opt);
    if (app.got_subcommand(c_range)) return run_range(opt);
    if (app.got_subcommand(c_validate)) return run_validate(opt);
    if (app.got_subcommand(c_fit)) return run_fit_spread(opt);
    std::cerr << "auctionlab: no subcommand\n";
    return 2;
  } catch (const auctionlab::ToleranceError& e) {
    std::cerr << "auctionlab: tolerance not met: " << e.what() << "\n";
    return 3;
  } catch (const auctionlab::QuadratureError& e) {
    std::cerr << "auctionlab: tolerance not met: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "auctionlab: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "auctionlab: error: " << e.what() << "\n";
    return 1;
  }
}
