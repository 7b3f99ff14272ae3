#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "auctionlab/rng.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args, const std::string& tag) {
  std::string out_file = "cli_" + tag + ".out";
  std::string err_file = "cli_" + tag + ".err";
  std::string cmd = std::string(AUCTIONLAB_CLI_PATH) + " " + args + " > " + out_file + " 2> " +
                    err_file;
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  std::remove(out_file.c_str());
  std::remove(err_file.c_str());
  return r;
}

// Parses "# key=value" metadata lines and the data rows of a CSV table.
struct CsvTable {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string meta_value(const std::string& key) const {
    for (const auto& [k, v] : meta) {
      if (k == key) return v;
    }
    return {};
  }
  int column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return static_cast<int>(i);
    }
    return -1;
  }
};

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
      if (c == ',') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    parts.push_back(cur);
    return parts;
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      auto eq = line.find('=');
      REQUIRE(eq != std::string::npos);
      t.meta.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
      continue;
    }
    if (!have_header) {
      t.columns = split(line);
      have_header = true;
      continue;
    }
    std::vector<double> row;
    // std::strtod rather than std::stod: the latter throws out_of_range on
    // subnormal cells (deep density tails underflow gradually before hitting 0).
    for (const std::string& cell : split(line)) row.push_back(std::strtod(cell.c_str(), nullptr));
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("volume: schema, mass balance, tail bound at the last row") {
  RunResult r = run_cli("volume --lambda 10 --alpha 0.5", "vol1");
  REQUIRE(r.exit_code == 0);
  CsvTable t = parse_csv(r.out);
  CHECK(t.meta_value("command") == "volume");
  CHECK(t.meta_value("version") != "");
  REQUIRE(t.columns ==
          std::vector<std::string>{"k", "exact_pmf", "exact_pmf_hyp", "asymptotic_density",
                                   "tail_bound"});
  REQUIRE(!t.rows.empty());
  int pmf_col = t.column("exact_pmf");
  int hyp_col = t.column("exact_pmf_hyp");
  int tail_col = t.column("tail_bound");
  double mass = 0.0;
  for (const auto& row : t.rows) {
    mass += row[static_cast<std::size_t>(pmf_col)];
    CHECK(std::abs(row[static_cast<std::size_t>(pmf_col)] -
                   row[static_cast<std::size_t>(hyp_col)]) < 1e-10);
  }
  double final_tail = t.rows.back()[static_cast<std::size_t>(tail_col)];
  CHECK(final_tail < 1e-9);
  CHECK(mass + final_tail == doctest::Approx(1.0).epsilon(1e-9));
  // First row is the no-trade mass: 6 e^{-5} for this balanced book.
  CHECK(t.rows.front()[static_cast<std::size_t>(pmf_col)] ==
        doctest::Approx(6.0 * std::exp(-5.0)).epsilon(1e-10));
}

TEST_CASE("volume: byte-identical across repeated invocations") {
  RunResult a = run_cli("volume --lambda 7 --alpha 0.3 --k-max 15", "det_a");
  RunResult b = run_cli("volume --lambda 7 --alpha 0.3 --k-max 15", "det_b");
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
}

TEST_CASE("volume: multi-alpha family emits one pmf column per share") {
  RunResult r = run_cli("volume --lambda 10 --alpha 0.125,0.25,0.375,0.5 --k-max 12", "fam");
  REQUIRE(r.exit_code == 0);
  CsvTable t = parse_csv(r.out);
  REQUIRE(t.columns.size() == 5);
  CHECK(t.columns[0] == "k");
  CHECK(t.column("exact_pmf_a0.125") == 1);
  CHECK(t.column("exact_pmf_a0.5") == 4);
  CHECK(t.meta_value("tail_bound_a0.25") != "");
  REQUIRE(t.rows.size() == 13);
  // The no-trade row reproduces the closed-form values.
  CHECK(t.rows[0][1] == doctest::Approx(0.3342291861160358).epsilon(1e-10));
  CHECK(t.rows[0][4] == doctest::Approx(6.0 * std::exp(-5.0)).epsilon(1e-10));
}

TEST_CASE("volume: empirical overlay column tracks the exact law") {
  RunResult r = run_cli("volume --lambda 8 --alpha 0.5 --reps 20000 --seed 7 --k-max 10",
                        "mc");
  REQUIRE(r.exit_code == 0);
  CsvTable t = parse_csv(r.out);
  int pmf_col = t.column("exact_pmf");
  int mc_col = t.column("mc_freq");
  REQUIRE(mc_col >= 0);
  for (const auto& row : t.rows) {
    double p = row[static_cast<std::size_t>(pmf_col)];
    double se = std::sqrt(std::max(p * (1.0 - p), 1e-12) / 20000.0);
    CHECK(std::abs(row[static_cast<std::size_t>(mc_col)] - p) < 5.0 * se + 1e-3);
  }
}

TEST_CASE("prices: balanced uniform book gives mirror-symmetric bound densities") {
  RunResult r = run_cli("prices --lambda 10 --alpha 0.5 --grid 0:1:101", "sym");
  REQUIRE(r.exit_code == 0);
  CsvTable t = parse_csv(r.out);
  REQUIRE(t.columns == std::vector<std::string>{"x", "f_L", "f_U"});
  REQUIRE(t.rows.size() == 101);
  CHECK(t.meta_value("dist") != "");
  CHECK(t.meta_value("conditioning") == "both book sides nonempty");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& lo = t.rows[i];
    const auto& hi = t.rows[t.rows.size() - 1 - i];
    CHECK(lo[1] == doctest::Approx(hi[2]).epsilon(1e-8));
  }
  // Riemann mass on the uniform grid is close to one for each column.
  double step = 1.0 / 100.0;
  double il = 0.0;
  double iu = 0.0;
  for (std::size_t i = 0; i + 1 < t.rows.size(); ++i) {
    il += 0.5 * (t.rows[i][1] + t.rows[i + 1][1]) * step;
    iu += 0.5 * (t.rows[i][2] + t.rows[i + 1][2]) * step;
  }
  CHECK(il == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(iu == doctest::Approx(1.0).epsilon(2e-3));
}

TEST_CASE("range: uniform dispatch uses the closed form, normal the mixture") {
  RunResult uni = run_cli("range --lambda 10 --alpha 0.3 --grid 0:0.6:13", "rng_u");
  REQUIRE(uni.exit_code == 0);
  CsvTable tu = parse_csv(uni.out);
  CHECK(tu.meta_value("method") == "closed_uniform");
  REQUIRE(tu.columns == std::vector<std::string>{"delta", "f_R", "asymptotic_density"});
  REQUIRE(tu.rows.size() == 13);
  CHECK(tu.meta_value("asymptotic_rate") == "10");

  RunResult nrm = run_cli(
      "range --lambda 4 --alpha 0.5 --dist normal:0,1 --grid 0:1.2:7 --tol 1e-5", "rng_n");
  REQUIRE(nrm.exit_code == 0);
  CsvTable tn = parse_csv(nrm.out);
  CHECK(tn.meta_value("method") == "general_mixture");
  CHECK(tn.meta_value("max_error_bound") != "");
  for (const auto& row : tn.rows) CHECK(row[1] >= 0.0);
}

TEST_CASE("json format carries the same table as csv") {
  RunResult r = run_cli("volume --lambda 5 --alpha 0.5 --k-max 8 --format json", "json");
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["meta"]["command"] == "volume");
  REQUIRE(j["columns"].size() == 5);
  REQUIRE(j["rows"].size() == 9);
  CHECK(j["rows"][0][0].get<long long>() == 0);
  RunResult c = run_cli("volume --lambda 5 --alpha 0.5 --k-max 8", "json_ref");
  CsvTable t = parse_csv(c.out);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(j["rows"][i][1].get<double>() == doctest::Approx(t.rows[i][1]).epsilon(1e-14));
  }
}

TEST_CASE("out flag writes the table to a file") {
  RunResult r = run_cli("volume --lambda 5 --alpha 0.5 --k-max 5 --out cli_out_test.csv",
                        "outflag");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.empty());
  std::string written = slurp("cli_out_test.csv");
  CHECK(!written.empty());
  CsvTable t = parse_csv(written);
  CHECK(t.rows.size() == 6);
  std::remove("cli_out_test.csv");
}

TEST_CASE("usage and config errors exit with code 2") {
  CHECK(run_cli("volume --no-such-flag", "e1").exit_code == 2);
  CHECK(run_cli("volume --lambda -4", "e2").exit_code == 2);
  CHECK(run_cli("volume --lambda 10 --alpha 1.5", "e3").exit_code == 2);
  CHECK(run_cli("prices --grid 1:0:50", "e4").exit_code == 2);
  CHECK(run_cli("prices --grid 0:1", "e5").exit_code == 2);
  CHECK(run_cli("prices --dist cauchy:0,1", "e6").exit_code == 2);
  CHECK(run_cli("prices --lambda 10 --alpha 0.25,0.5", "e7").exit_code == 2);
  CHECK(run_cli("", "e8").exit_code == 2);
}

TEST_CASE("unreachable tolerances exit with code 3") {
  RunResult r = run_cli("volume --lambda 50 --alpha 0.5 --k-max 10 --tol 1e-40", "tol");
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("tolerance") != std::string::npos);
}

TEST_CASE("help exits cleanly and documents the columns") {
  RunResult top = run_cli("--help", "help");
  CHECK(top.exit_code == 0);
  RunResult vol = run_cli("volume --help", "help_v");
  CHECK(vol.exit_code == 0);
  CHECK(vol.out.find("exact_pmf") != std::string::npos);
  RunResult fit = run_cli("fit-spread --help", "help_f");
  CHECK(fit.exit_code == 0);
  CHECK(fit.out.find("survival") != std::string::npos);
}

TEST_CASE("fit-spread: exact value on a constant file and a synthetic round trip") {
  {
    std::ofstream f("cli_fit_ones.csv");
    f << "spread\n1\n1\n1\n";
  }
  RunResult ones = run_cli("fit-spread cli_fit_ones.csv", "fit1");
  REQUIRE(ones.exit_code == 0);
  CsvTable t = parse_csv(ones.out);
  CHECK(std::stod(t.meta_value("rate")) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t.meta_value("sample_size") == "3");
  std::remove("cli_fit_ones.csv");

  {
    auctionlab::PhiloxRng rng(884422, 0);
    std::ofstream f("cli_fit_syn.csv");
    f << "spread\n";
    for (int i = 0; i < 10000; ++i) f << rng.exponential(50.0) << "\n";
  }
  RunResult syn = run_cli("fit-spread cli_fit_syn.csv --format json", "fit2");
  REQUIRE(syn.exit_code == 0);
  auto j = nlohmann::json::parse(syn.out);
  double rate = std::stod(j["meta"]["rate"].get<std::string>());
  CHECK(std::abs(rate - 50.0) / 50.0 < 0.02);
  // Survival table: n-1 rows, fitted column is -rate * x.
  REQUIRE(j["rows"].size() == 9999);
  auto first = j["rows"][0];
  CHECK(first[2].get<double>() ==
        doctest::Approx(-rate * first[0].get<double>()).epsilon(1e-9));
  std::remove("cli_fit_syn.csv");
}

TEST_CASE("fit-spread: malformed and empty inputs exit with code 2") {
  {
    std::ofstream f("cli_fit_bad.csv");
    f << "spread\n0.5\nbanana\n0.25\n";
  }
  RunResult bad = run_cli("fit-spread cli_fit_bad.csv", "fit_bad");
  CHECK(bad.exit_code == 2);
  CHECK(bad.err.find("line 3") != std::string::npos);
  std::remove("cli_fit_bad.csv");

  {
    std::ofstream f("cli_fit_neg.csv");
    f << "0.5\n-2\n";
  }
  CHECK(run_cli("fit-spread cli_fit_neg.csv", "fit_neg").exit_code == 2);
  std::remove("cli_fit_neg.csv");

  {
    std::ofstream f("cli_fit_empty.csv");
  }
  CHECK(run_cli("fit-spread cli_fit_empty.csv", "fit_empty").exit_code == 2);
  std::remove("cli_fit_empty.csv");
  CHECK(run_cli("fit-spread cli_no_such_file.csv", "fit_missing").exit_code == 2);
}

}  // TEST_SUITE
