#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "ifes/errors.hpp"

using namespace ifes;
using namespace ifes::app;
namespace fs = std::filesystem;

namespace {

std::string spec_path(const char* name) { return std::string(IFES_SPECS_DIR) + "/" + name; }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ifes-test-" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> read_rows(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(IFES_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

LoadedSpec small_e1() {
  LoadedSpec s = load_spec(spec_path("e1.ifes"));
  s.solver.grid = 64;
  s.solver.levels = 64;
  return s;
}

}  // namespace

TEST_SUITE("commands") {
  TEST_CASE("parse_range") {
    const ScanRange r = parse_range("0.5:0.95:10");
    CHECK(r.lo == 0.5);
    CHECK(r.hi == 0.95);
    CHECK(r.steps == 10);
    const auto s = r.samples();
    REQUIRE(s.size() == 10);
    CHECK(s.front() == 0.5);
    CHECK(s.back() == 0.95);
    CHECK(parse_range("1:2:1").samples() == std::vector<double>{1.0});
    CHECK(parse_range("1:2:0").samples().empty());
    for (const char* bad : {"", "1:2", "a:2:3", "1:2:-1", "1:2:3:4", "1:2:x", "2:1:3"}) {
      CAPTURE(bad);
      CHECK_THROWS_AS(parse_range(bad), SpecError);
    }
  }

  TEST_CASE("scan: sign change of K on the continuous example") {
    const fs::path out = scratch("scan-k");
    const Outcome o = run_scan(load_spec(spec_path("exmp1.ifes")), "lambda.1", parse_range("0.5:0.95:10"), true, out);
    CHECK(o.exit_code == kOk);
    const auto& ch = o.report["K_sign_changes"];
    REQUIRE(ch.size() == 1);
    CHECK(ch[0]["from"].get<double>() <= 2.0 / 3.0);
    CHECK(ch[0]["to"].get<double>() >= 2.0 / 3.0);
    const auto rows = read_rows(out / "scan.csv");
    REQUIRE(rows.size() == 11);
    CHECK(rows[0][0] == "lambda.1");
    CHECK(rows[0][3] == "K");
    CHECK(std::stod(rows[1][3]) < 0.0);
    CHECK(std::stod(rows[10][3]) > 0.0);
  }

  TEST_CASE("scan: floor threshold on E1 and empty ranges") {
    const fs::path out = scratch("scan-delta");
    run_scan(load_spec(spec_path("e1.ifes")), "delta", parse_range("0.05:0.95:19"), true, out);
    const auto rows = read_rows(out / "scan.csv");
    REQUIRE(rows.size() == 20);
    std::size_t col = 0;
    for (std::size_t c = 0; c < rows[0].size(); ++c) {
      if (rows[0][c].find("lower_endpoint") != std::string::npos) col = c;
    }
    REQUIRE(col != 0);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double delta = std::stod(rows[i][0]);
      CAPTURE(delta);
      CHECK((rows[i][col] == "1") == (delta <= 0.25));
    }
    run_scan(load_spec(spec_path("e1.ifes")), "delta", parse_range("0.1:0.2:0"), true, out);
    CHECK(read_rows(out / "scan.csv").size() == 1);
    CHECK_THROWS_AS(run_scan(load_spec(spec_path("e1.ifes")), "kappa", parse_range("0:1:2"), true, out), SpecError);
    CHECK_THROWS_AS(run_scan(load_spec(spec_path("e1.ifes")), "lambda.3", parse_range("0:1:2"), true, out), SpecError);
    CHECK_THROWS_AS(run_scan(load_spec(spec_path("e1.ifes")), "M", parse_range("0:1:2"), true, out), SpecError);
  }

  TEST_CASE("solve then verify agrees, and a tampered file is caught") {
    const LoadedSpec spec = small_e1();
    const fs::path out = scratch("verify");
    const Outcome solved = run_solve(spec, out, 1);
    REQUIRE(solved.exit_code == kOk);
    const double r_min = solved.report["tarski"]["min"]["residual"]["value"].get<double>();

    const Outcome v = run_verify(spec, out / "solution_min.csv", std::nullopt, out);
    CHECK(v.report["monotone"].get<bool>());
    CHECK(v.report["self_map"].get<bool>());
    CHECK(v.report["order_lattice_member"].get<bool>());
    CHECK(v.report["residual"]["value"].get<double>() == doctest::Approx(r_min).epsilon(1e-12));
    CHECK(fs::exists(out / "verify.json"));

    // Raise one interior value by 0.1: monotonicity breaks and the residual grows.
    auto rows = read_rows(out / "solution_min.csv");
    std::ostringstream tampered;
    tampered << rows[0][0] << "," << rows[0][1] << "\n";
    for (std::size_t i = 1; i < rows.size(); ++i) {
      double g = std::stod(rows[i][1]);
      if (i == 20) g += 0.1;
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", g);
      tampered << rows[i][0] << "," << buf << "\n";
    }
    std::ofstream(out / "tampered.csv") << tampered.str();
    const Outcome t = run_verify(spec, out / "tampered.csv", std::nullopt, out);
    CHECK_FALSE(t.report["monotone"].get<bool>());
    CHECK_FALSE(t.report["order_lattice_member"].get<bool>());
    CHECK(t.report["residual"]["value"].get<double>() > r_min + 0.01);

    std::ofstream(out / "short.csv") << "x,g\n0,0.5\n0.5,0.6\n";
    CHECK_THROWS_AS(run_verify(spec, out / "short.csv", std::nullopt, out), SpecError);
    CHECK_THROWS_AS(run_verify(spec, out / "missing.csv", std::nullopt, out), SpecError);
  }

  TEST_CASE("verify: the identity solves the identity instance") {
    LoadedSpec spec = small_e1();
    spec.product->domain = Interval(0.2, 1.0);
    spec.product->target = parse("x^0.5");
    spec.product->outer_maps = {parse("x"), parse("x")};
    spec.product->inner_maps = {parse("x"), parse("x")};
    const fs::path out = scratch("identity");
    std::ostringstream csv;
    csv << "x,g\n";
    char buf[64];
    for (int i = 0; i <= 64; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", 0.2 + 0.8 * i / 64.0);
      csv << buf << "," << buf << "\n";
    }
    std::ofstream(out / "id.csv") << csv.str();
    const Outcome v = run_verify(spec, out / "id.csv", EvalMode::PiecewiseLinear, out);
    CHECK(v.report["residual"]["value"].get<double>() <= 1e-14);
    CHECK(v.report["endpoints_fixed"].get<bool>());
  }

  TEST_CASE("solve is deterministic") {
    const LoadedSpec spec = small_e1();
    const fs::path a = scratch("det-a");
    const fs::path b = scratch("det-b");
    run_solve(spec, a, 7);
    run_solve(spec, b, 7);
    CHECK(slurp(a / "solution_min.csv") == slurp(b / "solution_min.csv"));
    CHECK(slurp(a / "solution_max.csv") == slurp(b / "solution_max.csv"));
    CHECK_FALSE(slurp(a / "solution_min.csv").empty());
  }

  TEST_CASE("conjugate writes a loadable spec") {
    const fs::path out = scratch("conj");
    const LoadedSpec ex = load_spec(spec_path("exmp1.ifes"));
    const Outcome o = run_conjugate(ex, "log", out / "sum.ifes");
    CHECK(o.exit_code == kOk);
    const LoadedSpec sum = load_spec((out / "sum.ifes").string());
    REQUIRE(sum.sum);
    CHECK(sum.sum->domain.lo() == 0.0);
    CHECK(sum.sum->target(0.5) == doctest::Approx(0.375).epsilon(1e-13));
    CHECK(sum.solver.method == "banach");

    CHECK_THROWS_AS(run_conjugate(load_spec(spec_path("e1.ifes")), "log", out / "bad.ifes"),
                    ZeroProblemError);
    CHECK_THROWS_AS(run_conjugate(ex, "sideways", out / "bad.ifes"), SpecError);
  }

  TEST_CASE("bundled examples are listed") {
    const auto names = bundled_spec_names();
    CHECK(names == std::vector<std::string>{"e1", "ex2", "exmp1"});
    REQUIRE(bundled_spec("e1"));
    CHECK(*bundled_spec("e1") == slurp(spec_path("e1.ifes")));
    CHECK_FALSE(bundled_spec("e9"));
  }

  TEST_CASE("cli exit codes") {
    const fs::path out = scratch("cli");
    CHECK(cli("--help") == 0);
    CHECK(cli("frobnicate") == 4);
    CHECK(cli("check --spec " + spec_path("e1.ifes") + " --out " + out.string()) == 0);
    CHECK(cli("solve --spec " + spec_path("e1.ifes") + " --grid 32 --levels 32 --out " + out.string()) == 0);
    CHECK(cli("solve --spec " + spec_path("missing.ifes") + " --out " + out.string()) == 4);
    std::string high = slurp(spec_path("e1.ifes"));
    high.replace(high.find("delta = 0.2"), 11, "delta = 0.3");
    std::ofstream(out / "high.ifes") << high;
    CHECK(cli("solve --spec " + (out / "high.ifes").string() + " --out " + out.string()) == 2);
    CHECK(cli("solve --spec " + spec_path("exmp1.ifes") + " --max-iter 3 --grid 64 --out " + out.string()) == 3);
    CHECK(cli("example nonesuch --out " + out.string()) == 4);
  }
}
