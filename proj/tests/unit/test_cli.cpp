#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cli_support.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace rmt;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rmt_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = std::string(RMT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

}  // namespace

TEST_CASE("model specs") {
  const auto s = cli::parse_model_spec("exponential:c=0.9");
  CHECK(s.name == "exponential");
  CHECK(s.number("c") == doctest::Approx(0.9));
  CHECK(s.number("d", 2.0) == 2.0);
  CHECK_ERRC(s.number("d"), Errc::ParseError);
  CHECK(cli::make_correlation_model("equal_cross:c=0.5", 4).xi()(0, 1) == doctest::Approx(0.5));
  CHECK(cli::make_partitioned_model("fig2", 8, 8).zeta_spectrum().maxCoeff() > 0.0);
  CHECK_ERRC(cli::make_correlation_model("bogus", 4), Errc::ParseError);
  CHECK(cli::parse_sweep("50:100:25") == std::vector<double>{50, 75, 100});
  CHECK(cli::parse_sweep("1,1.5") == std::vector<double>{1.0, 1.5});
  CHECK(cli::parse_window("0.1:0.5") == std::pair<double, double>{0.1, 0.5});
  CHECK_ERRC(cli::parse_window("0.5:0.1"), Errc::ParseError);
}

TEST_CASE("simulate and reproduce from the manifest") {
  const fs::path a = scratch("sim_a"), b = scratch("sim_b");
  REQUIRE(run("simulate --kind cwoe -n 40 -t 80 --model exponential:c=0.5 --members 3 --seed 9 --out " + a.string()) == 0);
  REQUIRE(fs::exists(a / "spectra.csv"));
  REQUIRE(fs::exists(a / "run.ini"));
  const auto manifest = read_json(a / "manifest.json");
  CHECK(manifest["command"] == "simulate");
  CHECK(manifest["seed"] == 9);
  REQUIRE(run("--config " + (a / "run.ini").string() + " simulate --out " + b.string()) == 0);
  CHECK(slurp(a / "spectra.csv") == slurp(b / "spectra.csv"));
  const auto spectra = cli::read_spectra_csv(a / "spectra.csv");
  CHECK(spectra.size() == 3);
  CHECK(spectra[0].size() == 40);
}

TEST_CASE("pastur and fluct") {
  const fs::path d = scratch("pastur");
  REQUIRE(run("pastur --mp --kappa 2 --points 500 --out " + d.string()) == 0);
  const auto s = cli::read_density_csv(d / "density.csv");
  CHECK(s.size() == 500);
  CHECK(s.mass() == doctest::Approx(1.0).epsilon(0.02));
  REQUIRE(run("pastur --cwoe --model exponential:c=0.5 -n 64 --kappa 2 --points 400 --out " + d.string()) == 0);
  CHECK(fs::exists(d / "comparison.csv"));
  REQUIRE(run("pastur --two-channel --kn 0.05 --km 0.1 --zeta-from fig2 --zeta-n 64 --points 400 --out " +
              d.string()) == 0);
  CHECK(fs::exists(d / "density_null.csv"));

  REQUIRE(run("simulate -n 100 -t 200 --members 4 --seed 1 --out " + d.string()) == 0);
  REQUIRE(run("fluct --spectra " + (d / "spectra.csv").string() +
              " --kappa 2 --window 0.3:2.5 --r 1,2,5 --bootstrap 20 --out " + d.string()) == 0);
  const std::string nv = slurp(d / "number_variance.csv");
  CHECK(nv.rfind("r,sigma2,stderr,goe_reference\n", 0) == 0);
}

TEST_CASE("analyze a price file") {
  const fs::path d = scratch("analyze");
  {
    std::ofstream out(d / "prices.csv");
    out << "a,b,c,d,e\n";
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g(0.0, 0.01);
    std::vector<double> p(5, 100.0);
    for (int t = 0; t < 101; ++t) {
      for (int k = 0; k < 5; ++k) {
        if (t > 0) p[k] *= std::exp(g(rng));
        out << p[k] << (k < 4 ? "," : "\n");
      }
    }
  }
  REQUIRE(run("analyze " + (d / "prices.csv").string() + " --lag 1 --powermap 1.5 --out " + d.string()) == 0);
  for (const char* f : {"correlation.csv", "spectrum.csv", "report.json", "lagged.csv", "powermapped.csv"})
    CHECK(fs::exists(d / f));
  const auto report = read_json(d / "report.json");
  CHECK(report["n"] == 5);
  CHECK(report["t"] == 100);
}

TEST_CASE("powermap and portfolio") {
  const fs::path d = scratch("powermap");
  REQUIRE(run("powermap -n 64 -t 32 --alpha 1e-3 --members 3 --out " + d.string()) == 0);
  CHECK(fs::exists(d / "moments.csv"));
  CHECK(fs::exists(d / "emerging.csv"));
  REQUIRE(run("portfolio --t-sweep 50,100 --q 1,1.5 --members 3 --out " + d.string()) == 0);
  const auto summary = read_json(d / "summary.json");
  CHECK(summary["homogeneous_ratio"].get<double>() > 1.0);
  CHECK(fs::exists(d / "study.csv"));
}

TEST_CASE("errors exit with status 2") {
  const fs::path d = scratch("errors");
  CHECK(run("simulate --kind cwoe -n 10 -t 20 --model exponential:c=1.5 --out " + d.string()) == 2);
  CHECK(run("analyze /nonexistent/file.csv --out " + d.string()) == 2);
  CHECK(run("pastur --mp --kappa -1 --out " + d.string()) == 2);
}
