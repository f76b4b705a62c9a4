// rmt: command-line front end for the random-matrix toolkit.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "cli_support.hpp"
#include "rmt/ensembles.hpp"
#include "rmt/error.hpp"
#include "rmt/fluctuations.hpp"
#include "rmt/io.hpp"
#include "rmt/panel.hpp"
#include "rmt/pastur.hpp"
#include "rmt/portfolio.hpp"
#include "rmt/powermap.hpp"
#include "rmt/stats.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace rmt;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Common {
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "master seed")->capture_default_str();
  sub->add_option("--workers", c.workers, "worker threads (0 = all cores)")->capture_default_str();
  sub->add_option("--out", c.out, "output directory (default $RMT_OUTPUT_DIR or .)");
}

fs::path out_dir(const Common& c) {
  if (!c.out.empty()) return c.out;
  if (const char* env = std::getenv("RMT_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

int workers(const Common& c) {
  return c.workers > 0 ? c.workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// run.ini reproduces the run via `rmt <command> --config run.ini`.
void write_manifest(const CLI::App* sub, const Common& c, const std::vector<std::string>& outputs,
                    json extra = json::object()) {
  const fs::path dir = out_dir(c);
  const std::string prefix = sub->get_name() + ".";
  std::string ini = "[" + sub->get_name() + "]\n";
  std::istringstream all(sub->get_parent()->config_to_str(true, false));
  for (std::string line; std::getline(all, line);)
    if (line.rfind(prefix, 0) == 0) ini += line.substr(prefix.size()) + "\n";
  io::open_output(dir / "run.ini") << ini;
  json m;
  m["command"] = sub->get_name();
  m["version"] = kVersion;
  m["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  m["seed"] = c.seed;
  m["workers"] = workers(c);
  m["config_file"] = "run.ini";
  m["config"] = ini;
  m["outputs"] = outputs;
  for (auto& [k, v] : extra.items()) m[k] = v;
  io::open_output(dir / "manifest.json") << m.dump(2) << '\n';
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  Common common;
  std::string kind = "woe";
  Eigen::Index n = 1024, t = 0, m = 0;
  double kappa = 0.0;
  double sigma = 1.0;
  std::string model;
  int members = 10;
  std::string method = "literal";
};


int run_simulate(const CLI::App* sub, const SimulateArgs& a) {
  EnsembleConfig cfg;
  if (a.kind == "woe") cfg.kind = EnsembleKind::Woe;
  else if (a.kind == "cwoe") cfg.kind = EnsembleKind::Cwoe;
  else if (a.kind == "two-channel") cfg.kind = EnsembleKind::TwoChannel;
  else throw Error(Errc::BadParameters, "unknown kind '" + a.kind + "'");
  cfg.n = a.n;
  cfg.t = a.t > 0 ? a.t : static_cast<Eigen::Index>(std::llround(a.kappa * static_cast<double>(a.n)));
  if (a.t <= 0 && a.kappa <= 0.0) throw Error(Errc::BadParameters, "give -t or --kappa");
  cfg.m = a.m;
  cfg.sigma = a.sigma;
  cfg.members = a.members;
  cfg.seed = a.common.seed;
  cfg.method = a.method == "canonical" ? TwoChannelMethod::Canonical : TwoChannelMethod::Literal;
  if (a.method != "canonical" && a.method != "literal")
    throw Error(Errc::BadParameters, "method must be literal or canonical");
  if (cfg.kind == EnsembleKind::Cwoe)
    cfg.model = std::make_shared<const CorrelationModel>(
        cli::make_correlation_model(a.model.empty() ? "identity" : a.model, cfg.n));
  if (cfg.kind == EnsembleKind::TwoChannel)
    cfg.partitioned = std::make_shared<const PartitionedModel>(
        cli::make_partitioned_model(a.model.empty() ? "null" : a.model, cfg.n, cfg.m));
  cfg.validate();

  const auto spectra = sample_spectra(cfg, workers(a.common));
  const fs::path dir = out_dir(a.common);
  {
    auto out = io::open_output(dir / "spectra.csv");
    out << "member,index,eigenvalue\n";
    for (const auto& s : spectra)
      for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
        out << s.member << ',' << i << ',' << io::fmt(s.eigenvalues(i)) << '\n';
  }
  double lo = INFINITY, hi = -INFINITY, mean = 0.0, top = 0.0;
  std::size_t count = 0;
  for (const auto& s : spectra) {
    lo = std::min(lo, s.eigenvalues.minCoeff());
    hi = std::max(hi, s.eigenvalues.maxCoeff());
    mean += s.eigenvalues.sum();
    count += static_cast<std::size_t>(s.eigenvalues.size());
    top += s.eigenvalues.maxCoeff() / static_cast<double>(spectra.size());
  }
  mean /= static_cast<double>(count);
  json summary;
  summary["fingerprint"] = cfg.fingerprint();
  summary["kind"] = a.kind;
  summary["n"] = cfg.n;
  summary["t"] = cfg.t;
  summary["m"] = cfg.m;
  summary["kappa"] = cfg.kappa();
  summary["sigma"] = cfg.sigma;
  summary["model"] = a.model;
  summary["method"] = a.method;
  summary["members"] = cfg.members;
  summary["support"] = {lo, hi};
  summary["mean"] = mean;
  summary["mean_top_eigenvalue"] = top;
  io::open_output(dir / "config.json") << summary.dump(2) << '\n';
  write_manifest(sub, a.common, {"spectra.csv", "config.json"});
  std::printf("%zu eigenvalues from %d members; support [%.6g, %.6g], mean %.6g, mean top %.6g\n", count,
              cfg.members, lo, hi, mean, top);
  return 0;
}

// --- pastur -----------------------------------------------------------------

struct PasturArgs {
  Common common;
  bool mp = false, cwoe = false, two_channel = false;
  double kappa = 2.0, sigma = 1.0;
  std::string model = "identity";
  Eigen::Index n = 1024;
  double kn = 0.05, km = 0.125;
  std::string zeta_from = "null";
  Eigen::Index zeta_n = 256;
  int points = 2000;
  double lo = 0.0, hi = 0.0;
  double epsilon = 0.0;
  std::string overlay;
};

int run_pastur(const CLI::App* sub, const PasturArgs& a) {
  if (a.mp + a.cwoe + a.two_channel != 1) throw Error(Errc::BadParameters, "choose one of --mp, --cwoe, --two-channel");
  SolverOptions opt;
  opt.epsilon = a.epsilon;
  const fs::path dir = out_dir(a.common);
  std::vector<std::string> outputs{"density.csv"};
  json extra;
  ResolventSolution sol;

  const auto grid_for = [&](double bound) {
    const double top = a.hi > 0.0 ? a.hi : 1.2 * bound;
    return midpoint_grid(a.lo, top, a.points);
  };
  if (a.mp) {
    sol = solve_cwoe(Vector::Ones(1), a.kappa, a.sigma, grid_for(mp_edges(a.sigma, a.kappa).second), opt);
    for (Eigen::Index i = 0; i < sol.size(); ++i) sol.rho(i) = mp_density(sol.grid(i), a.sigma, a.kappa);
  } else if (a.cwoe) {
    const CorrelationModel model = cli::make_correlation_model(a.model, a.n);
    sol = solve_cwoe(model.spectrum(), a.kappa, a.sigma, grid_for(cwoe_support_bound(model.spectrum(), a.kappa, a.sigma)),
                     opt);
    extra["comparison"] = "comparison.csv";
    const Vector phi = comparison_function(sol, a.kappa);
    auto out = io::open_output(dir / "comparison.csv");
    out << "lambda,phi,phi_times_n\n";
    for (Eigen::Index i = 0; i < sol.size(); ++i)
      out << io::fmt(sol.grid(i)) << ',' << io::fmt(phi(i)) << ',' << io::fmt(phi(i) * static_cast<double>(a.n))
          << '\n';
    outputs.push_back("comparison.csv");
  } else {
    const auto zm = static_cast<Eigen::Index>(std::llround(a.km / a.kn * static_cast<double>(a.zeta_n)));
    const PartitionedModel model = cli::make_partitioned_model(a.zeta_from, a.zeta_n, zm);
    const Vector grid = grid_for(two_channel_support_bound(a.kn, a.km));
    sol = solve_two_channel(model.zeta_spectrum(), a.kn, a.km, grid, opt);
    cli::write_density_csv(dir / "density_null.csv", cubic_null(a.kn, a.km, grid, opt.epsilon));
    outputs.push_back("density_null.csv");
    extra["zeta_max"] = model.zeta_spectrum().maxCoeff();
  }
  cli::write_density_csv(dir / "density.csv", sol);
  extra["points"] = sol.size();
  extra["failures"] = sol.failures();
  extra["mass"] = sol.mass();

  if (!a.overlay.empty()) {
    std::vector<double> all;
    for (const auto& v : cli::read_spectra_csv(a.overlay)) all.insert(all.end(), v.data(), v.data() + v.size());
    const double top = *std::max_element(all.begin(), all.end());
    const Histogram h = histogram(all, 0.0, std::max(top, sol.grid(sol.size() - 1)), 50);
    const CumulativeDensity cdf = cumulative_density(sol);
    auto out = io::open_output(dir / "overlay.csv");
    out << "center,histogram,theory,residual\n";
    double left = cdf(h.lo);
    for (int i = 0; i < h.bins(); ++i) {
      const double right = cdf(h.lo + (i + 1) * h.width());
      const double th = (right - left) / h.width();
      left = right;
      out << io::fmt(h.center(i)) << ',' << io::fmt(h.density[static_cast<std::size_t>(i)]) << ',' << io::fmt(th)
          << ',' << io::fmt(h.density[static_cast<std::size_t>(i)] - th) << '\n';
    }
    extra["overlay_l1"] = l1_distance_cumulative(h, cdf);
    outputs.push_back("overlay.csv");
  }
  write_manifest(sub, a.common, outputs, extra);
  std::printf("%lld points, %zu not converged, mass %.6f\n", static_cast<long long>(sol.size()), sol.failures(),
              sol.mass());
  if (sol.failures() > 0) std::fprintf(stderr, "warning: %zu grid points flagged converged=0\n", sol.failures());
  return 0;
}

// --- analyze ----------------------------------------------------------------

struct AnalyzeArgs {
  Common common;
  std::string path;
  bool transposed = false, skip_first_column = false;
  std::string input = "prices";
  Eigen::Index lag = 0;
  double powermap = 0.0;
};

int run_analyze(const CLI::App* sub, const AnalyzeArgs& a) {
  const DataPanel raw = read_panel_csv(a.path, CsvLayout{a.transposed, a.skip_first_column});
  if (a.input != "prices" && a.input != "returns") throw Error(Errc::BadParameters, "--input must be prices or returns");
  const DataPanel returns = a.input == "prices" ? DataPanel(log_returns(raw.values()), raw.labels(), raw.dt()) : raw;
  const StandardizedPanel sp = standardize(returns);
  const fs::path dir = out_dir(a.common);
  std::vector<std::string> outputs{"correlation.csv", "spectrum.csv", "report.json"};

  const SampleCorrelation c = correlation_matrix(sp);
  io::write_matrix_csv(dir / "correlation.csv", c.matrix);
  const Vector eig = symmetric_eigenvalues(c.matrix);
  {
    auto out = io::open_output(dir / "spectrum.csv");
    out << "index,eigenvalue\n";
    for (Eigen::Index i = 0; i < eig.size(); ++i) out << i << ',' << io::fmt(eig(i)) << '\n';
  }
  const double kappa = static_cast<double>(sp.t()) / static_cast<double>(sp.n());
  const auto [lo, hi] = mp_edges(1.0, kappa);
  json report;
  report["n"] = sp.n();
  report["t"] = sp.t();
  report["kappa"] = kappa;
  report["labels"] = returns.labels();
  report["symmetric"] = c.symmetric;
  report["mp_edges"] = {lo, hi};
  report["above_mp_edge"] = (eig.array() > hi).count();
  report["below_mp_edge"] = (eig.array() < lo).count();
  report["largest_eigenvalue"] = eig(eig.size() - 1);

  if (a.lag > 0) {
    const SampleCorrelation l = lagged_correlation(sp, sp, a.lag);
    io::write_matrix_csv(dir / "lagged.csv", l.matrix);
    json meta;
    meta["lag"] = l.lag;
    meta["horizon"] = l.horizon;
    meta["symmetric"] = l.symmetric;
    meta["max_asymmetry"] = max_asymmetry(l.matrix);
    report["lagged"] = meta;
    outputs.push_back("lagged.csv");
  }
  if (a.powermap > 0.0) {
    const PowerMapped pm = power_map(c.matrix, a.powermap);
    io::write_matrix_csv(dir / "powermapped.csv", pm.matrix);
    outputs.push_back("powermapped.csv");
    json p;
    p["q"] = pm.q;
    p["alpha"] = pm.alpha;
    const EmergingSpectrum es = emerging_spectrum(c.matrix, sp.t(), pm.alpha);
    p["zero_modes"] = es.zero_modes;
    p["warnings"] = es.warnings;
    if (es.emerging.size() > 0) {
      p["emerging"] = std::vector<double>(es.emerging.data(), es.emerging.data() + es.emerging.size());
      p["emerging_range"] = {es.emerging.minCoeff(), es.emerging.maxCoeff()};
    }
    report["powermap"] = p;
  }
  io::open_output(dir / "report.json") << report.dump(2) << '\n';
  write_manifest(sub, a.common, outputs);
  std::printf("N=%lld T=%lld: %lld eigenvalues above the MP edge %.6g\n", static_cast<long long>(sp.n()),
              static_cast<long long>(sp.t()), static_cast<long long>((eig.array() > hi).count()), hi);
  return 0;
}

// --- fluct ------------------------------------------------------------------

struct FluctArgs {
  Common common;
  std::string spectra;
  std::string density;
  double kappa = 0.0, sigma = 1.0;
  std::string window;
  std::string r = "1:10:1";
  int bootstrap = 200;
  double zero_mode_weight = 0.0;
};

int run_fluct(const CLI::App* sub, const FluctArgs& a) {
  const auto spectra = cli::read_spectra_csv(a.spectra);
  const auto [lo, hi] = cli::parse_window(a.window);
  std::unique_ptr<CumulativeDensity> cdf;
  if (!a.density.empty()) cdf = std::make_unique<CumulativeDensity>(cumulative_density(cli::read_density_csv(a.density), a.zero_mode_weight));
  else if (a.kappa > 0.0) cdf = std::make_unique<CumulativeDensity>(cumulative_density(mp_prediction(a.sigma, a.kappa)));
  else throw Error(Errc::BadParameters, "give --density or --kappa for the MP reference");

  std::vector<UnfoldedSpectrum> unfolded;
  for (const auto& s : spectra) unfolded.push_back(unfold(s, *cdf, lo, hi));
  NumberVarianceOptions opt;
  opt.bootstrap = a.bootstrap;
  opt.seed = a.common.seed;
  const auto curve = number_variance(unfolded, cli::parse_sweep(a.r), opt);

  const fs::path dir = out_dir(a.common);
  auto out = io::open_output(dir / "number_variance.csv");
  out << "r,sigma2,stderr,goe_reference\n";
  for (std::size_t i = 0; i < curve.r.size(); ++i)
    out << io::fmt(curve.r[i]) << ',' << io::fmt(curve.sigma2[i]) << ',' << io::fmt(curve.standard_error[i]) << ','
        << io::fmt(curve.goe[i]) << '\n';
  double spacing = 0.0;
  bool quality = true;
  for (const auto& u : unfolded) {
    spacing += u.mean_spacing() / static_cast<double>(unfolded.size());
    quality = quality && u.quality_ok();
  }
  json extra;
  extra["window"] = {lo, hi};
  extra["members"] = unfolded.size();
  extra["mean_spacing"] = spacing;
  extra["unfolding_ok"] = quality;
  write_manifest(sub, a.common, {"number_variance.csv"}, extra);
  if (!quality) std::fprintf(stderr, "warning: mean unfolded spacing %.4f is off 1 by more than 10%%\n", spacing);
  std::printf("%zu members, window [%g, %g], mean spacing %.4f\n", unfolded.size(), lo, hi, spacing);
  return 0;
}

// --- powermap ---------------------------------------------------------------

struct PowermapArgs {
  Common common;
  std::string kind = "woe";
  Eigen::Index n = 1024, t = 512;
  double alpha = 1e-3;
  double c = 0.5;
  int members = 100;
  std::string range_check = "none";
};

json moments_json(const MomentSet& m) {
  return json{{"m1", m.m1}, {"m2", m.m2}, {"m01", m.m01}, {"m02", m.m02}, {"m11", m.m11}, {"m12", m.m12}};
}

int run_powermap(const CLI::App* sub, const PowermapArgs& a) {
  EnsembleConfig cfg;
  cfg.n = a.n;
  cfg.t = a.t;
  cfg.members = a.members;
  cfg.seed = a.common.seed;
  double c = 0.0;
  if (a.kind == "woe") {
    cfg.kind = EnsembleKind::Woe;
  } else if (a.kind == "cwoe") {
    cfg.kind = EnsembleKind::Cwoe;
    cfg.model = std::make_shared<const CorrelationModel>(equal_cross(a.n, a.c));
    c = a.c;
  } else {
    throw Error(Errc::BadParameters, "kind must be woe or cwoe");
  }
  if (a.range_check != "none" && a.range_check != "correlation")
    throw Error(Errc::BadParameters, "--range-check must be none or correlation");
  const RangeCheck check = a.range_check == "none" ? RangeCheck::None : RangeCheck::Correlation;
  cfg.validate();

  std::vector<MomentSample> samples(static_cast<std::size_t>(cfg.members));
  Vector emerging;
  parallel_for(samples.size(), workers(a.common), [&](std::size_t i) {
    const Matrix m = sample_member(cfg, static_cast<int>(i));
    samples[i] = member_moments(m, a.t, a.alpha, check);
    if (i == 0) emerging = emerging_spectrum(m, a.t, a.alpha, check).emerging;
  });
  const PowerMapReport r = moment_report(samples, a.n, a.t, a.alpha, c);

  const fs::path dir = out_dir(a.common);
  {
    auto out = io::open_output(dir / "moments.csv");
    out << "member,m1,m2,m01,m02,m11,m12,trace_m1\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto& s = samples[i];
      out << i << ',' << io::fmt(s.m1) << ',' << io::fmt(s.m2) << ',' << io::fmt(s.m01) << ',' << io::fmt(s.m02) << ','
          << io::fmt(s.m11) << ',' << io::fmt(s.m12) << ',' << io::fmt(s.trace_m1) << '\n';
    }
  }
  {
    auto out = io::open_output(dir / "emerging.csv");
    out << "index,delta_lambda\n";
    for (Eigen::Index i = 0; i < emerging.size(); ++i) out << i << ',' << io::fmt(emerging(i)) << '\n';
  }
  json report;
  report["measured"] = moments_json(r.measured);
  report["theory"] = moments_json(r.theory);
  report["measured_trace_m1"] = r.measured_trace_m1;
  report["s"] = r.s;
  report["r_shift"] = r.r_shift;
  report["s_measured"] = r.s_measured;
  report["r_measured"] = r.r_measured;
  report["alpha"] = r.alpha;
  report["n"] = r.n;
  report["t"] = r.t;
  report["kappa"] = r.kappa;
  report["c"] = r.c;
  report["members"] = r.members;
  report["warnings"] = r.warnings;
  io::open_output(dir / "report.json") << report.dump(2) << '\n';
  write_manifest(sub, a.common, {"report.json", "moments.csv", "emerging.csv"});
  std::printf("dm1 %.6g (theory %.6g), dm1(0) %.6g (theory %.6g), %lld emerging\n", r.measured.m1, r.theory.m1,
              r.measured.m01, r.theory.m01, static_cast<long long>(emerging.size()));
  for (const auto& w : r.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  return 0;
}

// --- portfolio --------------------------------------------------------------

struct PortfolioArgs {
  Common common;
  Eigen::Index n = 100;
  int blocks = 5;
  double rho_in = 0.6, rho_out = 0.2;
  double sigma_lo = 0.1, sigma_hi = 0.4;
  std::uint64_t market_seed = 20120901;
  std::string t_sweep = "50:500:25";
  std::string q = "1,1.5";
  int members = 50;
};

int run_portfolio(const CLI::App* sub, const PortfolioArgs& a) {
  if (a.blocks < 1 || a.n % a.blocks != 0) throw Error(Errc::BadDimensions, "n must be a multiple of --blocks");
  MarketSpec spec;
  spec.blocks = a.blocks;
  spec.block_size = static_cast<int>(a.n / a.blocks);
  spec.rho_in = a.rho_in;
  spec.rho_out = a.rho_out;
  spec.sigma_lo = a.sigma_lo;
  spec.sigma_hi = a.sigma_hi;
  spec.seed = a.market_seed;
  const MarketModel market = make_market(spec);
  std::vector<Eigen::Index> ts;
  for (double t : cli::parse_sweep(a.t_sweep)) ts.push_back(static_cast<Eigen::Index>(std::llround(t)));
  const auto study = run_study(market, ts, cli::parse_sweep(a.q), a.members, a.common.seed, workers(a.common));

  const fs::path dir = out_dir(a.common);
  {
    auto out = io::open_output(dir / "study.csv");
    out << "t,q,member,ratio,estimator\n";
    for (const auto& p : study.points)
      out << p.t << ',' << io::fmt(p.q) << ',' << p.member << ',' << (std::isnan(p.ratio) ? "NaN" : io::fmt(p.ratio))
          << ',' << p.estimator << '\n';
  }
  json summary;
  summary["homogeneous_ratio"] = study.homogeneous;
  summary["n"] = a.n;
  json rows = json::array();
  for (const auto& s : study.summary) {
    const auto num = [](double x) { return std::isnan(x) ? json(nullptr) : json(x); };
    rows.push_back({{"t", s.t}, {"q", s.q}, {"estimator", s.estimator}, {"median", num(s.median)},
                    {"lower_quartile", num(s.lower_quartile)}, {"upper_quartile", num(s.upper_quartile)},
                    {"mean", num(s.mean)}, {"valid", s.valid}, {"missing", s.missing}});
  }
  summary["summary"] = rows;
  io::open_output(dir / "summary.json") << summary.dump(2) << '\n';
  write_manifest(sub, a.common, {"study.csv", "summary.json"});
  std::printf("%zu points; homogeneous ratio %.4f\n", study.points.size(), study.homogeneous);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-matrix toolkit for correlation matrices"};
  app.set_version_flag("--version", std::string("rmt ") + kVersion);
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "INI file; options of a subcommand go in its [section], flags override it");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "sample ensemble spectra");
  add_common(s, sim.common);
  s->add_option("--kind", sim.kind, "woe | cwoe | two-channel")->capture_default_str();
  s->add_option("-n,--n", sim.n, "rows (N)")->capture_default_str();
  s->add_option("-t,--t", sim.t, "time horizon (T)");
  s->add_option("-m,--m", sim.m, "second channel size (two-channel)");
  s->add_option("--kappa", sim.kappa, "T/N, used when -t is absent");
  s->add_option("--sigma", sim.sigma, "noise scale")->capture_default_str();
  s->add_option("--model", sim.model, "correlation model spec");
  s->add_option("--members", sim.members, "ensemble size")->capture_default_str();
  s->add_option("--method", sim.method, "two-channel sampler: literal | canonical")->capture_default_str();

  PasturArgs pas;
  auto* p = app.add_subcommand("pastur", "solve for the ensemble-averaged density");
  add_common(p, pas.common);
  p->add_flag("--mp", pas.mp, "Marcenko-Pastur law");
  p->add_flag("--cwoe", pas.cwoe, "correlated Wishart");
  p->add_flag("--two-channel", pas.two_channel, "two-channel cross-correlation");
  p->add_option("--kappa", pas.kappa, "T/N")->capture_default_str();
  p->add_option("--sigma", pas.sigma)->capture_default_str();
  p->add_option("--model", pas.model, "correlation model spec (cwoe)")->capture_default_str();
  p->add_option("-n,--n", pas.n, "model size (cwoe)")->capture_default_str();
  p->add_option("--kn", pas.kn, "N/T")->capture_default_str();
  p->add_option("--km", pas.km, "M/T")->capture_default_str();
  p->add_option("--zeta-from", pas.zeta_from, "partitioned model spec (two-channel)")->capture_default_str();
  p->add_option("--zeta-n", pas.zeta_n, "N used to build the partitioned model")->capture_default_str();
  p->add_option("--points", pas.points, "grid points")->capture_default_str();
  p->add_option("--lo", pas.lo, "grid start")->capture_default_str();
  p->add_option("--hi", pas.hi, "grid end (default 1.2 x support bound)");
  p->add_option("--epsilon", pas.epsilon, "imaginary offset (default 1e-5 x span)");
  p->add_option("--overlay", pas.overlay, "spectra.csv to compare against");

  AnalyzeArgs ana;
  auto* an = app.add_subcommand("analyze", "correlation analysis of a data CSV");
  add_common(an, ana.common);
  an->add_option("path", ana.path, "input CSV")->required();
  an->add_flag("--transposed", ana.transposed, "one row per variable");
  an->add_flag("--skip-first-column", ana.skip_first_column, "drop a leading date column");
  an->add_option("--input", ana.input, "prices | returns")->capture_default_str();
  an->add_option("--lag", ana.lag, "also write the lagged correlation matrix");
  an->add_option("--powermap", ana.powermap, "power-map exponent q");

  FluctArgs flu;
  auto* f = app.add_subcommand("fluct", "number variance of unfolded spectra");
  add_common(f, flu.common);
  f->add_option("--spectra", flu.spectra, "spectra.csv from simulate")->required();
  f->add_option("--density", flu.density, "density.csv from pastur");
  f->add_option("--kappa", flu.kappa, "use the MP law with this T/N instead");
  f->add_option("--sigma", flu.sigma)->capture_default_str();
  f->add_option("--window", flu.window, "lo:hi spectral window")->required();
  f->add_option("--r", flu.r, "interval lengths, lo:hi:step or list")->capture_default_str();
  f->add_option("--bootstrap", flu.bootstrap)->capture_default_str();
  f->add_option("--zero-mode-weight", flu.zero_mode_weight, "point mass at 0 (T < N)")->capture_default_str();

  PowermapArgs pow;
  auto* pm = app.add_subcommand("powermap", "linear-response moments of the power map");
  add_common(pm, pow.common);
  pm->add_option("--kind", pow.kind, "woe | cwoe (equal cross)")->capture_default_str();
  pm->add_option("-n,--n", pow.n)->capture_default_str();
  pm->add_option("-t,--t", pow.t)->capture_default_str();
  pm->add_option("--alpha", pow.alpha, "q - 1")->capture_default_str();
  pm->add_option("--c", pow.c, "equal cross-correlation (cwoe)")->capture_default_str();
  pm->add_option("--members", pow.members)->capture_default_str();
  pm->add_option("--range-check", pow.range_check, "none | correlation")->capture_default_str();

  PortfolioArgs por;
  auto* po = app.add_subcommand("portfolio", "minimal-variance portfolio study");
  add_common(po, por.common);
  po->add_option("-n,--n", por.n)->capture_default_str();
  po->add_option("--blocks", por.blocks)->capture_default_str();
  po->add_option("--rho-in", por.rho_in)->capture_default_str();
  po->add_option("--rho-out", por.rho_out)->capture_default_str();
  po->add_option("--sigma-lo", por.sigma_lo)->capture_default_str();
  po->add_option("--sigma-hi", por.sigma_hi)->capture_default_str();
  po->add_option("--market-seed", por.market_seed)->capture_default_str();
  po->add_option("--t-sweep", por.t_sweep, "lo:hi:step or list")->capture_default_str();
  po->add_option("--q", por.q, "power-map exponents, list or lo:hi:step")->capture_default_str();
  po->add_option("--members", por.members)->capture_default_str();

  // Accept --config after the subcommand name too.
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") {
      const std::string file = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      args.insert(args.begin(), {"--config", file});
      break;
    }
  }
  std::reverse(args.begin(), args.end());
  CLI11_PARSE(app, args);
  try {
    if (s->parsed()) return run_simulate(s, sim);
    if (p->parsed()) return run_pastur(p, pas);
    if (an->parsed()) return run_analyze(an, ana);
    if (f->parsed()) return run_fluct(f, flu);
    if (pm->parsed()) return run_powermap(pm, pow);
    if (po->parsed()) return run_portfolio(po, por);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
