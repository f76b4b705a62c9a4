#include "rmt/pastur.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>

#include "rmt/error.hpp"

namespace rmt {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Weighted {
  std::vector<double> value;
  std::vector<double> weight;
};

// Collapses repeated eigenvalues so each distinct value is evaluated once.
Weighted group_spectrum(const Vector& spectrum) {
  std::vector<double> s(spectrum.data(), spectrum.data() + spectrum.size());
  std::sort(s.begin(), s.end());
  Weighted w;
  const double unit = 1.0 / static_cast<double>(s.size());
  for (double x : s) {
    if (!w.value.empty() && std::abs(x - w.value.back()) <= 1e-12 * std::max(1.0, std::abs(x))) {
      w.weight.back() += unit;
    } else {
      w.value.push_back(x);
      w.weight.push_back(unit);
    }
  }
  return w;
}

struct Eval {
  cd f;
  cd df;
  cd aux;
  bool ok = true;
};

// The fixed point x = F(x) is solved either in x = G or, when `scaled`, in
// x = z G, which stays bounded where G has a pole-like 1/z part.
struct Problem {
  std::function<Eval(cd z, cd x, cd aux)> fn;  // F(x), dF/dx, updated branch state
  bool scaled = false;

  cd to_g(cd x, cd z) const { return scaled ? x / z : x; }
  cd to_x(cd g, cd z) const { return scaled ? g * z : g; }
  // Residual in G units.
  double g_residual(double r, cd z) const { return scaled ? r / std::abs(z) : r; }
};

struct Solve {
  cd x;
  cd g;
  cd aux;
  double residual = kInf;  // |F - G| in G units
  bool converged = false;
};

bool physical(cd g) { return g.imag() <= 1e-15 * std::abs(g); }

Solve newton(const Problem& p, cd z, cd x, cd aux, const SolverOptions& opt) {
  // Below tol, or at the rounding floor of the equation once Newton stalls:
  // x carries a relative error eps, which F amplifies by |dF/dx|.
  const auto done = [&](double r, cd xv, cd df) {
    const double floor = 16.0 * std::numeric_limits<double>::epsilon() * std::abs(xv) * std::max(1.0, std::abs(df));
    return p.g_residual(r, z) < opt.tolerance || r <= floor;
  };
  Eval e = p.fn(z, x, aux);
  if (!e.ok) return {x, p.to_g(x, z), aux, kInf, false};
  double res = std::abs(e.f - x);
  for (int it = 0; it < opt.max_iterations && !(p.g_residual(res, z) < opt.tolerance); ++it) {
    const cd step = (e.f - x) / (e.df - 1.0);
    double t = 1.0;
    bool moved = false;
    for (int k = 0; k < 40; ++k, t *= 0.5) {
      const cd xn = x - t * step;
      if (p.to_g(xn, z).imag() > 0.0) continue;  // the physical root has Im G < 0
      const Eval en = p.fn(z, xn, e.aux);
      if (!en.ok) continue;
      const double rn = std::abs(en.f - xn);
      if (rn < res) {
        x = xn;
        e = en;
        res = rn;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return {x, p.to_g(x, z), e.aux, p.g_residual(res, z), done(res, x, e.df)};
}

// Follows the root down from far above the real axis, where G ~ 1/z.
Solve homotopy(const Problem& p, double lambda, double eps, double span, cd aux0, const SolverOptions& opt) {
  const double top = std::max({1.0, span, std::abs(lambda)});
  constexpr int steps = 120;
  cd x = p.to_x(1.0 / cd(lambda, top), cd(lambda, top));
  cd aux = aux0;
  Solve s{};
  for (int k = 0; k <= steps; ++k) {
    const double eta = top * std::pow(eps / top, static_cast<double>(k) / steps);
    s = newton(p, cd(lambda, eta), x, aux, opt);
    if (!s.converged) return s;
    x = s.x;
    aux = s.aux;
  }
  return s;
}

void check_grid(const Vector& grid) {
  if (grid.size() < 1) throw Error(Errc::BadParameters, "empty grid");
  for (Eigen::Index i = 1; i < grid.size(); ++i)
    if (!(grid(i) > grid(i - 1))) throw Error(Errc::BadParameters, "grid must be strictly increasing");
}

double resolve_epsilon(const Vector& grid, const SolverOptions& opt) {
  if (opt.epsilon > 0.0) return opt.epsilon;
  const double span = grid.size() > 1 ? grid(grid.size() - 1) - grid(0) : std::max(1.0, std::abs(grid(0)));
  return 1e-5 * span;
}

ResolventSolution make_solution(const Vector& grid, double eps) {
  ResolventSolution s;
  const Eigen::Index n = grid.size();
  s.grid = grid;
  s.re_g = s.im_g = s.rho = s.pv = s.residual = Vector::Zero(n);
  s.epsilon = eps;
  s.status.assign(static_cast<std::size_t>(n), PointStatus::NoConvergence);
  return s;
}

void store(ResolventSolution& s, Eigen::Index i, cd g, double residual, PointStatus st) {
  s.re_g(i) = g.real();
  s.im_g(i) = g.imag();
  s.pv(i) = g.real();
  s.rho(i) = -g.imag() / kPi;
  s.residual(i) = residual;
  s.status[static_cast<std::size_t>(i)] = st;
}

ResolventSolution sweep(const Problem& fn, const Vector& grid, cd aux0, PointStatus unphysical,
                        const SolverOptions& opt) {
  check_grid(grid);
  const double eps = resolve_epsilon(grid, opt);
  ResolventSolution out = make_solution(grid, eps);
  const Eigen::Index n = grid.size();
  const double span = grid(n - 1) - grid(0);
  bool first = true;
  cd x_prev, aux_prev = aux0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index i = opt.reverse ? k : n - 1 - k;
    const cd z(grid(i), eps);
    Solve s{};
    if (first) {
      s = newton(fn, z, fn.to_x(1.0 / z, z), aux0, opt);
    } else {
      s = newton(fn, z, x_prev, aux_prev, opt);
    }
    if (!s.converged || !physical(s.g)) {
      const Solve h = homotopy(fn, grid(i), eps, span, aux0, opt);
      if (h.converged && (physical(h.g) || !s.converged)) s = h;
    }
    PointStatus st = PointStatus::Converged;
    if (!s.converged) st = PointStatus::NoConvergence;
    else if (!physical(s.g)) st = unphysical;
    store(out, i, s.g, s.residual, st);
    if (st == PointStatus::Converged) {
      x_prev = s.x;
      aux_prev = s.aux;
      first = false;
    }
  }
  return out;
}

void check_kappa(double kappa, double sigma) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw Error(Errc::BadParameters, "kappa must be positive");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error(Errc::BadParameters, "sigma must be positive");
}

void check_two_channel(double kn, double km) {
  if (!(kn > 0.0 && kn <= km && km <= 1.0))
    throw Error(Errc::BadParameters, "need 0 < kappa_N <= kappa_M <= 1");
}

// Complex roots of a3 w^3 + a2 w^2 + a1 w + a0, polished by Newton.
std::array<cd, 3> cubic_roots(cd a3, cd a2, cd a1, cd a0) {
  const cd b = a2 / a3, c = a1 / a3, d = a0 / a3;
  const cd p = c - b * b / 3.0;
  const cd q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  const cd disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  cd u = std::pow(-q / 2.0 + disc, 1.0 / 3.0);
  if (std::abs(u) < 1e-300) u = std::pow(-q / 2.0 - disc, 1.0 / 3.0);
  const cd omega(-0.5, std::sqrt(3.0) / 2.0);
  std::array<cd, 3> roots;
  for (int k = 0; k < 3; ++k) {
    const cd uk = u * std::pow(omega, k);
    const cd vk = std::abs(uk) > 1e-300 ? -p / (3.0 * uk) : cd(0.0);
    cd w = uk + vk - b / 3.0;
    for (int it = 0; it < 4; ++it) {
      const cd f = ((w + b) * w + c) * w + d;
      const cd df = (3.0 * w + 2.0 * b) * w + c;
      if (std::abs(df) < 1e-300) break;
      w -= f / df;
    }
    roots[static_cast<std::size_t>(k)] = w;
  }
  return roots;
}

}  // namespace

std::string_view to_string(PointStatus status) {
  switch (status) {
    case PointStatus::Converged: return "converged";
    case PointStatus::NoConvergence: return "no_convergence";
    case PointStatus::BranchAmbiguity: return "branch_ambiguity";
  }
  return "unknown";
}

std::size_t ResolventSolution::failures() const {
  return static_cast<std::size_t>(
      std::count_if(status.begin(), status.end(), [](PointStatus s) { return s != PointStatus::Converged; }));
}

double ResolventSolution::mass() const {
  double m = 0.0;
  for (Eigen::Index i = 1; i < grid.size(); ++i) m += 0.5 * (rho(i) + rho(i - 1)) * (grid(i) - grid(i - 1));
  return m;
}

double ResolventSolution::density_at(double lambda) const {
  const Eigen::Index n = grid.size();
  if (n == 0 || lambda < grid(0) || lambda > grid(n - 1)) return 0.0;
  const auto* begin = grid.data();
  const auto* it = std::upper_bound(begin, begin + n, lambda);
  const Eigen::Index hi = std::min<Eigen::Index>(n - 1, it - begin);
  const Eigen::Index lo = std::max<Eigen::Index>(0, hi - 1);
  if (hi == lo) return rho(lo);
  const double t = (lambda - grid(lo)) / (grid(hi) - grid(lo));
  return (1.0 - t) * rho(lo) + t * rho(hi);
}

Vector midpoint_grid(double lo, double hi, int points) {
  if (points < 1 || !(hi > lo)) throw Error(Errc::BadParameters, "grid needs hi > lo and at least one point");
  const double h = (hi - lo) / points;
  Vector g(points);
  for (int i = 0; i < points; ++i) g(i) = lo + (i + 0.5) * h;
  return g;
}

std::pair<double, double> mp_edges(double sigma, double kappa) {
  check_kappa(kappa, sigma);
  const double r = 1.0 / std::sqrt(kappa);
  const double s2 = sigma * sigma;
  return {s2 * (r - 1.0) * (r - 1.0), s2 * (r + 1.0) * (r + 1.0)};
}

double mp_density(double lambda, double sigma, double kappa) {
  const auto [lo, hi] = mp_edges(sigma, kappa);
  if (!(lambda > lo && lambda < hi) || lambda <= 0.0) return 0.0;
  return kappa * std::sqrt((hi - lambda) * (lambda - lo)) / (2.0 * kPi * sigma * sigma * lambda);
}

namespace {

void check_xi_spectrum(const Vector& xi_spectrum) {
  if (xi_spectrum.size() == 0) throw Error(Errc::BadSpectrum, "empty spectrum");
  for (Eigen::Index j = 0; j < xi_spectrum.size(); ++j)
    if (!(xi_spectrum(j) > 0.0) || !std::isfinite(xi_spectrum(j)))
      throw Error(Errc::BadSpectrum, "eigenvalue " + std::to_string(j) + " is not positive");
}

}  // namespace

double cwoe_support_bound(const Vector& xi_spectrum, double kappa, double sigma) {
  check_kappa(kappa, sigma);
  check_xi_spectrum(xi_spectrum);
  const double r = 1.0 + 1.0 / std::sqrt(kappa);
  return sigma * sigma * xi_spectrum.maxCoeff() * r * r;
}

double two_channel_support_bound(double kappa_n, double kappa_m) {
  const double a = 1.0 + std::sqrt(kappa_n), b = 1.0 + std::sqrt(kappa_m);
  return a * a * b * b;
}

ResolventSolution solve_cwoe(const Vector& xi_spectrum, double kappa, double sigma, const Vector& grid,
                             const SolverOptions& options) {
  check_kappa(kappa, sigma);
  check_xi_spectrum(xi_spectrum);
  const Weighted w = group_spectrum(xi_spectrum);
  const double s2k = sigma * sigma / kappa;
  Problem fn;
  fn.scaled = true;
  fn.fn = [&w, s2k, kappa](cd z, cd y, cd aux) {
    const cd a = s2k * (kappa - 1.0 + y);
    cd f = 0.0, df = 0.0;
    for (std::size_t j = 0; j < w.value.size(); ++j) {
      const cd inv = 1.0 / (z - a * w.value[j]);
      f += w.weight[j] * z * inv;
      df += w.weight[j] * w.value[j] * s2k * z * inv * inv;
    }
    return Eval{f, df, aux, std::isfinite(std::abs(f))};
  };
  return sweep(fn, grid, cd(1.0), PointStatus::NoConvergence, options);
}

namespace {

template <class Solver>
ResolventSolution auto_extend(double upper, const SolverOptions& options, Solver&& solve) {
  ResolventSolution s;
  for (int round = 0; round < 6; ++round) {
    s = solve(midpoint_grid(0.0, 1.2 * upper, 2000), options);
    if (!(s.rho(s.size() - 1) > 1e-6)) break;
    upper *= 2.0;
  }
  return s;
}

}  // namespace

ResolventSolution solve_cwoe(const Vector& xi_spectrum, double kappa, double sigma, const SolverOptions& options) {
  return auto_extend(cwoe_support_bound(xi_spectrum, kappa, sigma), options,
                     [&](const Vector& grid, const SolverOptions& o) {
                       return solve_cwoe(xi_spectrum, kappa, sigma, grid, o);
                     });
}

ResolventSolution solve_two_channel(const Vector& zeta_spectrum, double kappa_n, double kappa_m, const Vector& grid,
                                    const SolverOptions& options) {
  check_two_channel(kappa_n, kappa_m);
  if (zeta_spectrum.size() == 0) throw Error(Errc::BadSpectrum, "empty zeta spectrum");
  for (Eigen::Index j = 0; j < zeta_spectrum.size(); ++j)
    if (!(zeta_spectrum(j) >= -1e-10 && zeta_spectrum(j) <= 1.0 + 1e-10))
      throw Error(Errc::BadSpectrum, "zeta eigenvalue " + std::to_string(j) + " outside [0, 1]");
  const Weighted w = group_spectrum(zeta_spectrum.cwiseMax(0.0).cwiseMin(1.0));
  const double kn = kappa_n, km = kappa_m;
  Problem fn;
  fn.fn = [&w, kn, km](cd z, cd g, cd d_ref) {
    const cd u = 1.0 + kn * (z * g - 1.0);
    const cd y = km + (u - 1.0) * (km + u);
    const cd root = std::sqrt(1.0 + 4.0 * u * kn * y * g);
    const cd d1 = (1.0 + root) / (2.0 * u), d2 = (1.0 - root) / (2.0 * u);
    const cd d = std::abs(d1 - d_ref) <= std::abs(d2 - d_ref) ? d1 : d2;
    const cd du = kn * z;
    const cd dy = (km + 2.0 * u - 1.0) * du;
    const cd denom_d = 2.0 * u * d - 1.0;
    if (std::abs(denom_d) < 1e-300 || std::abs(d) < 1e-300) return Eval{0.0, 0.0, d_ref, false};
    const cd dd = (kn * (dy * g + y) - d * d * du) / denom_d;
    const cd y2 = y / d;
    const cd dy2 = (dy * d - y * dd) / (d * d);
    const cd q = kn * g * u / d;
    const cd dq = kn * ((u + g * du) * d - g * u * dd) / (d * d);
    const cd one_q = 1.0 - q;
    const cd y1 = u * u / one_q;
    const cd dy1 = (2.0 * u * du * one_q + u * u * dq) / (one_q * one_q);
    cd f = 0.0, df = 0.0;
    for (std::size_t j = 0; j < w.value.size(); ++j) {
      const cd inv = 1.0 / (z - w.value[j] * y1 - y2);
      f += w.weight[j] * inv;
      df += w.weight[j] * (w.value[j] * dy1 + dy2) * inv * inv;
    }
    return Eval{f, df, d, std::isfinite(std::abs(f)) && std::isfinite(std::abs(df))};
  };
  return sweep(fn, grid, cd(1.0), PointStatus::BranchAmbiguity, options);
}

ResolventSolution solve_two_channel(const Vector& zeta_spectrum, double kappa_n, double kappa_m,
                                    const SolverOptions& options) {
  return auto_extend(two_channel_support_bound(kappa_n, kappa_m) * (1.0 + zeta_spectrum.maxCoeff() / kappa_m),
                     options, [&](const Vector& grid, const SolverOptions& o) {
                       return solve_two_channel(zeta_spectrum, kappa_n, kappa_m, grid, o);
                     });
}

ResolventSolution cubic_null(double kappa_n, double kappa_m, const Vector& grid, double epsilon) {
  check_two_channel(kappa_n, kappa_m);
  check_grid(grid);
  SolverOptions opt;
  opt.epsilon = epsilon;
  const double eps = resolve_epsilon(grid, opt);
  ResolventSolution out = make_solution(grid, eps);
  const double kn = kappa_n, km = kappa_m;
  cd g_ref;
  for (Eigen::Index i = grid.size() - 1; i >= 0; --i) {
    const cd z(grid(i), eps);
    if (i == grid.size() - 1) g_ref = 1.0 / z;
    const auto roots = cubic_roots(kn * kn, kn * kn + kn * (1.0 + km), kn * (1.0 + km) + km - z, km);
    cd best;
    double best_dist = kInf;
    int admissible = 0;
    for (const cd& w : roots) {
      const cd g = (w + 1.0) / z;
      if (!physical(g)) continue;
      ++admissible;
      const double dist = std::abs(g - g_ref);
      if (dist < best_dist) {
        best_dist = dist;
        best = g;
      }
    }
    if (admissible == 0) {
      store(out, i, g_ref, kInf, PointStatus::BranchAmbiguity);
      continue;
    }
    const cd w = z * best - 1.0;
    const double residual = std::abs((kn * w + 1.0) * (kn * w + km) * (w + 1.0) - z * w);
    store(out, i, best, residual, PointStatus::Converged);
    g_ref = best;
  }
  return out;
}

Vector pv_derivative(const ResolventSolution& solution) {
  const Eigen::Index n = solution.size();
  if (n < 3) throw Error(Errc::GridTooCoarse, "need at least 3 grid points, got " + std::to_string(n));
  const Vector& x = solution.grid;
  const Vector& p = solution.pv;
  Vector dp(n);
  dp(0) = (p(1) - p(0)) / (x(1) - x(0));
  dp(n - 1) = (p(n - 1) - p(n - 2)) / (x(n - 1) - x(n - 2));
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    const double h0 = x(i) - x(i - 1), h1 = x(i + 1) - x(i);
    dp(i) = (-h1 / (h0 * (h0 + h1))) * p(i - 1) + ((h1 - h0) / (h0 * h1)) * p(i) +
            (h0 / (h1 * (h0 + h1))) * p(i + 1);
  }
  return dp;
}

Vector comparison_function(const ResolventSolution& solution, double kappa) {
  const Vector dp = pv_derivative(solution);
  const Vector& x = solution.grid;
  Vector phi(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double r = solution.rho(i);
    phi(i) = 2.0 * kPi * r * r / ((1.0 - kappa) / (x(i) * x(i)) - dp(i));
  }
  return phi;
}

double DensityPrediction::continuous(double lambda) const {
  if (!(lambda > lower && lambda < upper) || lambda <= 0.0) return 0.0;
  return kappa * std::sqrt((upper - lambda) * (lambda - lower)) / (2.0 * kPi * scale * lambda);
}

double DensityPrediction::total_mass() const {
  double m = std::min(1.0, kappa) + zero_mode_weight;
  for (const auto& d : deltas) m += d.weight;
  return m;
}

DensityPrediction mp_prediction(double sigma, double kappa) {
  const auto [lo, hi] = mp_edges(sigma, kappa);
  DensityPrediction p;
  p.lower = lo;
  p.upper = hi;
  p.scale = sigma * sigma;
  p.kappa = kappa;
  p.zero_mode_weight = std::max(0.0, 1.0 - kappa);
  return p;
}

DensityPrediction equal_cross_density(Eigen::Index n, double c, double kappa) {
  if (!(c > 0.0 && c < 1.0)) throw Error(Errc::BadCoefficient, "coefficient must lie in (0, 1)");
  if (n < 1) throw Error(Errc::BadDimensions, "N must be positive");
  DensityPrediction p = mp_prediction(std::sqrt(1.0 - c), kappa);
  const double nc = static_cast<double>(n) * c;
  if (c >= 1.0 / (static_cast<double>(n) * std::sqrt(kappa)))
    p.deltas.push_back({(nc + 1.0 - c) * (nc * kappa + 1.0 - c) / (nc * kappa), 1.0 / static_cast<double>(n)});
  return p;
}

}  // namespace rmt
