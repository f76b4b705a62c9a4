#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "rmt/linalg.hpp"

namespace rmt {

enum class PointStatus : std::uint8_t { Converged, NoConvergence, BranchAmbiguity };

std::string_view to_string(PointStatus status);

/// Resolvent G(lambda + i eps) on a grid. rho = -Im G / pi, pv = Re G.
struct ResolventSolution {
  Vector grid;  // strictly increasing
  Vector re_g;
  Vector im_g;
  Vector rho;
  Vector pv;
  Vector residual;  // |F(G, z) - G|
  double epsilon = 0.0;
  std::vector<PointStatus> status;

  Eigen::Index size() const { return grid.size(); }
  std::size_t failures() const;
  bool all_converged() const { return failures() == 0; }
  /// Trapezoid integral of rho over the grid.
  double mass() const;
  /// Linear interpolation of rho; 0 outside the grid.
  double density_at(double lambda) const;
};

struct SolverOptions {
  double epsilon = 0.0;  // <= 0 selects 1e-5 * grid span
  int max_iterations = 500;
  double tolerance = 1e-12;
  bool reverse = false;  // sweep upward from the smallest grid point
};

/// `points` cell midpoints of [lo, hi].
Vector midpoint_grid(double lo, double hi, int points);

std::pair<double, double> mp_edges(double sigma, double kappa);

/// Marcenko-Pastur density (continuous part only; for kappa < 1 there is an
/// extra atom of weight 1 - kappa at zero).
double mp_density(double lambda, double sigma, double kappa);

/// sigma^2 xi_max (1 + kappa^{-1/2})^2, an upper bound on the CWOE support.
double cwoe_support_bound(const Vector& xi_spectrum, double kappa, double sigma);

/// (1 + sqrt(kn))^2 (1 + sqrt(km))^2.
double two_channel_support_bound(double kappa_n, double kappa_m);

/// Pastur equation G = <1 / (z - (sigma^2/kappa)(kappa - 1 + z G) xi)> by
/// Newton continuation from the top of the grid, started at G = 1/z.
ResolventSolution solve_cwoe(const Vector& xi_spectrum, double kappa, double sigma, const Vector& grid,
                             const SolverOptions& options = {});

/// Same on the default grid: 2000 midpoints of [0, 1.2 * support bound],
/// widened while rho at the top edge exceeds 1e-6.
ResolventSolution solve_cwoe(const Vector& xi_spectrum, double kappa, double sigma,
                             const SolverOptions& options = {});

/// Two-channel equation G = <1 / (z - zeta Y1 - Y2)>. The inner pair (g, Y2)
/// is eliminated through D = 1 - kn g, which solves u D^2 - D - kn Y G = 0
/// with u = 1 + kn (z G - 1); the root is tracked continuously from D = 1.
ResolventSolution solve_two_channel(const Vector& zeta_spectrum, double kappa_n, double kappa_m, const Vector& grid,
                                    const SolverOptions& options = {});

ResolventSolution solve_two_channel(const Vector& zeta_spectrum, double kappa_n, double kappa_m,
                                    const SolverOptions& options = {});

/// zeta = 0 in closed form: with w = z G - 1,
/// (kn w + 1)(kn w + km)(w + 1) = z w.
ResolventSolution cubic_null(double kappa_n, double kappa_m, const Vector& grid, double epsilon = 0.0);

/// dP/dlambda by second-order central differences on a non-uniform grid,
/// one-sided at the ends. Throws GridTooCoarse below 3 points.
Vector pv_derivative(const ResolventSolution& solution);

/// Phi = 2 pi rho^2 / ((1 - kappa) / lambda^2 - dP/dlambda), dP by central
/// differences on the (possibly non-uniform) grid. Signed.
Vector comparison_function(const ResolventSolution& solution, double kappa);

struct DeltaComponent {
  double position = 0.0;
  double weight = 0.0;
};

/// Closed-form density: MP-shaped continuous part with scale sigma^2 plus
/// point masses.
struct DensityPrediction {
  double lower = 0.0;
  double upper = 0.0;
  double scale = 1.0;
  double kappa = 1.0;
  std::vector<DeltaComponent> deltas;
  double zero_mode_weight = 0.0;

  double continuous(double lambda) const;
  double total_mass() const;
};

DensityPrediction mp_prediction(double sigma, double kappa);

/// Equal cross-correlation CWOE: bulk with scale 1 - c, plus the separated
/// eigenvalue (Nc + 1 - c)(Nc kappa + 1 - c)/(Nc kappa) of weight 1/N when
/// c >= 1/(N sqrt(kappa)).
DensityPrediction equal_cross_density(Eigen::Index n, double c, double kappa);

}  // namespace rmt
