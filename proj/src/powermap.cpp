#include "rmt/powermap.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "rmt/error.hpp"

namespace rmt {

PowerMapped power_map(const Matrix& c, double q, RangeCheck check) {
  if (!(q >= 1.0) || !std::isfinite(q)) {
    std::ostringstream os;
    os << "q=" << q << " (need q >= 1)";
    throw Error(Errc::BadExponent, os.str());
  }
  PowerMapped out{Matrix(c.rows(), c.cols()), q, q - 1.0};
  for (Eigen::Index j = 0; j < c.cols(); ++j) {
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
      const double x = c(i, j);
      if (!std::isfinite(x) || (check == RangeCheck::Correlation && std::abs(x) > 1.0 + 1e-12)) {
        std::ostringstream os;
        os << "entry (" << i << ", " << j << ") = " << x;
        throw Error(Errc::EntryOutOfRange, os.str());
      }
      out.matrix(i, j) = q == 1.0 ? x : std::copysign(std::pow(std::abs(x), q), x);
    }
  }
  return out;
}

EmergingSpectrum emerging_spectrum(const Matrix& c, Eigen::Index t, double alpha, RangeCheck check) {
  if (!(alpha > 0.0)) throw Error(Errc::BadExponent, "alpha must be positive");
  if (c.rows() != c.cols()) throw Error(Errc::DimensionMismatch, "matrix must be square");
  const Eigen::Index n = c.rows();
  EmergingSpectrum out;
  out.base = symmetric_eigenvalues(c);
  out.mapped = symmetric_eigenvalues(power_map(c, 1.0 + alpha, check).matrix);
  out.delta_lambdas = (out.mapped - out.base) / alpha;
  out.zero_modes = t < n ? n - t : 0;
  if (out.zero_modes == 0) out.warnings.push_back("NotSingular: T >= N, the emerging spectrum is empty");
  out.emerging = out.delta_lambdas.head(out.zero_modes);
  out.bulk_corrections = out.delta_lambdas.tail(n - out.zero_modes);
  return out;
}

MomentSample member_moments(const Matrix& c, Eigen::Index t, double alpha, RangeCheck check) {
  if (!(alpha > 0.0)) throw Error(Errc::BadExponent, "alpha must be positive");
  const Eigen::Index n = c.rows();
  const Matrix mapped = power_map(c, 1.0 + alpha, check).matrix;
  const Vector d = symmetric_eigenvalues(mapped) - symmetric_eigenvalues(c);
  const Eigen::Index z = t < n ? n - t : 0;
  const double dn = static_cast<double>(n);
  MomentSample s;
  double s01 = 0.0, s02 = 0.0, s11 = 0.0, s12 = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j < z) {
      s01 += d(j);
      s02 += d(j) * d(j);
    } else {
      s11 += d(j);
      s12 += d(j) * d(j);
    }
  }
  s.m01 = s01 / dn;
  s.m02 = s02 / dn;
  s.m11 = s11 / dn;
  s.m12 = s12 / dn;
  s.m1 = (s01 + s11) / dn;
  s.m2 = (s02 + s12) / dn;
  s.trace_m1 = (mapped.trace() - c.trace()) / dn;
  return s;
}

double powermap_c1() { return std::numbers::egamma + std::numbers::ln2 - 2.0; }

double powermap_c2() { return std::numbers::pi * std::numbers::pi / 2.0 - 4.0; }

double scaling_parameter(double alpha, double t) {
  const double lg = std::log(t) + powermap_c1();
  return -0.5 * alpha * std::sqrt(lg * lg + powermap_c2());
}

MomentSet theory_moments(Eigen::Index n, Eigen::Index t, double alpha, double c) {
  const double dt = static_cast<double>(t);
  const double kappa = dt / static_cast<double>(n);
  const double lg = std::log(dt) + powermap_c1();
  const double s = scaling_parameter(alpha, dt);
  MomentSet m;
  m.m1 = alpha / dt;
  m.m2 = alpha * alpha / (4.0 * kappa) * (lg * lg + powermap_c2());
  if (t >= n) {
    m.m11 = m.m1;
    m.m12 = m.m2;
    return m;
  }
  m.m11 = kappa * m.m1 + (1.0 - c) * s * (1.0 - kappa);
  m.m12 = kappa * m.m2 - kappa * m.m1 * m.m1 + m.m11 * m.m11 / kappa;
  if (c == 0.0) {
    m.m01 = -s * (1.0 - kappa);
    m.m02 = s * s * (1.0 - kappa);
  } else {
    m.m01 = m.m1 - m.m11;
    m.m02 = m.m2 - m.m12;
  }
  return m;
}

PowerMapReport moment_report(const std::vector<MomentSample>& samples, Eigen::Index n, Eigen::Index t,
                             double alpha, double c) {
  if (samples.empty()) throw Error(Errc::BadParameters, "no member samples");
  PowerMapReport r;
  const double k = static_cast<double>(samples.size());
  for (const auto& s : samples) {
    r.measured.m1 += s.m1;
    r.measured.m2 += s.m2;
    r.measured.m01 += s.m01;
    r.measured.m02 += s.m02;
    r.measured.m11 += s.m11;
    r.measured.m12 += s.m12;
    r.measured_trace_m1 += s.trace_m1;
  }
  r.measured.m1 /= k;
  r.measured.m2 /= k;
  r.measured.m01 /= k;
  r.measured.m02 /= k;
  r.measured.m11 /= k;
  r.measured.m12 /= k;
  r.measured_trace_m1 /= k;

  r.alpha = alpha;
  r.n = n;
  r.t = t;
  r.kappa = static_cast<double>(t) / static_cast<double>(n);
  r.c = c;
  r.members = static_cast<int>(samples.size());
  r.theory = theory_moments(n, t, alpha, c);
  r.s = scaling_parameter(alpha, static_cast<double>(t));
  r.r_shift = r.theory.m1 - r.s * (1.0 - c);
  if (t < n) {
    r.s_measured = (r.measured.m11 - r.kappa * r.measured.m1) / ((1.0 - c) * (1.0 - r.kappa));
    r.r_measured = r.measured.m1 - r.s_measured * (1.0 - c);
  }
  if (samples.size() < 10) r.warnings.push_back("FewMembers: fewer than 10 members");
  const auto off = [](double measured, double theory) {
    return std::abs(measured - theory) > 0.2 * std::abs(theory);
  };
  if (off(r.measured.m1, r.theory.m1) || off(r.measured.m2, r.theory.m2)) {
    std::ostringstream os;
    os << "AlphaTooLarge: measured moments deviate from linear response by more than 20% (m1 " << r.measured.m1
       << " vs " << r.theory.m1 << ", m2 " << r.measured.m2 << " vs " << r.theory.m2 << ")";
    r.warnings.push_back(os.str());
  }
  return r;
}

}  // namespace rmt
