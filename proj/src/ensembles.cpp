#include "rmt/ensembles.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "rmt/error.hpp"
#include "rmt/rng.hpp"

namespace rmt {

namespace {

// Stream tags keep the draws of different uses of one (seed, member) apart.
constexpr std::uint64_t kMatrixStream = 0;
constexpr std::uint64_t kIdentityStream = 7;

// Combined channel transforms for the literal two-channel sampler:
// A = xi_aa^{-1/2} [xi^{1/2} Z]_top = transform_a Z, likewise for B.
struct TwoChannelPlan {
  Matrix transform_a;
  Matrix transform_b;
  Vector canonical;
};

TwoChannelPlan make_plan(const EnsembleConfig& config) {
  const auto& model = *config.partitioned;
  TwoChannelPlan plan;
  if (config.method == TwoChannelMethod::Canonical) {
    plan.canonical = model.canonical_correlations();
  } else if (!model.is_null()) {
    const Eigen::Index n = model.n();
    const Eigen::Index m = model.m();
    plan.transform_a = model.xi_aa().inv_sqrt() * model.full_sqrt().topRows(n);
    plan.transform_b = model.xi_bb().inv_sqrt() * model.full_sqrt().bottomRows(m);
  }
  return plan;
}

Matrix draw_literal(const EnsembleConfig& config, const TwoChannelPlan& plan, int member) {
  const Eigen::Index n = config.n, m = config.m, t = config.t;
  Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(member), kMatrixStream));
  Matrix z(n + m, t);
  rng.fill_normal(z, config.sigma);
  Matrix x;
  if (config.partitioned->is_null()) {
    x.noalias() = z.topRows(n) * z.bottomRows(m).transpose();
  } else {
    const Matrix a = plan.transform_a * z;
    const Matrix b = plan.transform_b * z;
    x.noalias() = a * b.transpose();
  }
  const double t2 = static_cast<double>(t) * static_cast<double>(t);
  return scaled_gram(x, 1.0 / t2);
}

Matrix draw_canonical(const EnsembleConfig& config, const TwoChannelPlan& plan, int member) {
  const Eigen::Index n = config.n, m = config.m, t = config.t;
  Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(member), kMatrixStream));
  // Bartlett factor of a Wishart_N(I, T) matrix.
  Matrix l = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    l(i, i) = std::sqrt(rng.chi_square(static_cast<double>(t - i)));
    for (Eigen::Index j = 0; j < i; ++j) l(i, j) = rng.normal();
  }
  Matrix g1(n, n);
  rng.fill_normal(g1);
  Matrix g2(n, m - n);
  rng.fill_normal(g2);

  Matrix k(n, m);
  const Vector& s = plan.canonical;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double r = std::sqrt(std::max(0.0, 1.0 - s(j) * s(j)));
    k.col(j) = l.row(j).transpose() * s(j) + g1.col(j) * r;
  }
  k.rightCols(m - n) = g2;
  Matrix x = l.triangularView<Eigen::Lower>() * k;
  const double s2 = config.sigma * config.sigma;
  x *= s2;
  const double t2 = static_cast<double>(t) * static_cast<double>(t);
  return scaled_gram(x, 1.0 / t2);
}

Matrix draw_two_channel(const EnsembleConfig& config, const TwoChannelPlan& plan, int member) {
  return config.method == TwoChannelMethod::Canonical ? draw_canonical(config, plan, member)
                                                      : draw_literal(config, plan, member);
}

void check_member(const EnsembleConfig& config, int member) {
  if (member < 0) throw Error(Errc::BadParameters, "member index must be non-negative");
  (void)config;
}

}  // namespace

std::string to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::Woe: return "woe";
    case EnsembleKind::Cwoe: return "cwoe";
    case EnsembleKind::TwoChannel: return "two-channel";
  }
  return "unknown";
}

std::string to_string(TwoChannelMethod method) {
  return method == TwoChannelMethod::Canonical ? "canonical" : "literal";
}

void EnsembleConfig::validate() const {
  if (n < 1 || t < 1) throw Error(Errc::BadDimensions, "need N >= 1 and T >= 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error(Errc::BadParameters, "sigma must be positive");
  if (members < 1) throw Error(Errc::BadParameters, "members must be >= 1");
  switch (kind) {
    case EnsembleKind::Woe:
      if (model && !model->is_identity())
        throw Error(Errc::BadParameters, "WOE takes no correlation model (or the identity)");
      break;
    case EnsembleKind::Cwoe:
      if (!model) throw Error(Errc::BadParameters, "CWOE needs a correlation model");
      if (model->n() != n)
        throw Error(Errc::DimensionMismatch, "model is " + std::to_string(model->n()) + "-dimensional, N=" +
                                                 std::to_string(n));
      break;
    case EnsembleKind::TwoChannel:
      if (!partitioned) throw Error(Errc::BadParameters, "two-channel ensemble needs a partitioned model");
      if (partitioned->n() != n || partitioned->m() != m)
        throw Error(Errc::DimensionMismatch, "partitioned model dimensions do not match N, M");
      if (!(t >= m && m >= n)) throw Error(Errc::BadDimensions, "two-channel ensemble needs T >= M >= N");
      break;
  }
}

std::string EnsembleConfig::fingerprint() const {
  std::ostringstream os;
  os.precision(17);
  os << "kind=" << to_string(kind) << ";n=" << n << ";t=" << t;
  if (kind == EnsembleKind::TwoChannel) os << ";m=" << m << ";method=" << to_string(method);
  os << ";sigma=" << sigma;
  if (kind == EnsembleKind::Cwoe && model) os << ";model=" << model->name();
  if (kind == EnsembleKind::TwoChannel && partitioned) os << ";model=" << partitioned->name();
  os << ";members=" << members << ";seed=" << seed;
  return os.str();
}

Matrix sample_woe(const EnsembleConfig& config, int member) {
  config.validate();
  check_member(config, member);
  Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(member), kMatrixStream));
  Matrix a(config.n, config.t);
  rng.fill_normal(a, config.sigma);
  return scaled_gram(a, 1.0 / static_cast<double>(config.t));
}

Matrix sample_cwoe(const EnsembleConfig& config, int member) {
  config.validate();
  check_member(config, member);
  Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(member), kMatrixStream));
  Matrix b(config.n, config.t);
  rng.fill_normal(b, config.sigma);
  if (config.model->is_identity()) return scaled_gram(b, 1.0 / static_cast<double>(config.t));
  const Matrix x = config.model->sqrt() * b;
  return scaled_gram(x, 1.0 / static_cast<double>(config.t));
}

Matrix sample_two_channel(const EnsembleConfig& config, int member) {
  config.validate();
  check_member(config, member);
  return draw_two_channel(config, make_plan(config), member);
}

Matrix sample_member(const EnsembleConfig& config, int member) {
  switch (config.kind) {
    case EnsembleKind::Woe: return sample_woe(config, member);
    case EnsembleKind::Cwoe: return sample_cwoe(config, member);
    case EnsembleKind::TwoChannel: return sample_two_channel(config, member);
  }
  throw Error(Errc::BadParameters, "unknown ensemble kind");
}

SpectrumResult sample_spectrum(const EnsembleConfig& config, int member) {
  return {symmetric_eigenvalues(sample_member(config, member)), config.fingerprint(), member};
}

std::vector<SpectrumResult> sample_spectra(const EnsembleConfig& config, int workers) {
  config.validate();
  std::optional<TwoChannelPlan> plan;
  if (config.kind == EnsembleKind::TwoChannel) plan = make_plan(config);
  const std::string fp = config.fingerprint();
  std::vector<SpectrumResult> out(static_cast<std::size_t>(config.members));
  parallel_for(out.size(), workers, [&](std::size_t i) {
    const int member = static_cast<int>(i);
    Matrix c = plan ? draw_two_channel(config, *plan, member) : sample_member(config, member);
    out[i] = {symmetric_eigenvalues(c), fp, member};
  });
  return out;
}

IdentityCheck verify_identity(int which, const Matrix& phi, const Matrix& psi, const EnsembleConfig& config) {
  const Eigen::Index n = config.n, t = config.t;
  if (n < 1 || t < 1 || config.members < 2)
    throw Error(Errc::BadParameters, "identity check needs N, T >= 1 and at least 2 members");
  auto expect = [](const Matrix& x, Eigen::Index r, Eigen::Index c, const char* what) {
    if (x.rows() != r || x.cols() != c)
      throw Error(Errc::DimensionMismatch, std::string(what) + " is " + std::to_string(x.rows()) + "x" +
                                               std::to_string(x.cols()) + ", expected " + std::to_string(r) +
                                               "x" + std::to_string(c));
  };
  const double s2 = config.sigma * config.sigma;
  const double dn = static_cast<double>(n), dt = static_cast<double>(t);
  double analytic = 0.0;
  switch (which) {
    case 1:
      expect(phi, t, t, "Phi");
      expect(psi, n, n, "Psi");
      analytic = s2 * (phi.trace() / dt) * (psi.trace() / dn);
      break;
    case 2:
      expect(phi, t, n, "Phi");
      expect(psi, t, n, "Psi");
      analytic = s2 * (phi.transpose() * psi).trace() / dn;
      break;
    case 3:
      expect(phi, t, n, "Phi");
      expect(psi, n, t, "Psi");
      analytic = s2 / dn * (psi * phi).trace() / dn;
      break;
    case 4:
      expect(phi, t, n, "Phi");
      expect(psi, t, n, "Psi");
      analytic = s2 / dn * (psi.transpose() * phi).trace() / dn;
      break;
    default: throw Error(Errc::BadParameters, "identity index must be 1..4");
  }

  std::vector<double> values(static_cast<std::size_t>(config.members));
  for (int k = 0; k < config.members; ++k) {
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(k), kIdentityStream));
    Matrix b(n, t);
    rng.fill_normal(b, config.sigma);
    double v = 0.0;
    switch (which) {
      case 1: v = (b * phi * b.transpose() * psi).trace() / (dt * dn); break;
      case 2: v = (b * phi * b * psi).trace() / dn; break;
      case 3: v = ((b * phi).trace() / dn) * ((psi * b.transpose()).trace() / dn); break;
      case 4: v = ((b * phi).trace() / dn) * ((b * psi).trace() / dn); break;
    }
    values[static_cast<std::size_t>(k)] = v;
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size() - 1);
  return {mean, analytic, std::sqrt(var / static_cast<double>(values.size()))};
}

}  // namespace rmt
