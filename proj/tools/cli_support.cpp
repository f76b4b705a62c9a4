#include "cli_support.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "rmt/error.hpp"
#include "rmt/io.hpp"

namespace rmt::cli {

double ModelSpec::number(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end()) throw Error(Errc::ParseError, "model '" + name + "' needs " + key + "=");
  return io::parse_double(it->second, name + ":" + key);
}

double ModelSpec::number(const std::string& key, double fallback) const {
  return params.count(key) ? number(key) : fallback;
}

ModelSpec parse_model_spec(const std::string& text) {
  ModelSpec spec;
  const auto colon = text.find(':');
  spec.name = text.substr(0, colon);
  if (spec.name.empty()) throw Error(Errc::ParseError, "empty model spec");
  if (colon == std::string::npos) return spec;
  const std::string rest = text.substr(colon + 1);
  if (spec.name == "file") {
    spec.params["path"] = rest.rfind("path=", 0) == 0 ? rest.substr(5) : rest;
    return spec;
  }
  for (const auto& item : io::split_csv_line(rest)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(Errc::ParseError, "expected key=value in '" + item + "'");
    spec.params[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return spec;
}

CorrelationModel make_correlation_model(const std::string& text, Eigen::Index n) {
  const ModelSpec spec = parse_model_spec(text);
  if (spec.name == "identity") return identity_model(n);
  if (spec.name == "equal_cross") return equal_cross(n, spec.number("c"));
  if (spec.name == "exponential") return exponential(n, spec.number("c"));
  if (spec.name == "file") {
    Matrix xi = io::read_matrix_csv(spec.params.at("path"));
    if (xi.rows() != n)
      throw Error(Errc::DimensionMismatch, "model file is " + std::to_string(xi.rows()) + "x" +
                                               std::to_string(xi.cols()) + ", expected N=" + std::to_string(n));
    return CorrelationModel(std::move(xi), spec.params.at("path"));
  }
  throw Error(Errc::ParseError, "unknown correlation model '" + spec.name + "'");
}

PartitionedModel make_partitioned_model(const std::string& text, Eigen::Index n, Eigen::Index m) {
  ModelSpec spec = parse_model_spec(text);
  if (spec.name == "partitioned") {
    const auto it = spec.params.find("cross");
    if (it == spec.params.end()) throw Error(Errc::ParseError, "partitioned model needs cross=");
    spec.name = it->second;
  }
  if (spec.name == "null") return null_model(n, m);
  if (spec.name == "fig2") return rank_one_model(n, m, 0.9, 0.9, 0.8);
  if (spec.name == "fig3") return banded_model(n, m, 0.5, 0.5, 0.05);
  if (spec.name == "rank_one")
    return rank_one_model(n, m, spec.number("a", 0.0), spec.number("b", 0.0), spec.number("c"));
  if (spec.name == "banded") return banded_model(n, m, spec.number("a", 0.0), spec.number("b", 0.0), spec.number("c"));
  throw Error(Errc::ParseError, "unknown partitioned model '" + spec.name + "'");
}

std::pair<double, double> parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw Error(Errc::ParseError, "window must be lo:hi, got '" + text + "'");
  const double lo = io::parse_double(text.substr(0, colon), "window lo");
  const double hi = io::parse_double(text.substr(colon + 1), "window hi");
  if (!(lo < hi)) throw Error(Errc::ParseError, "window needs lo < hi, got '" + text + "'");
  return {lo, hi};
}

std::vector<double> parse_sweep(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') == std::string::npos) {
    for (const auto& item : io::split_csv_line(text)) out.push_back(io::parse_double(item, "list"));
    if (out.empty()) throw Error(Errc::ParseError, "empty list");
    return out;
  }
  std::vector<double> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find(':', start);
    parts.push_back(io::parse_double(text.substr(start, colon - start), "sweep"));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
    throw Error(Errc::ParseError, "sweep must be lo:hi:step with step > 0, got '" + text + "'");
  for (int k = 0;; ++k) {
    const double v = parts[0] + k * parts[2];
    if (v > parts[1] + 1e-9 * parts[2]) break;
    out.push_back(v);
  }
  return out;
}

std::vector<Vector> read_spectra_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (io::split_csv_line(line) != std::vector<std::string>{"member", "index", "eigenvalue"})
    throw Error(Errc::ParseError, path.string() + ": header must be member,index,eigenvalue");
  std::vector<std::vector<double>> members;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto f = io::split_csv_line(line);
    const std::string where = path.string() + " row " + std::to_string(row);
    if (f.size() != 3) throw Error(Errc::ParseError, where + ": expected 3 fields");
    const double member = io::parse_double(f[0], where);
    if (member < 0 || member != std::floor(member)) throw Error(Errc::ParseError, where + ": bad member id");
    const auto k = static_cast<std::size_t>(member);
    if (k >= members.size()) members.resize(k + 1);
    members[k].push_back(io::parse_double(f[2], where));
  }
  std::vector<Vector> out;
  for (auto& m : members) {
    if (m.empty()) continue;
    std::sort(m.begin(), m.end());
    out.push_back(Eigen::Map<Vector>(m.data(), static_cast<Eigen::Index>(m.size())));
  }
  if (out.empty()) throw Error(Errc::ParseError, path.string() + ": no eigenvalues");
  return out;
}

ResolventSolution read_density_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  const auto header = io::split_csv_line(line);
  if (header.size() < 5 || header[0] != "lambda" || header[1] != "rho" || header[2] != "pv")
    throw Error(Errc::ParseError, path.string() + ": header must start lambda,rho,pv,converged,residual");
  std::vector<double> x, rho, pv, res;
  std::vector<PointStatus> status;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto f = io::split_csv_line(line);
    const std::string where = path.string() + " row " + std::to_string(row);
    if (f.size() < 5) throw Error(Errc::ParseError, where + ": expected 5 fields");
    x.push_back(io::parse_double(f[0], where));
    rho.push_back(io::parse_double(f[1], where));
    pv.push_back(io::parse_double(f[2], where));
    status.push_back(f[3] == "1" ? PointStatus::Converged : PointStatus::NoConvergence);
    res.push_back(io::parse_double(f[4], where));
    if (x.size() > 1 && !(x.back() > x[x.size() - 2]))
      throw Error(Errc::ParseError, where + ": lambda must increase");
  }
  ResolventSolution s;
  const auto n = static_cast<Eigen::Index>(x.size());
  s.grid = Eigen::Map<Vector>(x.data(), n);
  s.rho = Eigen::Map<Vector>(rho.data(), n);
  s.pv = Eigen::Map<Vector>(pv.data(), n);
  s.residual = Eigen::Map<Vector>(res.data(), n);
  s.re_g = s.pv;
  s.im_g = -std::numbers::pi * s.rho;
  s.status = std::move(status);
  return s;
}

void write_density_csv(const std::filesystem::path& path, const ResolventSolution& s) {
  auto out = io::open_output(path);
  out << "lambda,rho,pv,converged,residual\n";
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    out << io::fmt(s.grid(i)) << ',' << io::fmt(s.rho(i)) << ',' << io::fmt(s.pv(i)) << ','
        << (s.status[k] == PointStatus::Converged ? 1 : 0) << ',' << io::fmt(s.residual(i)) << '\n';
  }
}

}  // namespace rmt::cli
