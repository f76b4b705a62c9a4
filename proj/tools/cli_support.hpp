#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rmt/models.hpp"
#include "rmt/pastur.hpp"

namespace rmt::cli {

/// "name:key=value,key=value" split into name and parameters.
struct ModelSpec {
  std::string name;
  std::map<std::string, std::string> params;

  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
};

ModelSpec parse_model_spec(const std::string& text);

/// identity | equal_cross:c= | exponential:c= | file:path=<csv>
CorrelationModel make_correlation_model(const std::string& spec, Eigen::Index n);

/// null | fig2 | fig3 | rank_one:a=,b=,c= | banded:a=,b=,c=, or the model's own
/// name "partitioned:cross=<rank_one|banded|null>,a=,b=,c=".
PartitionedModel make_partitioned_model(const std::string& spec, Eigen::Index n, Eigen::Index m);

/// "lo:hi" -> {lo, hi}; throws ParseError unless lo < hi.
std::pair<double, double> parse_window(const std::string& text);

/// "a:b:step" (inclusive) or a comma list.
std::vector<double> parse_sweep(const std::string& text);

/// member -> eigenvalues (ascending) from a `member,index,eigenvalue` file.
std::vector<Vector> read_spectra_csv(const std::filesystem::path& path);

/// Rebuilds a solution from a `lambda,rho,pv,converged,residual` file.
ResolventSolution read_density_csv(const std::filesystem::path& path);

void write_density_csv(const std::filesystem::path& path, const ResolventSolution& s);

}  // namespace rmt::cli
