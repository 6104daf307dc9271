#include "driftbridge/attribution.hpp"

#include <cmath>
#include <cstdio>

#include "driftbridge/kernels.hpp"

namespace driftbridge {

namespace {
constexpr double kSupportThreshold = 1e-12;
}

std::vector<AttributionEntry> coupling_attribution(const PartialOtResult& result) {
  const std::size_t n = result.coupling.matrix.rows;
  const std::size_t m = result.coupling.matrix.cols;
  std::vector<AttributionEntry> entries(m);
  for (std::size_t j = 0; j < m; ++j) entries[j].test_index = j;
  for (std::size_t i = 0; i < n; ++i) {
    const double* mass_row = result.coupling.matrix.row(i);
    const double* cost_row = result.cost.row(i);
    for (std::size_t j = 0; j < m; ++j) {
      if (mass_row[j] > kSupportThreshold) {
        entries[j].matches.emplace_back(i, mass_row[j]);
        entries[j].cost_contribution += cost_row[j] * mass_row[j] / result.alpha;
      }
    }
  }
  return entries;
}

std::vector<double> witness_values(const SampleSet& X, const SampleSet& Y,
                                   std::span<const double> w,
                                   std::span<const double> v, const KernelSpec& k,
                                   const SampleSet& query) {
  if (X.dim() != Y.dim() || X.dim() != query.dim())
    throw DimensionError("witness: feature dimensions differ");
  if (w.size() != X.size() || v.size() != Y.size())
    throw DimensionError("witness: weight lengths do not match the samples");

  const std::size_t d = X.dim();
  std::vector<double> values(query.size(), 0.0);
  for (std::size_t t = 0; t < query.size(); ++t) {
    const double* qt = query.point(t);
    double acc = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i)
      acc += w[i] * kernel_value(k, kernels::squared_distance(X.point(i), qt, d));
    for (std::size_t j = 0; j < Y.size(); ++j)
      acc -= v[j] * kernel_value(k, kernels::squared_distance(Y.point(j), qt, d));
    values[t] = acc;
  }
  return values;
}

MatchingExport export_matching(const PartialOtResult& result, const SampleSet& X,
                               const SampleSet& Y) {
  const std::size_t n = result.coupling.matrix.rows;
  const std::size_t m = result.coupling.matrix.cols;
  if (X.size() != n || Y.size() != m)
    throw DimensionError("export_matching: samples do not match the coupling");

  const double dummy_cost = std::pow(result.dummy_distance, result.p);
  MatchingExport out;
  for (std::size_t i = 0; i < n; ++i) {
    const double* mass_row = result.coupling.matrix.row(i);
    const double* cost_row = result.cost.row(i);
    for (std::size_t j = 0; j < m; ++j) {
      if (mass_row[j] > kSupportThreshold)
        out.rows.push_back({static_cast<std::int64_t>(i),
                            static_cast<std::int64_t>(j), mass_row[j],
                            cost_row[j]});
    }
    if (result.dummy_column[i] > kSupportThreshold)
      out.rows.push_back({static_cast<std::int64_t>(i), -1,
                          result.dummy_column[i], dummy_cost});
  }
  return out;
}

std::string matching_to_csv(const MatchingExport& exported) {
  std::string csv = "ref_index,test_index,mass,cost\n";
  char line[128];
  for (const MatchingRow& row : exported.rows) {
    std::snprintf(line, sizeof(line), "%lld,%lld,%.17g,%.17g\n",
                  static_cast<long long>(row.ref_index),
                  static_cast<long long>(row.test_index), row.mass, row.cost);
    csv += line;
  }
  return csv;
}

}  // namespace driftbridge
