// Per-point drift attribution: decompose the partial transport cost over
// the coupling, and expose the MMD witness function.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "driftbridge/mmd.hpp"
#include "driftbridge/ot.hpp"

namespace driftbridge {

struct AttributionEntry {
  std::size_t test_index = 0;
  // (reference index, transported mass) pairs with mass above the support
  // threshold of 1e-12.
  std::vector<std::pair<std::size_t, double>> matches;
  // (1/alpha) * sum_i C_ij P_ij; entries sum to distance^p.
  double cost_contribution = 0.0;
};

std::vector<AttributionEntry> coupling_attribution(const PartialOtResult& result);

// Witness f(t) = sum_i w_i k(x_i, t) - sum_j v_j k(y_j, t) at each query row.
std::vector<double> witness_values(const SampleSet& X, const SampleSet& Y,
                                   std::span<const double> w,
                                   std::span<const double> v, const KernelSpec& k,
                                   const SampleSet& query);

struct MatchingRow {
  std::int64_t ref_index = 0;
  std::int64_t test_index = 0;  // -1 marks mass sent to the dummy point
  double mass = 0.0;
  double cost = 0.0;
};

struct MatchingExport {
  std::vector<MatchingRow> rows;
};

MatchingExport export_matching(const PartialOtResult& result, const SampleSet& X,
                               const SampleSet& Y);

// header ref_index,test_index,mass,cost; floats with 17 significant digits.
std::string matching_to_csv(const MatchingExport& exported);

}  // namespace driftbridge
