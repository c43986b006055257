#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "greenhop/config.hpp"
#include "greenhop/descriptor.hpp"
#include "greenhop/errors.hpp"

namespace greenhop {

/// Closed-form inference cost model. Convention: one multiply-add counts as
/// 2 FLOPs; comparisons and subtractions count as 1.
///
/// Per stage, for N points, K neighbors, R regions, A aggregators, D selected
/// dimensions and C classes:
///   knn          3N(N-1) subtract/square ops + N(N-1) selection comparisons
///   descriptor   N(6K + 24): local-offset accumulation plus octant means
///   saab         2 * N * 24^2 (dense 24x24 matrix-vector per point)
///   aggregation  R*A*24*N accumulation upper bound + 8(R-1)N membership tests
///   standardize  2D (subtract and divide per selected dimension)
///   classifier   2(D+1)C (augmented matrix-vector)
///
/// The headline total covers saab + aggregation + classifier only; neighbor
/// search conventions vary too much across reports to fold into one number,
/// so knn and descriptor costs are listed separately.
struct FlopsEstimate {
  int n_points = 0;
  int k_neighbors = 0;
  int n_regions = 0;
  int n_aggregators = 0;
  std::uint64_t n_selected = 0;
  int n_classes = 0;

  std::uint64_t knn = 0;
  std::uint64_t descriptor = 0;
  std::uint64_t saab = 0;
  std::uint64_t aggregation = 0;
  std::uint64_t standardize = 0;
  std::uint64_t classifier = 0;

  std::uint64_t headline_total = 0;  // saab + aggregation + classifier
  std::uint64_t full_total = 0;      // every stage above
};

inline FlopsEstimate estimate_flops(const PipelineConfig& config, int n_points,
                                    std::uint64_t n_selected, int n_classes,
                                    int n_regions = 10) {
  if (n_points < 2) throw InvalidInputError("estimate_flops: need at least 2 points");
  if (n_classes < 1) throw InvalidInputError("estimate_flops: need at least 1 class");
  if (n_regions < 1) throw InvalidInputError("estimate_flops: need at least 1 region");
  config.validate();

  FlopsEstimate e;
  e.n_points = n_points;
  e.k_neighbors = config.k_neighbors;
  e.n_regions = n_regions;
  e.n_aggregators = static_cast<int>(config.aggregators.size());
  e.n_selected = n_selected;
  e.n_classes = n_classes;

  const std::uint64_t n = static_cast<std::uint64_t>(n_points);
  const std::uint64_t k = static_cast<std::uint64_t>(config.k_neighbors);
  const std::uint64_t r = static_cast<std::uint64_t>(e.n_regions);
  const std::uint64_t a = static_cast<std::uint64_t>(e.n_aggregators);
  const std::uint64_t dim = static_cast<std::uint64_t>(kDescriptorDim);
  const std::uint64_t c = static_cast<std::uint64_t>(n_classes);

  e.knn = 3 * n * (n - 1) + n * (n - 1);
  e.descriptor = n * (6 * k + dim);
  e.saab = 2 * n * dim * dim;
  e.aggregation = r * a * dim * n + 8 * (r - 1) * n;
  e.standardize = 2 * n_selected;
  e.classifier = 2 * (n_selected + 1) * c;

  e.headline_total = e.saab + e.aggregation + e.classifier;
  e.full_total = e.knn + e.descriptor + e.saab + e.aggregation + e.standardize + e.classifier;
  return e;
}

struct ParameterCounts {
  std::uint64_t filter = 0;
  std::uint64_t classifier = 0;
  std::uint64_t total = 0;
};

inline ParameterCounts count_parameters(std::uint64_t n_selected, int n_classes) {
  if (n_classes < 1) throw InvalidInputError("count_parameters: need at least 1 class");
  ParameterCounts p;
  p.filter = static_cast<std::uint64_t>(kDescriptorDim) * kDescriptorDim;
  p.classifier = (n_selected + 1) * static_cast<std::uint64_t>(n_classes);
  p.total = p.filter + p.classifier;
  return p;
}

/// Key-value lines shared by the human-readable and machine-readable FLOP
/// reports. No timing data: output is byte-identical across runs.
inline std::vector<std::pair<std::string, std::string>> flops_report_lines(
    const FlopsEstimate& e) {
  std::vector<std::pair<std::string, std::string>> lines;
  auto add = [&](const std::string& key, std::uint64_t value) {
    lines.emplace_back(key, std::to_string(value));
  };
  add("n_points", static_cast<std::uint64_t>(e.n_points));
  add("k_neighbors", static_cast<std::uint64_t>(e.k_neighbors));
  add("n_regions", static_cast<std::uint64_t>(e.n_regions));
  add("n_aggregators", static_cast<std::uint64_t>(e.n_aggregators));
  add("n_selected", e.n_selected);
  add("n_classes", static_cast<std::uint64_t>(e.n_classes));
  add("flops_knn", e.knn);
  add("flops_descriptor", e.descriptor);
  add("flops_saab", e.saab);
  add("flops_aggregation", e.aggregation);
  add("flops_standardize", e.standardize);
  add("flops_classifier", e.classifier);
  lines.emplace_back("headline_stages", "saab+aggregation+classifier");
  add("flops_headline_total", e.headline_total);
  add("flops_full_total", e.full_total);
  return lines;
}

}  // namespace greenhop
