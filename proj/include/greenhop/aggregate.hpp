#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "greenhop/descriptor.hpp"
#include "greenhop/errors.hpp"
#include "greenhop/point_cloud.hpp"
#include "greenhop/regions.hpp"

namespace greenhop {

enum class Aggregator { kMax, kMean, kL1, kL2, kStd, kVar, kMin };

inline const std::vector<Aggregator>& all_aggregators() {
  static const std::vector<Aggregator> all = {Aggregator::kMax, Aggregator::kMean,
                                              Aggregator::kL1,  Aggregator::kL2,
                                              Aggregator::kStd, Aggregator::kVar,
                                              Aggregator::kMin};
  return all;
}

inline std::string aggregator_name(Aggregator a) {
  switch (a) {
    case Aggregator::kMax: return "max";
    case Aggregator::kMean: return "mean";
    case Aggregator::kL1: return "l1";
    case Aggregator::kL2: return "l2";
    case Aggregator::kStd: return "std";
    case Aggregator::kVar: return "var";
    case Aggregator::kMin: return "min";
  }
  throw ConfigError("unknown aggregator id");
}

inline Aggregator aggregator_from_name(const std::string& name) {
  for (Aggregator a : all_aggregators())
    if (aggregator_name(a) == name) return a;
  throw ConfigError("unknown aggregator '" + name + "'");
}

inline std::size_t feature_length(std::size_t n_regions, std::size_t n_aggregators) {
  return n_regions * n_aggregators * kDescriptorDim;
}

/// Pools per-point spectral responses over each region with each aggregator.
///
/// Layout is region-major: for region r, aggregator a, channel c the output
/// index is (r * A + a) * 24 + c. Regions with no member points contribute
/// exact zeros. Point membership is evaluated against the normalized
/// coordinates in `cloud`; accumulation runs in ascending point order.
inline Eigen::VectorXd aggregate_features(const PointCloud& cloud,
                                          const std::vector<Descriptor>& spectral,
                                          const std::vector<Region>& regions,
                                          const std::vector<Aggregator>& aggregators) {
  constexpr int dim = kDescriptorDim;
  const std::size_t n = cloud.size();
  if (spectral.size() != n)
    throw InvalidInputError("aggregate_features: spectral responses do not match cloud size");
  if (regions.empty() || aggregators.empty())
    throw InvalidInputError("aggregate_features: need at least one region and one aggregator");

  const std::size_t n_aggs = aggregators.size();
  Eigen::VectorXd feature = Eigen::VectorXd::Zero(
      static_cast<Eigen::Index>(feature_length(regions.size(), n_aggs)));

  std::vector<std::size_t> members;
  members.reserve(n);
  for (std::size_t r = 0; r < regions.size(); ++r) {
    members.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (regions[r].contains(cloud.points[i])) members.push_back(i);
    if (members.empty()) continue;
    const double count = static_cast<double>(members.size());

    Descriptor sum = Descriptor::Zero();
    Descriptor sum_abs = Descriptor::Zero();
    Descriptor sum_sq = Descriptor::Zero();
    Descriptor vmax = spectral[members[0]];
    Descriptor vmin = spectral[members[0]];
    for (std::size_t i : members) {
      const Descriptor& v = spectral[i];
      sum += v;
      sum_abs += v.cwiseAbs();
      sum_sq += v.cwiseProduct(v);
      vmax = vmax.cwiseMax(v);
      vmin = vmin.cwiseMin(v);
    }
    const Descriptor mean = sum / count;
    Descriptor central = Descriptor::Zero();
    for (std::size_t i : members) {
      const Descriptor dev = spectral[i] - mean;
      central += dev.cwiseProduct(dev);
    }
    const Descriptor var = central / count;

    for (std::size_t a = 0; a < n_aggs; ++a) {
      Descriptor out;
      switch (aggregators[a]) {
        case Aggregator::kMax: out = vmax; break;
        case Aggregator::kMean: out = mean; break;
        case Aggregator::kL1: out = sum_abs; break;
        case Aggregator::kL2: out = sum_sq.cwiseSqrt(); break;
        case Aggregator::kStd: out = var.cwiseSqrt(); break;
        case Aggregator::kVar: out = var; break;
        case Aggregator::kMin: out = vmin; break;
      }
      feature.segment<dim>(static_cast<Eigen::Index>((r * n_aggs + a) * dim)) = out;
    }
  }
  return feature;
}

}  // namespace greenhop
