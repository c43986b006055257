#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "greenhop/errors.hpp"
#include "greenhop/parallel.hpp"

namespace greenhop {

/// Shannon entropy in bits of a class histogram.
inline double entropy_bits(const std::vector<std::size_t>& counts, std::size_t total) {
  if (total == 0) return 0.0;
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

/// Discriminant feature test loss for one dimension: the minimum over a fixed
/// grid of thresholds of the count-weighted entropy of the two induced label
/// partitions. Thresholds are t_b = lo + b*(hi-lo)/(bins+1) for b = 1..bins,
/// and a sample falls left of t_b when value <= t_b. A constant dimension
/// scores the entropy of the full label set.
inline double dft_loss(const double* values, std::size_t n, const std::vector<int>& labels,
                       int n_classes, int bins) {
  if (n == 0 || labels.size() != n) throw InvalidInputError("dft_loss: bad sample count");
  if (n_classes < 1) throw InvalidInputError("dft_loss: need at least one class");
  if (bins < 1) throw InvalidInputError("dft_loss: need at least one threshold");

  double lo = values[0], hi = values[0];
  for (std::size_t i = 1; i < n; ++i) {
    lo = std::min(lo, values[i]);
    hi = std::max(hi, values[i]);
  }

  std::vector<std::size_t> total_counts(static_cast<std::size_t>(n_classes), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const int y = labels[i];
    if (y < 0 || y >= n_classes) throw InvalidInputError("dft_loss: label out of range");
    ++total_counts[static_cast<std::size_t>(y)];
  }
  if (hi == lo) return entropy_bits(total_counts, n);

  std::vector<double> thresholds(static_cast<std::size_t>(bins));
  for (int b = 1; b <= bins; ++b)
    thresholds[static_cast<std::size_t>(b - 1)] =
        lo + static_cast<double>(b) * (hi - lo) / static_cast<double>(bins + 1);

  // bucket(v) = number of thresholds strictly below v, so the left side of
  // threshold j is exactly buckets 0..j.
  const std::size_t n_buckets = static_cast<std::size_t>(bins) + 1;
  std::vector<std::size_t> bucket_counts(n_buckets * static_cast<std::size_t>(n_classes), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t bucket = static_cast<std::size_t>(
        std::lower_bound(thresholds.begin(), thresholds.end(), values[i]) - thresholds.begin());
    ++bucket_counts[bucket * static_cast<std::size_t>(n_classes) +
                    static_cast<std::size_t>(labels[i])];
  }

  std::vector<std::size_t> left(static_cast<std::size_t>(n_classes), 0);
  std::size_t n_left = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < bins; ++j) {
    const std::size_t* row = &bucket_counts[static_cast<std::size_t>(j) *
                                            static_cast<std::size_t>(n_classes)];
    for (int c = 0; c < n_classes; ++c) {
      left[static_cast<std::size_t>(c)] += row[c];
      n_left += row[c];
    }
    std::vector<std::size_t> right(static_cast<std::size_t>(n_classes));
    for (int c = 0; c < n_classes; ++c)
      right[static_cast<std::size_t>(c)] =
          total_counts[static_cast<std::size_t>(c)] - left[static_cast<std::size_t>(c)];
    const std::size_t n_right = n - n_left;
    const double loss =
        (static_cast<double>(n_left) / static_cast<double>(n)) * entropy_bits(left, n_left) +
        (static_cast<double>(n_right) / static_cast<double>(n)) * entropy_bits(right, n_right);
    best = std::min(best, loss);
  }
  return best;
}

/// Per-dimension DFT losses for a sample-major feature matrix (one row per
/// sample). Dimensions are independent, so the scan runs in parallel.
inline std::vector<double> dft_losses(const Eigen::MatrixXd& features,
                                      const std::vector<int>& labels, int n_classes, int bins) {
  const std::size_t n = static_cast<std::size_t>(features.rows());
  const std::size_t dims = static_cast<std::size_t>(features.cols());
  if (labels.size() != n) throw InvalidInputError("dft_losses: labels do not match rows");
  std::vector<double> loss(dims, 0.0);
  parallel_for(dims, [&](std::size_t d) {
    std::vector<double> column(n);
    for (std::size_t i = 0; i < n; ++i)
      column[i] = features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d));
    loss[d] = dft_loss(column.data(), n, labels, n_classes, bins);
  });
  return loss;
}

/// Index of the elbow of an ascending loss curve: the point with maximum
/// perpendicular distance to the chord joining the first and last points.
/// Endpoints are eligible; ties resolve to the earliest index.
inline std::size_t elbow_index(const std::vector<double>& curve) {
  if (curve.empty()) throw InvalidInputError("elbow_index: empty curve");
  const std::size_t n = curve.size();
  if (n == 1) return 0;
  const double dx = static_cast<double>(n - 1);
  const double dy = curve[n - 1] - curve[0];
  std::size_t best = 0;
  double best_dist = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    // |cross((i,yi)-(0,y0), chord)|; the 1/|chord| factor is common to all i.
    const double cross = static_cast<double>(i) * dy - (curve[i] - curve[0]) * dx;
    const double dist = std::abs(cross);
    if (dist > best_dist) {
      best_dist = dist;
      best = i;
    }
  }
  return best;
}

struct FeatureSelection {
  std::vector<double> loss;            // per input dimension
  std::vector<std::size_t> order;      // dimensions sorted by ascending loss
  std::size_t elbow = 0;               // elbow of the sorted loss curve
  std::vector<std::uint32_t> selected; // chosen dimensions, best first
};

/// Ranks dimensions by DFT loss and keeps either an explicit count or, when
/// `n_features` is unset, everything up to the elbow of the sorted curve.
/// Ranking ties break toward the lower dimension index.
inline FeatureSelection rank_and_select(const Eigen::MatrixXd& features,
                                        const std::vector<int>& labels, int n_classes, int bins,
                                        std::optional<std::size_t> n_features) {
  FeatureSelection sel;
  sel.loss = dft_losses(features, labels, n_classes, bins);
  const std::size_t dims = sel.loss.size();
  if (dims == 0) throw InvalidInputError("rank_and_select: no feature dimensions");
  if (n_features && *n_features > dims)
    throw ConfigError("n_features=" + std::to_string(*n_features) + " exceeds the " +
                      std::to_string(dims) + " available dimensions");

  sel.order.resize(dims);
  std::iota(sel.order.begin(), sel.order.end(), std::size_t{0});
  std::stable_sort(sel.order.begin(), sel.order.end(),
                   [&](std::size_t a, std::size_t b) { return sel.loss[a] < sel.loss[b]; });

  std::vector<double> curve(dims);
  for (std::size_t i = 0; i < dims; ++i) curve[i] = sel.loss[sel.order[i]];
  sel.elbow = elbow_index(curve);

  const std::size_t keep = n_features ? *n_features : sel.elbow + 1;
  if (keep == 0) throw ConfigError("rank_and_select: cannot select zero features");
  sel.selected.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i)
    sel.selected.push_back(static_cast<std::uint32_t>(sel.order[i]));
  return sel;
}

}  // namespace greenhop
