#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "greenhop/aggregate.hpp"
#include "greenhop/config.hpp"
#include "greenhop/dataset.hpp"
#include "greenhop/descriptor.hpp"
#include "greenhop/dft.hpp"
#include "greenhop/errors.hpp"
#include "greenhop/flops.hpp"
#include "greenhop/knn.hpp"
#include "greenhop/llsr.hpp"
#include "greenhop/parallel.hpp"
#include "greenhop/point_cloud.hpp"
#include "greenhop/regions.hpp"
#include "greenhop/rng.hpp"
#include "greenhop/saab.hpp"
#include "greenhop/standardize.hpp"

namespace greenhop {

/// A complete trained pipeline: spectral filter, aggregation geometry,
/// feature statistics, selected dimensions and the linear classifier.
/// Immutable once trained or loaded; safe to share across threads.
struct PipelineModel {
  int format_version = 1;
  PipelineConfig config;
  std::vector<std::string> class_names;
  SaabTransform saab;
  std::vector<Region> regions;
  Standardizer standardizer;              // full feature length
  std::vector<std::uint32_t> selected;    // best dimension first
  LlsrModel classifier;

  std::size_t full_feature_dim() const {
    return feature_length(regions.size(), config.aggregators.size());
  }
  int n_classes() const { return static_cast<int>(class_names.size()); }
};

struct PreparedCloud {
  PointCloud cloud;                    // normalized, downsampled
  std::vector<Descriptor> descriptors;
};

/// Stage 1 geometry: normalize, downsample to at most config.num_points with
/// the config seed, run KNN and build the 24-D octant descriptors.
inline PreparedCloud compute_descriptors(const PointCloud& raw, const PipelineConfig& config) {
  PreparedCloud out;
  out.cloud = normalize(raw);
  const std::size_t target = std::min<std::size_t>(
      static_cast<std::size_t>(config.num_points), out.cloud.size());
  if (target < out.cloud.size()) out.cloud = downsample(out.cloud, target, config.seed);
  const NeighborIndex neighbors = knn(out.cloud, config.k_neighbors);
  out.descriptors.resize(out.cloud.size());
  for (std::size_t i = 0; i < out.cloud.size(); ++i)
    out.descriptors[i] =
        octant_descriptor(out.cloud, neighbors.row(i), static_cast<std::int32_t>(i));
  return out;
}

/// Full feature path for one cloud under a fitted Saab transform:
/// descriptors, 24 spectral responses per point, then regional aggregation.
inline Eigen::VectorXd extract_features(const PointCloud& raw, const SaabTransform& saab,
                                        const std::vector<Region>& regions,
                                        const PipelineConfig& config) {
  PreparedCloud prep = compute_descriptors(raw, config);
  std::vector<Descriptor> spectral(prep.descriptors.size());
  for (std::size_t i = 0; i < prep.descriptors.size(); ++i)
    spectral[i] = apply_saab(saab, prep.descriptors[i]);
  return aggregate_features(prep.cloud, spectral, regions, config.aggregators);
}

namespace detail {

/// Training-time view of one sample: loaded from disk and, when enabled,
/// augmented with a per-sample seed so both training passes see identical
/// geometry.
inline PointCloud load_training_cloud(const DatasetEntry& entry, const PipelineConfig& config,
                                      std::size_t sample_index) {
  PointCloud cloud = load_points(entry.resolved);
  if (config.augment)
    cloud = augment(cloud, mix_seed(config.seed, static_cast<std::uint64_t>(sample_index)),
                    config.jitter_sigma, config.jitter_clip);
  return cloud;
}

/// Feeds a cloud's descriptors to a Saab accumulator, thinning to an evenly
/// strided subset when saab_max_points caps the per-cloud contribution.
inline void accumulate_saab(SaabAccumulator& acc, const std::vector<Descriptor>& descriptors,
                            int max_points) {
  const std::size_t n = descriptors.size();
  if (max_points > 0 && n > static_cast<std::size_t>(max_points)) {
    const std::size_t cap = static_cast<std::size_t>(max_points);
    for (std::size_t j = 0; j < cap; ++j) acc.add(descriptors[j * n / cap]);
  } else {
    for (const Descriptor& d : descriptors) acc.add(d);
  }
}

}  // namespace detail

/// Trains the full pipeline on a labeled dataset with an explicit region set.
/// Labels touch nothing before feature selection: the Saab fit and the
/// feature build depend only on geometry and the seed.
inline PipelineModel train_pipeline(const DatasetManifest& data, const PipelineConfig& config,
                                    const std::vector<Region>& regions) {
  config.validate();
  if (data.entries.empty()) throw InvalidInputError("training dataset is empty");
  if (data.class_names.size() < 2)
    throw InvalidInputError("training requires at least 2 classes, got " +
                            std::to_string(data.class_names.size()));
  if (regions.empty()) throw InvalidInputError("training requires at least one region");

  const std::size_t n = data.entries.size();

  // Pass 1: second-moment statistics for the Saab fit. Per-sample
  // accumulators merge in manifest order for a worker-count-independent
  // result.
  std::vector<SaabAccumulator> partial(n);
  parallel_for(n, [&](std::size_t i) {
    const PointCloud cloud = detail::load_training_cloud(data.entries[i], config, i);
    const PreparedCloud prep = compute_descriptors(cloud, config);
    detail::accumulate_saab(partial[i], prep.descriptors, config.saab_max_points);
  });
  SaabAccumulator acc;
  for (const SaabAccumulator& p : partial) acc.merge(p);
  PipelineModel model;
  model.config = config;
  model.class_names = data.class_names;
  model.regions = regions;
  model.saab = acc.finalize();

  // Pass 2: per-sample features under the fitted transform. Clouds are
  // reloaded instead of cached; the per-sample seeds make both passes see
  // the same geometry.
  const std::size_t dim = feature_length(regions.size(), config.aggregators.size());
  Eigen::MatrixXd features(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  parallel_for(n, [&](std::size_t i) {
    const PointCloud cloud = detail::load_training_cloud(data.entries[i], config, i);
    features.row(static_cast<Eigen::Index>(i)) =
        extract_features(cloud, model.saab, regions, config).transpose();
  });

  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = data.entries[i].class_id;

  model.standardizer = Standardizer::fit(features);
  model.standardizer.apply_in_place(features);

  const FeatureSelection selection = rank_and_select(
      features, labels, model.n_classes(), config.dft_bins, config.n_features);
  model.selected = selection.selected;

  Eigen::MatrixXd chosen(features.rows(), static_cast<Eigen::Index>(model.selected.size()));
  for (std::size_t j = 0; j < model.selected.size(); ++j)
    chosen.col(static_cast<Eigen::Index>(j)) = features.col(model.selected[j]);
  model.classifier = fit_llsr(chosen, labels, model.n_classes(), config.ridge);
  return model;
}

inline PipelineModel train_pipeline(const DatasetManifest& data, const PipelineConfig& config) {
  return train_pipeline(data, config,
                        make_regions(deg_to_rad(config.theta1_deg),
                                     deg_to_rad(config.theta2_deg), config.delta));
}

struct Prediction {
  int class_id = -1;
  Eigen::VectorXd scores;
};

inline Prediction classify(const PipelineModel& model, const PointCloud& cloud) {
  const Eigen::VectorXd feature =
      extract_features(cloud, model.saab, model.regions, model.config);
  const Eigen::VectorXd standardized = model.standardizer.apply(feature);
  Eigen::VectorXd chosen(static_cast<Eigen::Index>(model.selected.size()));
  for (std::size_t j = 0; j < model.selected.size(); ++j)
    chosen(static_cast<Eigen::Index>(j)) = standardized(model.selected[j]);
  Prediction p;
  p.scores = llsr_scores(model.classifier, chosen);
  p.class_id = llsr_predict(model.classifier, chosen);
  return p;
}

inline std::vector<Prediction> classify_batch(const PipelineModel& model,
                                              const std::vector<PointCloud>& clouds) {
  std::vector<Prediction> out(clouds.size());
  parallel_for(clouds.size(), [&](std::size_t i) { out[i] = classify(model, clouds[i]); });
  return out;
}

struct EvalReport {
  Eigen::MatrixXi confusion;               // rows: truth, cols: predicted
  double overall_accuracy = 0.0;
  double class_avg_accuracy = 0.0;
  std::vector<double> per_class_accuracy;  // NaN for classes with no samples
};

/// Confusion-matrix metrics over a labeled dataset. Dataset labels are
/// matched to model classes by name; overall accuracy is the confusion trace
/// over the total, class-average is the mean recall over classes that have
/// at least one sample.
inline EvalReport evaluate(const PipelineModel& model, const DatasetManifest& data) {
  if (data.entries.empty()) throw InvalidInputError("evaluation dataset is empty");
  const int n_classes = model.n_classes();
  std::vector<int> truth(data.entries.size());
  for (std::size_t i = 0; i < data.entries.size(); ++i) {
    const auto& name = data.entries[i].class_name;
    const auto it = std::find(model.class_names.begin(), model.class_names.end(), name);
    if (it == model.class_names.end())
      throw DataError("dataset class '" + name + "' is unknown to the model");
    truth[i] = static_cast<int>(it - model.class_names.begin());
  }

  std::vector<int> predicted(data.entries.size());
  parallel_for(data.entries.size(), [&](std::size_t i) {
    predicted[i] = classify(model, load_points(data.entries[i].resolved)).class_id;
  });

  EvalReport report;
  report.confusion = Eigen::MatrixXi::Zero(n_classes, n_classes);
  for (std::size_t i = 0; i < data.entries.size(); ++i)
    ++report.confusion(truth[i], predicted[i]);

  long correct = 0;
  double recall_sum = 0.0;
  int classes_seen = 0;
  report.per_class_accuracy.assign(static_cast<std::size_t>(n_classes),
                                   std::numeric_limits<double>::quiet_NaN());
  for (int c = 0; c < n_classes; ++c) {
    const long row_total = report.confusion.row(c).sum();
    correct += report.confusion(c, c);
    if (row_total == 0) continue;
    const double recall = static_cast<double>(report.confusion(c, c)) /
                          static_cast<double>(row_total);
    report.per_class_accuracy[static_cast<std::size_t>(c)] = recall;
    recall_sum += recall;
    ++classes_seen;
  }
  report.overall_accuracy =
      static_cast<double>(correct) / static_cast<double>(data.entries.size());
  report.class_avg_accuracy = classes_seen ? recall_sum / classes_seen : 0.0;
  return report;
}

inline ParameterCounts count_parameters(const PipelineModel& model) {
  return count_parameters(static_cast<std::uint64_t>(model.selected.size()),
                          model.n_classes());
}

inline FlopsEstimate estimate_flops(const PipelineModel& model) {
  return estimate_flops(model.config, model.config.num_points,
                        static_cast<std::uint64_t>(model.selected.size()), model.n_classes(),
                        static_cast<int>(model.regions.size()));
}

}  // namespace greenhop
