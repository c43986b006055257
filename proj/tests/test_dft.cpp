#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "greenhop/dft.hpp"
#include "greenhop/rng.hpp"

using namespace greenhop;

namespace {

double oracle_entropy(const std::vector<std::size_t>& counts) {
  std::size_t total = 0;
  for (std::size_t c : counts) total += c;
  if (total == 0) return 0.0;
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

// Direct re-derivation: walk every threshold, split the samples, and take the
// minimum count-weighted entropy. No bucketing, no prefix sums.
double oracle_dft_loss(const std::vector<double>& values, const std::vector<int>& labels,
                       int n_classes, int bins) {
  const std::size_t n = values.size();
  const double lo = *std::min_element(values.begin(), values.end());
  const double hi = *std::max_element(values.begin(), values.end());
  std::vector<std::size_t> all(static_cast<std::size_t>(n_classes), 0);
  for (int y : labels) ++all[static_cast<std::size_t>(y)];
  if (hi == lo) return oracle_entropy(all);

  double best = std::numeric_limits<double>::infinity();
  for (int b = 1; b <= bins; ++b) {
    const double t = lo + static_cast<double>(b) * (hi - lo) / static_cast<double>(bins + 1);
    std::vector<std::size_t> left(static_cast<std::size_t>(n_classes), 0);
    std::vector<std::size_t> right(static_cast<std::size_t>(n_classes), 0);
    std::size_t n_left = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (values[i] <= t) {
        ++left[static_cast<std::size_t>(labels[i])];
        ++n_left;
      } else {
        ++right[static_cast<std::size_t>(labels[i])];
      }
    }
    const double wl = static_cast<double>(n_left) / static_cast<double>(n);
    const double wr = static_cast<double>(n - n_left) / static_cast<double>(n);
    best = std::min(best, wl * oracle_entropy(left) + wr * oracle_entropy(right));
  }
  return best;
}

}  // namespace

TEST_CASE("dft_loss hand cases") {
  // Two tight value clusters, one per class: some threshold separates them
  // perfectly, so the minimum weighted entropy is zero.
  const std::vector<double> separable = {0.1, 0.2, 0.8, 0.9};
  const std::vector<int> labels = {0, 0, 1, 1};
  CHECK(dft_loss(separable.data(), 4, labels, 2, 32) == Catch::Approx(0.0).margin(1e-12));

  // A constant dimension carries no information; with balanced binary labels
  // its loss is the full one-bit label entropy.
  const std::vector<double> constant = {0.5, 0.5, 0.5, 0.5};
  CHECK(dft_loss(constant.data(), 4, labels, 2, 32) == Catch::Approx(1.0));

  // Interleaved values that no single threshold can separate stay expensive.
  const std::vector<double> mixed = {0.0, 1.0, 2.0, 3.0};
  const std::vector<int> alternating = {0, 1, 0, 1};
  CHECK(dft_loss(mixed.data(), 4, alternating, 2, 3) > 0.5);
}

TEST_CASE("dft_loss matches an exhaustive threshold scan", "[oracle]") {
  Rng rng(310);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 5 + rng.next_below(56);
    const int n_classes = 2 + static_cast<int>(rng.next_below(4));
    const int bins = 1 + static_cast<int>(rng.next_below(40));
    std::vector<double> values(n);
    std::vector<int> labels(n);
    const bool quantized = rng.next_below(3) == 0;
    for (std::size_t i = 0; i < n; ++i) {
      double v = rng.next_normal();
      if (quantized) v = std::round(v * 4.0) / 4.0;  // force duplicated values
      values[i] = v;
      labels[i] = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_classes)));
    }
    const double expected = oracle_dft_loss(values, labels, n_classes, bins);
    const double actual = dft_loss(values.data(), n, labels, n_classes, bins);
    REQUIRE(actual == Catch::Approx(expected).margin(1e-12));
  }
}

TEST_CASE("dft_loss is bounded by the label entropy") {
  Rng rng(311);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 10 + rng.next_below(40);
    const int n_classes = 2 + static_cast<int>(rng.next_below(5));
    std::vector<double> values(n);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = rng.next_double();
      labels[i] = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_classes)));
    }
    const double loss = dft_loss(values.data(), n, labels, n_classes, 32);
    CHECK(loss <= std::log2(static_cast<double>(n_classes)) + 1e-12);
    CHECK(loss >= 0.0);
  }
}

TEST_CASE("dft_loss is exactly invariant under sample duplication") {
  Rng rng(312);
  std::vector<double> values(24);
  std::vector<int> labels(24);
  for (std::size_t i = 0; i < 24; ++i) {
    values[i] = rng.next_double();
    labels[i] = static_cast<int>(rng.next_below(3));
  }
  std::vector<double> doubled = values;
  std::vector<int> doubled_labels = labels;
  doubled.insert(doubled.end(), values.begin(), values.end());
  doubled_labels.insert(doubled_labels.end(), labels.begin(), labels.end());

  const double a = dft_loss(values.data(), values.size(), labels, 3, 32);
  const double b = dft_loss(doubled.data(), doubled.size(), doubled_labels, 3, 32);
  CHECK(a == b);
}

TEST_CASE("dft_loss validates its inputs") {
  const std::vector<double> values = {0.0, 1.0};
  CHECK_THROWS_AS(dft_loss(values.data(), 0, {}, 2, 32), InvalidInputError);
  CHECK_THROWS_AS(dft_loss(values.data(), 2, {0}, 2, 32), InvalidInputError);
  CHECK_THROWS_AS(dft_loss(values.data(), 2, {0, 2}, 2, 32), InvalidInputError);
  CHECK_THROWS_AS(dft_loss(values.data(), 2, {0, -1}, 2, 32), InvalidInputError);
  CHECK_THROWS_AS(dft_loss(values.data(), 2, {0, 1}, 2, 0), InvalidInputError);
}

TEST_CASE("elbow_index picks the point farthest from the chord") {
  // Hockey-stick curve: flat floor then a jump; the knee is the last flat point.
  CHECK(elbow_index({0.0, 0.0, 0.0, 0.0, 10.0}) == 3);
  // Single hump above a flat chord.
  CHECK(elbow_index({0.0, 1.0, 0.0}) == 1);
  // Perfectly linear curve: every distance is zero, first index wins.
  CHECK(elbow_index({0.0, 1.0, 2.0, 3.0}) == 0);
  CHECK(elbow_index({5.0}) == 0);
  CHECK_THROWS_AS(elbow_index({}), InvalidInputError);
}

TEST_CASE("rank_and_select puts a perfectly discriminant dimension first") {
  // 8 samples, 5 dims; dim 3 separates the classes, the rest are constant.
  Eigen::MatrixXd features = Eigen::MatrixXd::Ones(8, 5);
  std::vector<int> labels(8);
  for (int i = 0; i < 8; ++i) {
    labels[i] = i < 4 ? 0 : 1;
    features(i, 3) = i < 4 ? 0.0 : 1.0;
  }
  const FeatureSelection sel = rank_and_select(features, labels, 2, 32, std::nullopt);
  REQUIRE(sel.order.size() == 5);
  CHECK(sel.order[0] == 3);
  CHECK(sel.loss[3] == Catch::Approx(0.0).margin(1e-12));
  for (std::size_t d : {0, 1, 2, 4}) CHECK(sel.loss[d] == Catch::Approx(1.0));
  REQUIRE(!sel.selected.empty());
  CHECK(sel.selected[0] == 3);
  CHECK(sel.selected.size() == sel.elbow + 1);
}

TEST_CASE("explicit n_features keeps a prefix of the ranking") {
  Rng rng(313);
  Eigen::MatrixXd features(40, 12);
  std::vector<int> labels(40);
  for (int i = 0; i < 40; ++i) {
    labels[i] = static_cast<int>(rng.next_below(3));
    for (int d = 0; d < 12; ++d) features(i, d) = rng.next_normal();
  }
  const FeatureSelection full = rank_and_select(features, labels, 3, 32, std::nullopt);
  for (std::size_t k : {std::size_t{1}, std::size_t{5}, std::size_t{12}}) {
    const FeatureSelection sel = rank_and_select(features, labels, 3, 32, k);
    REQUIRE(sel.selected.size() == k);
    for (std::size_t i = 0; i < k; ++i)
      CHECK(sel.selected[i] == static_cast<std::uint32_t>(full.order[i]));
  }
  CHECK_THROWS_AS(rank_and_select(features, labels, 3, 32, std::size_t{13}), ConfigError);
}

TEST_CASE("ranking ties break toward the lower dimension index") {
  // Two identical columns tie exactly; stable sort must keep dim 0 before 1.
  Eigen::MatrixXd features(6, 2);
  std::vector<int> labels = {0, 0, 0, 1, 1, 1};
  for (int i = 0; i < 6; ++i) {
    features(i, 0) = static_cast<double>(i % 3);
    features(i, 1) = features(i, 0);
  }
  const FeatureSelection sel = rank_and_select(features, labels, 2, 8, std::nullopt);
  CHECK(sel.loss[0] == sel.loss[1]);
  CHECK(sel.order[0] == 0);
  CHECK(sel.order[1] == 1);
}
