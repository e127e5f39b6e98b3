#include "mousedyn/learn.hpp"

#include <algorithm>
#include <cmath>

#include "mousedyn/error.hpp"
#include "mousedyn/features.hpp"
#include "mousedyn/rng.hpp"

namespace mousedyn {
namespace {

void check_ratio(double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw UsageError("split ratio must be in (0, 1)");
}

std::size_t train_count(double ratio, std::size_t n) {
  return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n)));
}

Split gather(std::span<const LabeledSample> samples, std::vector<std::size_t> train_idx,
             std::vector<std::size_t> test_idx, Rng& rng) {
  rng.shuffle(std::span(train_idx));
  rng.shuffle(std::span(test_idx));
  Split split;
  split.train.reserve(train_idx.size());
  split.test.reserve(test_idx.size());
  for (const auto i : train_idx) split.train.push_back(samples[i]);
  for (const auto i : test_idx) split.test.push_back(samples[i]);
  return split;
}

}  // namespace

Split train_test_split(std::span<const LabeledSample> samples, double ratio, std::uint64_t seed) {
  check_ratio(ratio);
  if (samples.empty()) throw DataError("cannot split an empty sample set");

  std::vector<std::size_t> by_label[2];
  for (std::size_t i = 0; i < samples.size(); ++i) {
    by_label[static_cast<std::size_t>(samples[i].label)].push_back(i);
  }
  for (const auto& group : by_label) {
    if (group.size() < 2) {
      throw DataError("stratified split needs at least two samples of each label");
    }
  }

  Rng rng(seed);
  std::vector<std::size_t> train_idx, test_idx;
  for (auto& group : by_label) {
    rng.shuffle(std::span(group));
    const auto cut = train_count(ratio, group.size());
    train_idx.insert(train_idx.end(), group.begin(), group.begin() + static_cast<std::ptrdiff_t>(cut));
    test_idx.insert(test_idx.end(), group.begin() + static_cast<std::ptrdiff_t>(cut), group.end());
  }
  return gather(samples, std::move(train_idx), std::move(test_idx), rng);
}

Split shuffle_split(std::span<const LabeledSample> samples, double ratio, std::uint64_t seed) {
  check_ratio(ratio);
  if (samples.size() < 2) throw DataError("split needs at least two samples");
  Rng rng(seed);
  std::vector<std::size_t> idx(samples.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  rng.shuffle(std::span(idx));
  const auto cut = train_count(ratio, idx.size());
  std::vector<std::size_t> train_idx(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(cut));
  std::vector<std::size_t> test_idx(idx.begin() + static_cast<std::ptrdiff_t>(cut), idx.end());
  return gather(samples, std::move(train_idx), std::move(test_idx), rng);
}

Scaler::Scaler(std::vector<double> mean, std::vector<double> sd)
    : mean_(std::move(mean)), sd_(std::move(sd)) {
  if (mean_.size() != sd_.size()) throw UsageError("scaler mean/sd size mismatch");
  for (auto& s : sd_) s = std::max(s, kEpsilon);
}

Scaler Scaler::fit(std::span<const LabeledSample> train) {
  if (train.empty()) throw DataError("cannot fit a scaler on no samples");
  const std::size_t d = train.front().features.size();
  const double n = static_cast<double>(train.size());
  std::vector<double> mean(d, 0.0), sd(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double lo = train.front().features[j], hi = lo, sum = 0.0;
    for (const auto& s : train) {
      const double v = s.features[j];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    if (lo == hi) {
      mean[j] = lo;  // exact, so constant columns transform to 0
      continue;
    }
    mean[j] = sum / n;
    double sq = 0.0;
    for (const auto& s : train) sq += (s.features[j] - mean[j]) * (s.features[j] - mean[j]);
    sd[j] = std::sqrt(sq / n);
  }
  return Scaler(std::move(mean), std::move(sd));
}

Scaler Scaler::identity(std::size_t dims) {
  return Scaler(std::vector<double>(dims, 0.0), std::vector<double>(dims, 1.0));
}

std::vector<double> Scaler::transform(std::span<const double> x) const {
  if (x.size() != mean_.size()) throw UsageError("feature dimension mismatch in scaler");
  std::vector<double> z(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) z[j] = (x[j] - mean_[j]) / sd_[j];
  return z;
}

std::vector<double> Scaler::inverse_transform(std::span<const double> z) const {
  if (z.size() != mean_.size()) throw UsageError("feature dimension mismatch in scaler");
  std::vector<double> x(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) x[j] = z[j] * sd_[j] + mean_[j];
  return x;
}

std::vector<LabeledSample> Scaler::transform(std::span<const LabeledSample> samples) const {
  std::vector<LabeledSample> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back({transform(s.features), s.label, s.origin});
  return out;
}

}  // namespace mousedyn
