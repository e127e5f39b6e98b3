#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mousedyn {

enum class Label : std::uint8_t { Impostor = 0, Genuine = 1 };

struct Provenance {
  std::string user_id;
  std::string session_id;
  std::size_t action_id = 0;
};

struct LabeledSample {
  std::vector<double> features;
  Label label = Label::Genuine;
  Provenance origin;
};

struct Split {
  std::vector<LabeledSample> train;
  std::vector<LabeledSample> test;
};

// Stratified split: per label, shuffle and keep floor(ratio * n) for training.
// Both halves are shuffled again afterwards. Requires at least two labels with
// two samples each; throws DataError otherwise.
Split train_test_split(std::span<const LabeledSample> samples, double ratio, std::uint64_t seed);

// Unstratified variant for single-class data. Requires two samples.
Split shuffle_split(std::span<const LabeledSample> samples, double ratio, std::uint64_t seed);

// Per-feature standardisation fitted on training data.
class Scaler {
 public:
  Scaler() = default;
  Scaler(std::vector<double> mean, std::vector<double> sd);

  static Scaler fit(std::span<const LabeledSample> train);
  static Scaler identity(std::size_t dims);

  std::vector<double> transform(std::span<const double> x) const;
  std::vector<double> inverse_transform(std::span<const double> z) const;
  std::vector<LabeledSample> transform(std::span<const LabeledSample> samples) const;

  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& sd() const { return sd_; }  // already floored at epsilon

 private:
  std::vector<double> mean_;
  std::vector<double> sd_;
};

}  // namespace mousedyn
