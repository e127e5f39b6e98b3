#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mousedyn/learn.hpp"

namespace mousedyn {

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + tn + fp + fn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// Scores at or above the threshold are accepted as Genuine. Throws DataError
// on empty or mismatched input.
ConfusionMatrix confusion(std::span<const double> scores, std::span<const Label> labels,
                          double threshold = 0.5);

// Undefined (zero-denominator) rates are nullopt.
struct Rates {
  std::optional<double> acc;
  std::optional<double> tpr;
  std::optional<double> tnr;
  std::optional<double> fpr;
  std::optional<double> fnr;
};

Rates metrics(const ConfusionMatrix& cm);

struct FarFrr {
  double far = 0.0;
  double frr = 0.0;
};

// Throws DataError when either class is missing.
FarFrr far_frr(std::span<const double> scores, std::span<const Label> labels, double threshold);

// Half total error, (FAR + FRR) / 2.
double half_total_error(double far, double frr);

struct RocPoint {
  double threshold = 0.0;  // +inf for the origin
  double fpr = 0.0;
  double tpr = 0.0;

  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

struct RocCurve {
  std::vector<RocPoint> points;  // (0,0) first, (1,1) last
};

// One point per distinct score, descending, after the (0,0) origin.
// Throws DataError when either class is missing.
RocCurve roc_curve(std::span<const double> scores, std::span<const Label> labels);

double auc(const RocCurve& curve);

// FPR where FPR = 1 - TPR, interpolated linearly along the curve.
double eer_roc(const RocCurve& curve);

}  // namespace mousedyn
