#include "mousedyn/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "mousedyn/error.hpp"

namespace mousedyn {
namespace {

void check_inputs(std::span<const double> scores, std::span<const Label> labels) {
  if (scores.size() != labels.size()) throw DataError("scores and labels differ in length");
  if (scores.empty()) throw DataError("no scores to evaluate");
}

std::pair<std::size_t, std::size_t> class_sizes(std::span<const Label> labels) {
  const auto pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::Genuine));
  return {pos, labels.size() - pos};
}

void require_both_classes(std::span<const Label> labels) {
  const auto [pos, neg] = class_sizes(labels);
  if (pos == 0) throw DataError("no genuine samples");
  if (neg == 0) throw DataError("no impostor samples");
}

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionMatrix confusion(std::span<const double> scores, std::span<const Label> labels,
                          double threshold) {
  check_inputs(scores, labels);
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool accepted = scores[i] >= threshold;
    if (labels[i] == Label::Genuine) {
      accepted ? ++cm.tp : ++cm.fn;
    } else {
      accepted ? ++cm.fp : ++cm.tn;
    }
  }
  return cm;
}

Rates metrics(const ConfusionMatrix& cm) {
  Rates r;
  r.acc = ratio(cm.tp + cm.tn, cm.total());
  r.tpr = ratio(cm.tp, cm.tp + cm.fn);
  r.tnr = ratio(cm.tn, cm.tn + cm.fp);
  r.fpr = ratio(cm.fp, cm.fp + cm.tn);
  r.fnr = ratio(cm.fn, cm.fn + cm.tp);
  return r;
}

FarFrr far_frr(std::span<const double> scores, std::span<const Label> labels, double threshold) {
  check_inputs(scores, labels);
  require_both_classes(labels);
  const auto cm = confusion(scores, labels, threshold);
  return {static_cast<double>(cm.fp) / static_cast<double>(cm.fp + cm.tn),
          static_cast<double>(cm.fn) / static_cast<double>(cm.fn + cm.tp)};
}

double half_total_error(double far, double frr) { return (far + frr) / 2.0; }

RocCurve roc_curve(std::span<const double> scores, std::span<const Label> labels) {
  check_inputs(scores, labels);
  require_both_classes(labels);
  const auto [pos, neg] = class_sizes(labels);

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == s; ++i) {
      labels[order[i]] == Label::Genuine ? ++tp : ++fp;
    }
    curve.points.push_back({s, static_cast<double>(fp) / static_cast<double>(neg),
                            static_cast<double>(tp) / static_cast<double>(pos)});
  }
  return curve;
}

double auc(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  return area;
}

double eer_roc(const RocCurve& curve) {
  const auto& pts = curve.points;
  if (pts.empty()) throw DataError("empty ROC curve");
  // g = FPR - FNR rises from -1 at (0,0) to +1 at (1,1).
  auto g = [](const RocPoint& p) { return p.fpr - (1.0 - p.tpr); };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double gi = g(pts[i]);
    if (gi < 0.0) continue;
    if (gi == 0.0 || i == 0) return pts[i].fpr;
    const double gp = g(pts[i - 1]);
    const double lambda = -gp / (gi - gp);
    return pts[i - 1].fpr + lambda * (pts[i].fpr - pts[i - 1].fpr);
  }
  return pts.back().fpr;
}

}  // namespace mousedyn
