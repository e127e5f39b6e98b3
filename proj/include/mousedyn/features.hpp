#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mousedyn/ingest.hpp"
#include "mousedyn/segment.hpp"

namespace mousedyn {

inline constexpr std::size_t kFeatureCount = 39;
inline constexpr double kEpsilon = 1e-12;

// Column order of the feature table, following the behavioural feature ranking.
enum class Feature : std::size_t {
  TypeOfAction,
  TravelledDistance,
  ElapsedTime,
  Direction,
  Straightness,
  NumPoints,
  SumOfAngles,
  MeanCurv, SdCurv, MaxCurv, MinCurv,
  MeanOmega, SdOmega, MaxOmega, MinOmega,
  LargestDeviation,
  DistEndToEnd,
  NumCriticalPoints,
  MeanVx, SdVx, MaxVx, MinVx,
  MeanVy, SdVy, MaxVy, MinVy,
  MeanV, SdV, MaxV, MinV,
  MeanA, SdA, MaxA, MinA,
  MeanJerk, SdJerk, MaxJerk, MinJerk,
  ABegTime,
};

const std::array<std::string_view, kFeatureCount>& feature_names();

constexpr std::size_t index_of(Feature f) { return static_cast<std::size_t>(f); }

struct FeatureConfig {
  double curvature_threshold = 0.5;  // rad/pixel

  void validate() const;
};

struct KinematicSeries {
  std::vector<double> dt;      // n-1
  std::vector<double> ds;      // n-1, step lengths
  std::vector<double> vx;      // n-1
  std::vector<double> vy;      // n-1
  std::vector<double> v;       // n-1
  std::vector<double> theta;   // n-1
  std::vector<double> dtheta;  // n-2, wrapped to (-pi, pi]
  std::vector<double> omega;   // n-2
  std::vector<double> curv;    // n-2
  std::vector<double> a;       // n-2
  std::vector<double> jerk;    // n-3
};

// Finite differences over the action's points. Derived series at index i use
// the time step that ends at the later sample, e.g. a[i] = (v[i+1]-v[i])/dt[i+1].
// Zero-length steps inherit the previous heading (the first real heading for
// leading ones), so they contribute dtheta = 0 and curv = 0.
KinematicSeries kinematics(std::span<const TrajectoryPoint> points);

// Max perpendicular distance of interior points from the first-last line;
// max distance from the first point when the endpoints coincide.
double largest_deviation(std::span<const TrajectoryPoint> points);

// Strict local maxima of |curv| at or above the threshold. Neighbours outside
// the series are ignored.
std::size_t num_critical_points(std::span<const double> curv, double threshold);

// Time from the action start until the first speed peak: the first sample
// followed by a drop in speed (start of a plateau if the peak is flat). The
// whole duration when speed never drops.
double a_beg_time(std::span<const double> v, std::span<const double> dt);

struct FeatureVector {
  std::string user_id;
  std::string session_id;
  std::size_t action_id = 0;
  ActionKind kind = ActionKind::MM;
  std::array<double, kFeatureCount> values{};

  double operator[](Feature f) const { return values[index_of(f)]; }
  double& operator[](Feature f) { return values[index_of(f)]; }
};

FeatureVector extract_features(const Action& action, const FeatureConfig& cfg);

using FeatureTable = std::vector<FeatureVector>;

// Segments every session and extracts one row per retained action, ordered by
// user, session and action id. Sessions are processed in parallel.
FeatureTable extract_all(const Dataset& dataset, const SegmentConfig& seg_cfg,
                         const FeatureConfig& feat_cfg);

namespace serial {
FeatureTable extract_all(const Dataset& dataset, const SegmentConfig& seg_cfg,
                         const FeatureConfig& feat_cfg);
}  // namespace serial

// Feature table CSV: user_id,session_id,action_id,kind,<39 feature names>.
void write_feature_csv(std::ostream& out, const FeatureTable& table);
FeatureTable read_feature_csv(std::istream& in);

}  // namespace mousedyn
