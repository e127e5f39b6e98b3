#include "mousedyn/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>

#include "mousedyn/error.hpp"

namespace mousedyn {

const std::array<std::string_view, kFeatureCount>& feature_names() {
  static constexpr std::array<std::string_view, kFeatureCount> names = {
      "type_of_action", "travelled_distance_in_pixels", "elapsed_time", "direction_of_movement",
      "straightness", "num_points", "sum_of_angles",
      "mean_curv", "sd_curv", "max_curv", "min_curv",
      "mean_omega", "sd_omega", "max_omega", "min_omega",
      "largest_deviation", "dist_end_to_end_line", "num_critical_points",
      "mean_vx", "sd_vx", "max_vx", "min_vx",
      "mean_vy", "sd_vy", "max_vy", "min_vy",
      "mean_v", "sd_v", "max_v", "min_v",
      "mean_a", "sd_a", "max_a", "min_a",
      "mean_jerk", "sd_jerk", "max_jerk", "min_jerk",
      "a_beg_time",
  };
  return names;
}

void FeatureConfig::validate() const {
  if (!(curvature_threshold >= 0.0) || !std::isfinite(curvature_threshold)) {
    throw UsageError("curvature_threshold must be a finite value >= 0");
  }
}

namespace {

// atan2 yields -pi for some inputs; headings and turns live in (-pi, pi].
double wrap_pi(double angle) {
  return angle == -std::numbers::pi ? std::numbers::pi : angle;
}

struct Stats {
  double mean = 0.0;
  double sd = 0.0;
  double max = 0.0;
  double min = 0.0;
};

Stats stats_of(std::span<const double> xs) {
  if (xs.empty()) return {};
  Stats s;
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  s.min = *lo;
  s.max = *hi;
  double sum = 0.0;
  for (const double x : xs) sum += x;
  s.mean = std::clamp(sum / static_cast<double>(xs.size()), s.min, s.max);
  double sq = 0.0;
  for (const double x : xs) sq += (x - s.mean) * (x - s.mean);
  s.sd = std::sqrt(sq / static_cast<double>(xs.size()));
  return s;
}

void put_stats(FeatureVector& fv, Feature mean, std::span<const double> series) {
  const auto s = stats_of(series);
  const auto base = index_of(mean);
  fv.values[base] = s.mean;
  fv.values[base + 1] = s.sd;
  fv.values[base + 2] = s.max;
  fv.values[base + 3] = s.min;
}

std::string format_number(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

}  // namespace

KinematicSeries kinematics(std::span<const TrajectoryPoint> points) {
  KinematicSeries k;
  const std::size_t n = points.size();
  if (n < 2) return k;
  const std::size_t steps = n - 1;
  k.dt.resize(steps);
  k.ds.resize(steps);
  k.vx.resize(steps);
  k.vy.resize(steps);
  k.v.resize(steps);
  k.theta.resize(steps);

  std::vector<double> dx(steps), dy(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    dx[i] = points[i + 1].x - points[i].x;
    dy[i] = points[i + 1].y - points[i].y;
    k.dt[i] = points[i + 1].t - points[i].t;
    k.ds[i] = std::hypot(dx[i], dy[i]);
    const double dt = std::max(k.dt[i], kEpsilon);
    k.vx[i] = dx[i] / dt;
    k.vy[i] = dy[i] / dt;
    k.v[i] = std::hypot(k.vx[i], k.vy[i]);
  }

  // Headings; zero-length steps carry the previous heading, leading ones take
  // the first real heading.
  std::ptrdiff_t first_real = -1;
  for (std::size_t i = 0; i < steps; ++i) {
    if (k.ds[i] > 0.0) {
      k.theta[i] = wrap_pi(std::atan2(dy[i], dx[i]));
      if (first_real < 0) first_real = static_cast<std::ptrdiff_t>(i);
    } else if (i > 0) {
      k.theta[i] = k.theta[i - 1];
    }
  }
  if (first_real > 0) {
    std::fill_n(k.theta.begin(), first_real, k.theta[static_cast<std::size_t>(first_real)]);
  }

  if (n < 3) return k;
  const std::size_t turns = n - 2;
  k.dtheta.resize(turns);
  k.omega.resize(turns);
  k.curv.resize(turns);
  k.a.resize(turns);
  // Turning angle from the last non-degenerate step to the next one.
  bool have_dir = k.ds[0] > 0.0;
  double dir_x = dx[0], dir_y = dy[0];
  for (std::size_t i = 0; i < turns; ++i) {
    const std::size_t next = i + 1;
    double turn = 0.0;
    if (k.ds[next] > 0.0) {
      if (have_dir) {
        const double cross = dir_x * dy[next] - dir_y * dx[next];
        const double dot = dir_x * dx[next] + dir_y * dy[next];
        turn = wrap_pi(std::atan2(cross, dot));
      }
      have_dir = true;
      dir_x = dx[next];
      dir_y = dy[next];
    }
    const double dt = std::max(k.dt[next], kEpsilon);
    k.dtheta[i] = turn;
    k.omega[i] = turn / dt;
    k.curv[i] = k.ds[next] > 0.0 ? turn / k.ds[next] : 0.0;
    k.a[i] = (k.v[next] - k.v[i]) / dt;
  }

  if (n < 4) return k;
  k.jerk.resize(n - 3);
  for (std::size_t i = 0; i + 3 < n; ++i) {
    k.jerk[i] = (k.a[i + 1] - k.a[i]) / std::max(k.dt[i + 2], kEpsilon);
  }
  return k;
}

double largest_deviation(std::span<const TrajectoryPoint> points) {
  if (points.size() < 2) return 0.0;
  const auto& first = points.front();
  const auto& last = points.back();
  const double lx = last.x - first.x;
  const double ly = last.y - first.y;
  const double len = std::hypot(lx, ly);
  double best = 0.0;
  if (len == 0.0) {
    for (const auto& p : points) best = std::max(best, std::hypot(p.x - first.x, p.y - first.y));
    return best;
  }
  for (std::size_t i = 1; i + 1 < points.size(); ++i) {
    const double cross = lx * (points[i].y - first.y) - ly * (points[i].x - first.x);
    best = std::max(best, std::abs(cross) / len);
  }
  return best;
}

std::size_t num_critical_points(std::span<const double> curv, double threshold) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < curv.size(); ++i) {
    const double c = std::abs(curv[i]);
    if (c < threshold) continue;
    if (i > 0 && !(c > std::abs(curv[i - 1]))) continue;
    if (i + 1 < curv.size() && !(c > std::abs(curv[i + 1]))) continue;
    ++count;
  }
  return count;
}

double a_beg_time(std::span<const double> v, std::span<const double> dt) {
  const std::size_t n = std::min(v.size(), dt.size());
  std::size_t peak = n == 0 ? 0 : n - 1;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (v[i + 1] < v[i]) {
      peak = i;
      while (peak > 0 && v[peak - 1] == v[peak]) --peak;
      break;
    }
  }
  double elapsed = 0.0;
  for (std::size_t i = 0; i < n && i <= peak; ++i) elapsed += dt[i];
  return elapsed;
}

FeatureVector extract_features(const Action& action, const FeatureConfig& cfg) {
  const auto& pts = action.points;
  const auto k = kinematics(pts);

  FeatureVector fv;
  fv.user_id = action.user_id;
  fv.session_id = action.session_id;
  fv.action_id = action.action_id;
  fv.kind = action.kind;

  fv[Feature::TypeOfAction] = static_cast<double>(static_cast<int>(action.kind));
  fv[Feature::NumPoints] = static_cast<double>(pts.size());
  if (pts.empty()) return fv;

  double travelled = 0.0;
  for (const double ds : k.ds) travelled += ds;
  const double ex = pts.back().x - pts.front().x;
  const double ey = pts.back().y - pts.front().y;
  const double end_to_end = std::hypot(ex, ey);
  double sum_angles = 0.0;
  for (const double d : k.dtheta) sum_angles += std::abs(d);

  fv[Feature::TravelledDistance] = travelled;
  fv[Feature::ElapsedTime] = pts.back().t - pts.front().t;
  fv[Feature::Direction] = end_to_end == 0.0 ? 0.0 : wrap_pi(std::atan2(ey, ex));
  fv[Feature::Straightness] =
      end_to_end == 0.0 ? 0.0 : std::clamp(end_to_end / std::max(travelled, kEpsilon), 0.0, 1.0);
  fv[Feature::SumOfAngles] = sum_angles;
  put_stats(fv, Feature::MeanCurv, k.curv);
  put_stats(fv, Feature::MeanOmega, k.omega);
  fv[Feature::LargestDeviation] = largest_deviation(pts);
  fv[Feature::DistEndToEnd] = end_to_end;
  fv[Feature::NumCriticalPoints] =
      static_cast<double>(num_critical_points(k.curv, cfg.curvature_threshold));
  put_stats(fv, Feature::MeanVx, k.vx);
  put_stats(fv, Feature::MeanVy, k.vy);
  put_stats(fv, Feature::MeanV, k.v);
  put_stats(fv, Feature::MeanA, k.a);
  put_stats(fv, Feature::MeanJerk, k.jerk);
  fv[Feature::ABegTime] = a_beg_time(k.v, k.dt);
  return fv;
}

namespace {

std::vector<const Session*> session_list(const Dataset& dataset) {
  std::vector<const Session*> out;
  for (const auto& [user, sessions] : dataset.users) {
    for (const auto& s : sessions) out.push_back(&s);
  }
  return out;
}

FeatureTable session_features(const Session& session, const SegmentConfig& seg_cfg,
                              const FeatureConfig& feat_cfg) {
  FeatureTable rows;
  for (const auto& action : segment_actions(session, seg_cfg)) {
    rows.push_back(extract_features(action, feat_cfg));
  }
  return rows;
}

FeatureTable concat(std::vector<FeatureTable> parts) {
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  FeatureTable out;
  out.reserve(total);
  for (auto& p : parts) std::move(p.begin(), p.end(), std::back_inserter(out));
  return out;
}

}  // namespace

FeatureTable extract_all(const Dataset& dataset, const SegmentConfig& seg_cfg,
                         const FeatureConfig& feat_cfg) {
  seg_cfg.validate();
  feat_cfg.validate();
  const auto sessions = session_list(dataset);
  std::vector<FeatureTable> parts(sessions.size());
  const auto n = static_cast<std::ptrdiff_t>(sessions.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    parts[idx] = session_features(*sessions[idx], seg_cfg, feat_cfg);
  }
  return concat(std::move(parts));
}

namespace serial {

FeatureTable extract_all(const Dataset& dataset, const SegmentConfig& seg_cfg,
                         const FeatureConfig& feat_cfg) {
  seg_cfg.validate();
  feat_cfg.validate();
  std::vector<FeatureTable> parts;
  for (const auto* s : session_list(dataset)) parts.push_back(session_features(*s, seg_cfg, feat_cfg));
  return concat(std::move(parts));
}

}  // namespace serial

void write_feature_csv(std::ostream& out, const FeatureTable& table) {
  out << "user_id,session_id,action_id,kind";
  for (const auto name : feature_names()) out << ',' << name;
  out << '\n';
  for (const auto& row : table) {
    out << row.user_id << ',' << row.session_id << ',' << row.action_id << ','
        << to_string(row.kind);
    for (const double v : row.values) out << ',' << format_number(v);
    out << '\n';
  }
}

FeatureTable read_feature_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("feature table is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    std::string expected = "user_id,session_id,action_id,kind";
    for (const auto name : feature_names()) (expected += ',') += name;
    if (line != expected) throw ParseError(1, "unexpected feature table header");
  }

  FeatureTable table;
  std::size_t line_no = 1;
  std::vector<std::string_view> fields;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    fields.clear();
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 4 + kFeatureCount) {
      throw ParseError(line_no, "expected " + std::to_string(4 + kFeatureCount) + " fields, got " +
                                    std::to_string(fields.size()));
    }
    FeatureVector fv;
    fv.user_id = std::string(fields[0]);
    fv.session_id = std::string(fields[1]);
    {
      const auto f = fields[2];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), fv.action_id);
      if (ec != std::errc{} || ptr != f.data() + f.size()) throw ParseError(line_no, "bad action_id");
    }
    try {
      fv.kind = parse_action_kind(fields[3]);
    } catch (const UsageError& e) {
      throw ParseError(line_no, e.what());
    }
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      const auto f = fields[4 + j];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc{} || ptr != f.data() + f.size() || !std::isfinite(v)) {
        throw ParseError(line_no, "bad value for " + std::string(feature_names()[j]));
      }
      fv.values[j] = v;
    }
    table.push_back(std::move(fv));
  }
  if (in.bad()) throw IoError("read failure in feature table");
  return table;
}

}  // namespace mousedyn
