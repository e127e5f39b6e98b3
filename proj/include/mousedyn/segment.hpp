#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mousedyn/ingest.hpp"

namespace mousedyn {

enum class ActionKind { MM = 0, PC = 1, DD = 2 };

inline constexpr std::array<ActionKind, 3> kAllActionKinds = {ActionKind::MM, ActionKind::PC,
                                                              ActionKind::DD};

std::string_view to_string(ActionKind kind);
ActionKind parse_action_kind(std::string_view text);  // "MM"/"mm", ...; throws UsageError

struct TrajectoryPoint {
  double t = 0.0;  // client clock, seconds
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

struct Action {
  std::string user_id;
  std::string session_id;
  std::size_t action_id = 0;  // ordinal within the session
  ActionKind kind = ActionKind::MM;
  std::vector<TrajectoryPoint> points;
  std::vector<std::size_t> source_events;  // indices into Session::events, parallel to points
};

struct SegmentConfig {
  double gap_threshold = 10.0;  // seconds
  std::size_t min_points = 4;

  void validate() const;  // throws UsageError
};

// Splits a session into MM / PC / DD actions.
//
// Scroll events are removed first. A Pressed event opens a click scope that
// absorbs the movement run preceding it; the matching Released closes it as DD
// when a Drag was seen inside the scope, else as PC. A pause longer than
// gap_threshold ends the current run (an open click scope is dropped). A run of
// movement events not followed by a click is MM. Stray Drag/Released events
// outside a scope end the current run and are dropped. Actions shorter than
// min_points are discarded.
std::vector<Action> segment_actions(const Session& session, const SegmentConfig& cfg);

using ActionCounts = std::array<std::size_t, 3>;  // indexed by ActionKind

ActionCounts action_counts(const std::vector<Action>& actions);

}  // namespace mousedyn
