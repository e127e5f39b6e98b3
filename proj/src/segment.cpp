#include "mousedyn/segment.hpp"

#include <cctype>

#include "mousedyn/error.hpp"

namespace mousedyn {

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::MM: return "MM";
    case ActionKind::PC: return "PC";
    case ActionKind::DD: return "DD";
  }
  return "?";
}

ActionKind parse_action_kind(std::string_view text) {
  std::string upper(text);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "MM") return ActionKind::MM;
  if (upper == "PC") return ActionKind::PC;
  if (upper == "DD") return ActionKind::DD;
  throw UsageError("unknown action kind '" + std::string(text) + "' (expected mm, pc or dd)");
}

void SegmentConfig::validate() const {
  if (!(gap_threshold > 0.0)) throw UsageError("gap_threshold must be > 0");
  if (min_points < 4) throw UsageError("min_points must be >= 4");
}

namespace {

class Segmenter {
 public:
  Segmenter(const Session& session, const SegmentConfig& cfg) : session_(session), cfg_(cfg) {}

  std::vector<Action> run() {
    bool have_prev = false;
    double prev_t = 0.0;
    for (std::size_t i = 0; i < session_.events.size(); ++i) {
      const RawEvent& e = session_.events[i];
      if (is_scroll(e)) continue;

      if (have_prev && e.ctime - prev_t > cfg_.gap_threshold) close_run();
      have_prev = true;
      prev_t = e.ctime;

      switch (e.state.kind) {
        case StateKind::Pressed:
          if (in_scope_) run_.clear();  // previous press never released
          run_.push_back(i);
          in_scope_ = true;
          saw_drag_ = false;
          break;
        case StateKind::Released:
          if (in_scope_) {
            run_.push_back(i);
            emit(saw_drag_ ? ActionKind::DD : ActionKind::PC);
            in_scope_ = false;
          } else {
            close_run();
          }
          break;
        case StateKind::Drag:
          if (in_scope_) {
            run_.push_back(i);
            saw_drag_ = true;
          } else {
            close_run();
          }
          break;
        default:
          run_.push_back(i);
          break;
      }
    }
    close_run();
    return std::move(actions_);
  }

 private:
  // Ends the current run: movement becomes MM, an open click scope is dropped.
  void close_run() {
    if (in_scope_) {
      run_.clear();
      in_scope_ = false;
    } else if (!run_.empty()) {
      emit(ActionKind::MM);
    }
  }

  void emit(ActionKind kind) {
    if (run_.size() >= cfg_.min_points) {
      Action a;
      a.user_id = session_.user_id;
      a.session_id = session_.session_id;
      a.action_id = actions_.size();
      a.kind = kind;
      a.points.reserve(run_.size());
      for (const auto idx : run_) {
        const RawEvent& e = session_.events[idx];
        a.points.push_back({e.ctime, e.x, e.y});
      }
      a.source_events = run_;
      actions_.push_back(std::move(a));
    }
    run_.clear();
  }

  const Session& session_;
  const SegmentConfig& cfg_;
  std::vector<std::size_t> run_;
  bool in_scope_ = false;
  bool saw_drag_ = false;
  std::vector<Action> actions_;
};

}  // namespace

std::vector<Action> segment_actions(const Session& session, const SegmentConfig& cfg) {
  cfg.validate();
  return Segmenter(session, cfg).run();
}

ActionCounts action_counts(const std::vector<Action>& actions) {
  ActionCounts counts{};
  for (const auto& a : actions) ++counts[static_cast<std::size_t>(a.kind)];
  return counts;
}

}  // namespace mousedyn
