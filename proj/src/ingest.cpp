#include "mousedyn/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <utility>

#include "mousedyn/error.hpp"

namespace mousedyn {
namespace {

constexpr std::array<std::pair<std::string_view, ButtonKind>, 4> kButtons = {{
    {"NoButton", ButtonKind::NoButton},
    {"Left", ButtonKind::Left},
    {"Right", ButtonKind::Right},
    {"Scroll", ButtonKind::Scroll},
}};

constexpr std::array<std::pair<std::string_view, StateKind>, 6> kStates = {{
    {"Move", StateKind::Move},
    {"Pressed", StateKind::Pressed},
    {"Released", StateKind::Released},
    {"Drag", StateKind::Drag},
    {"Down", StateKind::Down},
    {"Up", StateKind::Up},
}};

constexpr std::array<std::string_view, 3> kHeaderTokens = {"record timestamp", "rtime",
                                                           "record_timestamp"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> to_number(std::string_view field) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  if (field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::string format_number(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

bool is_click_state(StateKind s) {
  return s == StateKind::Pressed || s == StateKind::Released || s == StateKind::Drag;
}

}  // namespace

Button parse_button(std::string_view text) {
  text = trim(text);
  for (const auto& [name, kind] : kButtons) {
    if (name == text) return Button{kind, {}};
  }
  return Button{ButtonKind::Other, std::string(text)};
}

State parse_state(std::string_view text) {
  text = trim(text);
  for (const auto& [name, kind] : kStates) {
    if (name == text) return State{kind, {}};
  }
  return State{StateKind::Other, std::string(text)};
}

std::string to_string(const Button& b) {
  for (const auto& [name, kind] : kButtons) {
    if (kind == b.kind) return std::string(name);
  }
  return b.other;
}

std::string to_string(const State& s) {
  for (const auto& [name, kind] : kStates) {
    if (kind == s.kind) return std::string(name);
  }
  return s.other;
}

bool is_scroll(const RawEvent& e) {
  return e.button.kind == ButtonKind::Scroll || e.state.kind == StateKind::Down ||
         e.state.kind == StateKind::Up;
}

std::size_t Dataset::session_count() const {
  std::size_t n = 0;
  for (const auto& [user, sessions] : users) n += sessions.size();
  return n;
}

std::size_t Dataset::event_count() const {
  std::size_t n = 0;
  for (const auto& [user, sessions] : users) {
    for (const auto& s : sessions) n += s.events.size();
  }
  return n;
}

std::optional<RawEvent> parse_event_line(std::string_view line, std::size_t line_no) {
  std::array<std::string_view, 6> fields;
  std::size_t count = 0;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    const auto field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    if (count < fields.size()) fields[count] = field;
    ++count;
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (count != fields.size()) {
    throw ParseError(line_no, "expected 6 fields, got " + std::to_string(count));
  }

  const auto rtime = to_number(fields[0]);
  if (!rtime) {
    const auto token = trim(fields[0]);
    if (std::find(kHeaderTokens.begin(), kHeaderTokens.end(), token) != kHeaderTokens.end()) {
      return std::nullopt;
    }
    throw ParseError(line_no, "bad record timestamp '" + std::string(token) + "'");
  }
  const auto ctime = to_number(fields[1]);
  if (!ctime) throw ParseError(line_no, "bad client timestamp '" + std::string(trim(fields[1])) + "'");
  if (*rtime < 0.0 || *ctime < 0.0) throw ParseError(line_no, "negative timestamp");
  const auto x = to_number(fields[4]);
  if (!x) throw ParseError(line_no, "bad x coordinate '" + std::string(trim(fields[4])) + "'");
  const auto y = to_number(fields[5]);
  if (!y) throw ParseError(line_no, "bad y coordinate '" + std::string(trim(fields[5])) + "'");

  RawEvent e;
  e.rtime = *rtime;
  e.ctime = *ctime;
  e.button = parse_button(fields[2]);
  e.state = parse_state(fields[3]);
  e.x = *x;
  e.y = *y;
  return e;
}

std::string serialize_event(const RawEvent& e) {
  std::string out;
  out += format_number(e.rtime);
  out += ',';
  out += format_number(e.ctime);
  out += ',';
  out += to_string(e.button);
  out += ',';
  out += to_string(e.state);
  out += ',';
  out += format_number(e.x);
  out += ',';
  out += format_number(e.y);
  return out;
}

Session load_session(std::istream& source, std::string user_id, std::string session_id) {
  if (!source) throw IoError("unreadable session stream for " + user_id + "/" + session_id);

  std::vector<RawEvent> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (auto e = parse_event_line(line, line_no)) rows.push_back(std::move(*e));
  }
  if (source.bad()) throw IoError("read failure in session " + user_id + "/" + session_id);
  if (rows.empty()) throw DataError("session " + user_id + "/" + session_id + " has no data rows");

  std::stable_sort(rows.begin(), rows.end(),
                   [](const RawEvent& a, const RawEvent& b) { return a.ctime < b.ctime; });

  // Rows sharing a ctime collapse into one event: last coordinates, and the
  // last click-related state if any row in the group carries one.
  Session session{std::move(user_id), std::move(session_id), {}};
  session.events.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size();) {
    std::size_t j = i + 1;
    while (j < rows.size() && rows[j].ctime == rows[i].ctime) ++j;
    RawEvent merged = rows[j - 1];
    if (!is_click_state(merged.state.kind)) {
      for (std::size_t k = j - 1; k-- > i;) {
        if (is_click_state(rows[k].state.kind)) {
          merged.button = rows[k].button;
          merged.state = rows[k].state;
          break;
        }
      }
    }
    session.events.push_back(std::move(merged));
    i = j;
  }
  return session;
}

Session load_session_file(const std::filesystem::path& file, std::string user_id,
                          std::string session_id) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open session file " + file.string());
  return load_session(in, std::move(user_id), std::move(session_id));
}

std::string user_id_from_dirname(std::string_view name) {
  constexpr std::string_view prefix = "user";
  if (name.size() > prefix.size() && name.substr(0, prefix.size()) == prefix) {
    name.remove_prefix(prefix.size());
    if (!name.empty() && (name.front() == '_' || name.front() == '-')) name.remove_prefix(1);
  }
  return std::string(name);
}

namespace {

struct SessionJob {
  std::string user_id;
  std::string session_id;
  std::filesystem::path file;
};

struct JobResult {
  std::optional<Session> session;
  std::string warning;
};

std::vector<SessionJob> list_jobs(const std::filesystem::path& root, Dataset& dataset) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw IoError("dataset root not found: " + root.string());

  std::vector<fs::path> user_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) user_dirs.push_back(entry.path());
  }
  if (user_dirs.empty()) throw DataError("no users found under " + root.string());
  std::sort(user_dirs.begin(), user_dirs.end());

  std::vector<SessionJob> jobs;
  for (const auto& dir : user_dirs) {
    const auto user = user_id_from_dirname(dir.filename().string());
    dataset.users[user];  // users without sessions are still listed
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (auto& f : files) jobs.push_back({user, f.stem().string(), std::move(f)});
  }
  return jobs;
}

JobResult run_job(const SessionJob& job) {
  try {
    return {load_session_file(job.file, job.user_id, job.session_id), {}};
  } catch (const std::exception& e) {
    return {std::nullopt, "skipping session " + job.file.string() + ": " + e.what()};
  }
}

Dataset assemble(Dataset dataset, std::vector<JobResult> results) {
  for (auto& r : results) {
    if (!r.session) {
      dataset.warnings.push_back(std::move(r.warning));
      continue;
    }
    dataset.users[r.session->user_id].push_back(std::move(*r.session));
  }
  for (auto& [user, sessions] : dataset.users) {
    std::stable_sort(sessions.begin(), sessions.end(),
                     [](const Session& a, const Session& b) { return a.session_id < b.session_id; });
    if (sessions.empty()) dataset.warnings.push_back("user " + user + " has no parseable sessions");
  }
  return dataset;
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& root) {
  Dataset dataset;
  const auto jobs = list_jobs(root, dataset);
  std::vector<JobResult> results(jobs.size());
  const auto n = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    results[static_cast<std::size_t>(i)] = run_job(jobs[static_cast<std::size_t>(i)]);
  }
  return assemble(std::move(dataset), std::move(results));
}

namespace serial {

Dataset load_dataset(const std::filesystem::path& root) {
  Dataset dataset;
  const auto jobs = list_jobs(root, dataset);
  std::vector<JobResult> results;
  results.reserve(jobs.size());
  for (const auto& job : jobs) results.push_back(run_job(job));
  return assemble(std::move(dataset), std::move(results));
}

}  // namespace serial
}  // namespace mousedyn
