#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mousedyn {

enum class ButtonKind { NoButton, Left, Right, Scroll, Other };
enum class StateKind { Move, Pressed, Released, Drag, Down, Up, Other };

// Enum token with the original text kept for vendor-specific values.
template <typename Kind>
struct Token {
  Kind kind{};
  std::string other;  // only meaningful when kind == Kind::Other

  friend bool operator==(const Token&, const Token&) = default;
};

using Button = Token<ButtonKind>;
using State = Token<StateKind>;

Button parse_button(std::string_view text);
State parse_state(std::string_view text);
std::string to_string(const Button& b);
std::string to_string(const State& s);

struct RawEvent {
  double rtime = 0.0;  // seconds, network monitor clock
  double ctime = 0.0;  // seconds, client clock
  Button button;
  State state;
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const RawEvent&, const RawEvent&) = default;
};

bool is_scroll(const RawEvent& e);

struct Session {
  std::string user_id;
  std::string session_id;
  std::vector<RawEvent> events;  // strictly increasing ctime
};

struct Dataset {
  std::map<std::string, std::vector<Session>> users;
  std::vector<std::string> warnings;

  std::size_t session_count() const;
  std::size_t event_count() const;
};

// Parses one `rtime,ctime,button,state,x,y` row. Returns nullopt for a header
// row. Throws ParseError carrying `line_no` on malformed data rows.
std::optional<RawEvent> parse_event_line(std::string_view line, std::size_t line_no);

// Canonical text form; shortest round-trip formatting for numbers.
std::string serialize_event(const RawEvent& e);

// Reads all rows, sorts by ctime and merges events sharing a ctime.
// Throws DataError when no valid rows remain, IoError when the stream fails.
Session load_session(std::istream& source, std::string user_id, std::string session_id);
Session load_session_file(const std::filesystem::path& file, std::string user_id,
                          std::string session_id);

// Directory name to user id: a leading "user" prefix is stripped ("user7" -> "7").
std::string user_id_from_dirname(std::string_view name);

// Walks `<root>/<user>/<session file>`. Session files are parsed in parallel;
// the result is identical to load_dataset_serial.
Dataset load_dataset(const std::filesystem::path& root);

namespace serial {
Dataset load_dataset(const std::filesystem::path& root);
}  // namespace serial

}  // namespace mousedyn
