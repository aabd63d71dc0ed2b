#pragma once

// Human-play table over newline-delimited JSON. The message catalog is in
// docs/protocol.md.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "holdem/agents.hpp"
#include "holdem/modeling.hpp"

namespace holdem {

struct ServeConfig {
  /// Registry names for the seats after the human, who sits in seat 0.
  std::vector<std::string> opponents = {"observer"};
  std::uint64_t seed = 1;
  TableConfig table;
  Chips starting_stack = 200;
};

/// One human seat against agents. Feed it client lines; it returns the
/// server lines to send back, in order.
class ServeSession {
 public:
  static constexpr int kProtocolVersion = 1;
  static constexpr int kHeroSeat = 0;

  explicit ServeSession(ServeConfig config);
  ~ServeSession();
  ServeSession(const ServeSession&) = delete;
  ServeSession& operator=(const ServeSession&) = delete;

  std::vector<std::string> handle(std::string_view line);
  /// A client sent "quit".
  bool closed() const;
  /// Bumped by every state change; actions must quote the current value.
  std::uint64_t seq() const;
  long long hands_played() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Reads lines from `in` until EOF or quit, writing replies to `out`.
void serve_stream(ServeSession& session, std::istream& in, std::ostream& out);

/// Listens on 127.0.0.1:`port` (0 picks a free port) and serves clients one
/// connection at a time against the same session, so a reconnecting client
/// resumes the table. `on_listening` receives the bound port. Returns after
/// `max_connections` connections (0 = unlimited) or when a client quits.
void serve_tcp(ServeSession& session, int port, int max_connections,
               const std::function<void(int)>& on_listening);

}  // namespace holdem
