#pragma once

// Minimal XML DOM for the game-log format: elements, attributes, comments and
// the five predefined entities. Text content other than whitespace is
// rejected. Positions are 1-based line and column.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace holdem::xml {

struct Node {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Node> children;
  int line = 0;
  int column = 0;

  const std::string* attribute(std::string_view key) const;
};

/// Throws holdem::LogError with the position of the problem.
Node parse(std::string_view text);

std::string escape(std::string_view text);

}  // namespace holdem::xml
