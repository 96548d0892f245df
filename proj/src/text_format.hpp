#pragma once

// Line/token reader shared by the voxicon/1 and scene/1 formats.

#include "voxsim/error.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace voxsim::detail {

struct Token {
  std::string text;
  int column = 0;
  bool quoted = false;
};

struct Line {
  int number = 0;
  std::vector<Token> tokens;

  const Token& at(std::size_t i) const;
  [[noreturn]] void fail(const std::string& message, std::size_t token = 0) const;
  void expect_count(std::size_t min, std::size_t max) const;
};

/// Splits into non-blank lines; `#` starts a comment outside quotes.
std::vector<Line> tokenize(std::string_view text);

double to_number(const Line& line, std::size_t index);
/// Shortest text that reads back to the same double.
std::string format_number(double value);

std::string read_file(const std::string& path);

}  // namespace voxsim::detail
