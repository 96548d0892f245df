#include "text_format.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace voxsim::detail {

const Token& Line::at(std::size_t i) const {
  if (i >= tokens.size()) fail("missing value", tokens.empty() ? 0 : tokens.size() - 1);
  return tokens[i];
}

void Line::fail(const std::string& message, std::size_t token) const {
  int column = token < tokens.size() ? tokens[token].column : 1;
  throw Error(ErrorKind::syntax,
              "line " + std::to_string(number) + ", column " + std::to_string(column) + ": " + message, number,
              column);
}

void Line::expect_count(std::size_t min, std::size_t max) const {
  if (tokens.size() < min) fail("too few values for '" + tokens.front().text + "'");
  if (tokens.size() > max) fail("unexpected value '" + tokens[max].text + "'", max);
}

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      char c = raw[i];
      if (c == ' ' || c == '\t' || c == '\r') {
        ++i;
        continue;
      }
      if (c == '#') break;
      Token tok;
      tok.column = static_cast<int>(i) + 1;
      if (c == '"') {
        tok.quoted = true;
        std::size_t close = raw.find('"', i + 1);
        if (close == std::string_view::npos) {
          line.tokens.push_back(tok);
          line.fail("unterminated string", line.tokens.size() - 1);
        }
        tok.text = std::string(raw.substr(i + 1, close - i - 1));
        i = close + 1;
      } else {
        std::size_t j = i;
        while (j < raw.size() && raw[j] != ' ' && raw[j] != '\t' && raw[j] != '\r' && raw[j] != '#') ++j;
        tok.text = std::string(raw.substr(i, j - i));
        i = j;
      }
      line.tokens.push_back(std::move(tok));
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

double to_number(const Line& line, std::size_t index) {
  const Token& tok = line.at(index);
  double value = 0.0;
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) line.fail("expected a number, got '" + tok.text + "'", index);
  return value;
}

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace voxsim::detail
