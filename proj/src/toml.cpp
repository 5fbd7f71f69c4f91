#include "trainclean/toml.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "trainclean/error.hpp"

namespace trainclean::toml {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  Document run() {
    Document doc;
    std::string table;
    while (true) {
      skip_blank_lines();
      if (at_end()) break;
      if (peek() == '[') {
        ++pos_;
        skip_spaces();
        table = bare_key();
        skip_spaces();
        expect(']');
        end_of_line();
        continue;
      }
      std::string key = key_path();
      skip_spaces();
      expect('=');
      skip_spaces();
      Value value = parse_value();
      end_of_line();
      const std::string full = table.empty() ? key : table + "." + key;
      if (!doc.emplace(full, std::move(value)).second) fail("duplicate key '" + full + "'");
    }
    return doc;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::config, "TOML line " + std::to_string(line_) + ": " + what);
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_spaces() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  void skip_comment() {
    if (peek() == '#')
      while (!at_end() && peek() != '\n') ++pos_;
  }

  // Whitespace, comments and newlines (used between statements and inside arrays).
  void skip_blank_lines() {
    while (!at_end()) {
      skip_spaces();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') {
        if (peek() == '\n') ++line_;
        ++pos_;
      } else {
        break;
      }
    }
  }

  void end_of_line() {
    skip_spaces();
    skip_comment();
    if (peek() == '\r') ++pos_;
    if (at_end()) return;
    if (peek() != '\n') fail("unexpected trailing characters");
    ++pos_;
    ++line_;
  }

  std::string bare_key() {
    std::string key;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-'))
      key += text_[pos_++];
    if (key.empty()) fail("expected a key");
    return key;
  }

  std::string key_path() {
    std::string key = bare_key();
    while (peek() == '.') {
      ++pos_;
      key += "." + bare_key();
    }
    return key;
  }

  std::string string_literal() {
    const char quote = peek();
    ++pos_;
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      char c = text_[pos_++];
      if (c == quote) break;
      if (c == '\\' && quote == '"') {
        if (at_end()) fail("unterminated string");
        char e = text_[pos_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      } else {
        out += c;
      }
    }
    return out;
  }

  Value parse_value() {
    const char c = peek();
    if (c == '"' || c == '\'') return {string_literal()};
    if (c == '[') {
      ++pos_;
      Array items;
      while (true) {
        skip_blank_lines();
        if (peek() == ']') {
          ++pos_;
          break;
        }
        items.push_back(parse_value());
        skip_blank_lines();
        if (peek() == ',') {
          ++pos_;
        } else if (peek() == ']') {
          ++pos_;
          break;
        } else {
          fail("expected ',' or ']' in array");
        }
      }
      return {std::move(items)};
    }
    std::string token;
    while (!at_end() && !std::isspace(static_cast<unsigned char>(peek())) && peek() != ',' && peek() != ']' &&
           peek() != '#')
      token += text_[pos_++];
    if (token == "true") return {true};
    if (token == "false") return {false};
    if (token.empty()) fail("expected a value");
    std::string digits;
    for (char ch : token)
      if (ch != '_') digits += ch;
    const bool is_float = digits.find_first_of(".eE") != std::string::npos || digits == "inf" || digits == "nan";
    try {
      std::size_t used = 0;
      if (is_float) {
        double v = std::stod(digits, &used);
        if (used == digits.size()) return {v};
      } else {
        long long v = std::stoll(digits, &used, 10);
        if (used == digits.size()) return {static_cast<std::int64_t>(v)};
      }
    } catch (const std::exception&) {
    }
    fail("invalid value '" + token + "'");
  }
};

}  // namespace

Document parse(const std::string& text) { return Parser(text).run(); }

Document parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

}  // namespace trainclean::toml
