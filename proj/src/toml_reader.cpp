// Minimal reader for the TOML shape of task-set files. Supports [table],
// [[array.of.tables]], dotted-free bare keys, basic and literal strings,
// integers and (possibly multi-line) arrays of those. Anything else is a
// ParseError with its line number.

#include <cctype>

#include "ssrta/io.hpp"

namespace ssrta {

using nlohmann::json;

namespace {

class TomlReader {
public:
  explicit TomlReader(const std::string& text) : text_(text) {}

  json run() {
    json root = json::object();
    json* table = &root;
    while (skip_blank(), pos_ < text_.size()) {
      if (peek() == '[') {
        table = header(root);
      } else {
        key_value(*table);
      }
      end_of_line();
    }
    return root;
  }

private:
  const std::string& text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;

  [[noreturn]] void fail(const std::string& msg, const std::string& field = "") const {
    throw ParseError("TOML line " + std::to_string(line_) + ": " + msg, line_, field);
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void advance() {
    if (text_[pos_] == '\n') ++line_;
    ++pos_;
  }

  void skip_spaces() {
    while (pos_ < text_.size() && (peek() == ' ' || peek() == '\t')) advance();
  }

  void skip_comment() {
    if (peek() == '#')
      while (pos_ < text_.size() && peek() != '\n') advance();
  }

  // Whitespace, newlines and comments.
  void skip_blank() {
    for (;;) {
      skip_spaces();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') {
        advance();
        continue;
      }
      return;
    }
  }

  void end_of_line() {
    skip_spaces();
    skip_comment();
    if (peek() == '\r') advance();
    if (pos_ < text_.size()) {
      if (peek() != '\n') fail("unexpected trailing characters");
      advance();
    }
  }

  std::string bare_key() {
    std::string key;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) {
      key += peek();
      advance();
    }
    if (key.empty()) fail("expected a key");
    return key;
  }

  json* header(json& root) {
    advance();
    const bool array = peek() == '[';
    if (array) advance();
    skip_spaces();
    std::string name = bare_key();
    skip_spaces();
    if (peek() != ']') fail("expected ']' after table name", name);
    advance();
    if (array) {
      if (peek() != ']') fail("expected ']]' after array-of-tables name", name);
      advance();
      json& arr = root[name];
      if (arr.is_null()) arr = json::array();
      if (!arr.is_array()) fail("'" + name + "' redefined as an array of tables", name);
      arr.push_back(json::object());
      return &arr.back();
    }
    if (root.contains(name)) fail("table '" + name + "' defined twice", name);
    root[name] = json::object();
    return &root[name];
  }

  void key_value(json& table) {
    std::string key = bare_key();
    skip_spaces();
    if (peek() != '=') fail("expected '=' after key", key);
    advance();
    skip_spaces();
    if (table.contains(key)) fail("duplicate key '" + key + "'", key);
    table[key] = value(key);
  }

  json value(const std::string& key) {
    const char c = peek();
    if (c == '"' || c == '\'') return string_value(key);
    if (c == '[') return array_value(key);
    if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) return integer_value(key);
    fail("unsupported value", key);
  }

  json string_value(const std::string& key) {
    const char quote = peek();
    advance();
    std::string out;
    while (peek() != quote) {
      if (pos_ >= text_.size() || peek() == '\n') fail("unterminated string", key);
      if (quote == '"' && peek() == '\\') {
        advance();
        switch (peek()) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          default: fail("unsupported escape sequence", key);
        }
        advance();
        continue;
      }
      out += peek();
      advance();
    }
    advance();
    return out;
  }

  json integer_value(const std::string& key) {
    std::string digits;
    if (peek() == '+' || peek() == '-') {
      digits += peek();
      advance();
    }
    while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_') {
      if (peek() != '_') digits += peek();
      advance();
    }
    if (peek() == '.' || peek() == 'e' || peek() == 'E') fail("floating-point values are not accepted, use \"p/q\"", key);
    if (digits.empty() || digits == "-" || digits == "+") fail("malformed integer", key);
    try {
      return std::stoll(digits);
    } catch (const std::exception&) {
      fail("integer out of range", key);
    }
  }

  json array_value(const std::string& key) {
    advance();
    json arr = json::array();
    for (;;) {
      skip_blank();
      if (peek() == ']') {
        advance();
        return arr;
      }
      arr.push_back(value(key));
      skip_blank();
      if (peek() == ',') {
        advance();
        continue;
      }
      if (peek() != ']') fail("expected ',' or ']' in array", key);
    }
  }
};

}  // namespace

json parse_toml_subset(const std::string& text) { return TomlReader(text).run(); }

}  // namespace ssrta
