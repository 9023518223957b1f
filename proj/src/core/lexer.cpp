#include "lexer.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace tta::detail {

void parse_error(int line, const std::string& what) {
  fail(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what);
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    Line line;
    line.number = number;
    std::size_t i = 0;
    while (i < raw.size()) {
      char c = raw[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (c == '#') {
        break;
      } else if (c == '"') {
        std::size_t end = raw.find('"', i + 1);
        if (end == std::string::npos) parse_error(number, "unterminated string");
        line.tokens.push_back(Token{Token::Kind::String, raw.substr(i + 1, end - i - 1), {}});
        i = end + 1;
      } else if (c == '{') {
        std::size_t end = raw.find('}', i + 1);
        if (end == std::string::npos) parse_error(number, "unterminated set");
        Token t{Token::Kind::Set, raw.substr(i, end - i + 1), {}};
        std::string body = raw.substr(i + 1, end - i - 1);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
          item = trim(item);
          if (item.empty()) continue;
          if (!is_identifier(item)) parse_error(number, "bad set member '" + item + "'");
          t.items.push_back(item);
        }
        line.tokens.push_back(std::move(t));
        i = end + 1;
      } else {
        std::size_t end = i;
        while (end < raw.size() && !std::isspace(static_cast<unsigned char>(raw[end])) && raw[end] != '#' &&
               raw[end] != '"' && raw[end] != '{')
          ++end;
        line.tokens.push_back(Token{Token::Kind::Word, raw.substr(i, end - i), {}});
        i = end;
      }
    }
    if (!line.tokens.empty()) out.push_back(std::move(line));
  }
  return out;
}

const std::string& word(const Line& l, std::size_t i, const char* what) {
  if (i >= l.tokens.size() || l.tokens[i].kind != Token::Kind::Word)
    parse_error(l.number, std::string("expected ") + what);
  return l.tokens[i].text;
}

const std::string& quoted(const Line& l, std::size_t i, const char* what) {
  if (i >= l.tokens.size() || l.tokens[i].kind != Token::Kind::String)
    parse_error(l.number, std::string("expected quoted ") + what);
  return l.tokens[i].text;
}

const std::vector<std::string>& set(const Line& l, std::size_t i, const char* what) {
  if (i >= l.tokens.size() || l.tokens[i].kind != Token::Kind::Set)
    parse_error(l.number, std::string("expected {...} ") + what);
  return l.tokens[i].items;
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
  return true;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace tta::detail
