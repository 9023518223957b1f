#pragma once

// Line tokenizer shared by the text formats.

#include <string>
#include <vector>

#include "tta/error.hpp"

namespace tta::detail {

struct Token {
  enum class Kind { Word, String, Set } kind = Kind::Word;
  std::string text;                // word or string body
  std::vector<std::string> items;  // members of a {a,b} set
};

struct Line {
  int number = 0;
  std::vector<Token> tokens;
};

std::vector<Line> tokenize(const std::string& text);

[[noreturn]] void parse_error(int line, const std::string& what);

const std::string& word(const Line& l, std::size_t i, const char* what);
const std::string& quoted(const Line& l, std::size_t i, const char* what);
const std::vector<std::string>& set(const Line& l, std::size_t i, const char* what);

bool is_identifier(const std::string& s);
std::string read_file(const std::string& path);

}  // namespace tta::detail
