#pragma once

#include <stdexcept>
#include <string>

namespace tta {

enum class ErrorKind {
  Parse,         // malformed input text
  Invalid,       // input violates a structural precondition
  Unsupported,   // feature outside the supported fragment
  Limit,         // refused because a size bound was exceeded
  Io,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace tta
