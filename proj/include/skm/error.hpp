#pragma once

#include <stdexcept>
#include <string>

namespace skm {

/// Broad failure classes; the CLI maps each one to its own exit code.
enum class ErrorKind {
  InvalidArgument,  // caller passed something outside an operation's domain
  Format,           // unparsable or inconsistent data
  Numerical,        // rank deficiency, zero-norm projection rows
  Io,               // file system failures
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::InvalidArgument, what);
}

}  // namespace skm
