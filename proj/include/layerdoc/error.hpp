#pragma once

#include <stdexcept>
#include <string>

namespace layerdoc {

/// Broad failure categories. Tests and callers dispatch on the kind; the
/// message carries the specifics (paths, ids, dimensions, line/column).
enum class ErrorKind {
  io,                   // file missing, unreadable, or undecodable
  schema,               // malformed record in a manifest or config
  validation,           // well-formed input violating an invariant
  domain,               // argument outside an operation's domain
  config,               // inconsistent configuration values
  planning,             // page cannot be planned from this catalog
  render,               // spec references unknown assets or escapes the page
  lookup,               // identifier not present
  shape,                // dimension mismatch between grids
  parse,                // malformed XML or structured text
  unsupported_version,  // recognizable document, wrong version
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace layerdoc
