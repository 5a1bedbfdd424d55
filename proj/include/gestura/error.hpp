#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gestura {

enum class ErrorKind {
  kDomain,
  kRange,
  kInventory,
  kUnsupportedStructure,
  kParse,
  kNotApplicable,
  kConsistency,
  kIo,
  kConfig,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kRange: return "range";
    case ErrorKind::kInventory: return "inventory";
    case ErrorKind::kUnsupportedStructure: return "unsupported-structure";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kNotApplicable: return "not-applicable";
    case ErrorKind::kConsistency: return "consistency";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kConfig: return "config";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Carries the character offset (in code points) of the offending symbol.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error(ErrorKind::kParse,
              message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace gestura
