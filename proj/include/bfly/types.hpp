#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bfly {

using VertexId = std::uint32_t;
using EdgeId = std::uint64_t;
using Count = std::uint64_t;

inline constexpr VertexId kNoVertex = ~VertexId{0};

enum class Side : std::uint8_t { U = 0, V = 1 };

inline Side other_side(Side s) { return s == Side::U ? Side::V : Side::U; }
inline const char* side_name(Side s) { return s == Side::U ? "u" : "v"; }

// Error hierarchy. Everything derives from std::runtime_error so callers can
// catch broadly; the CLI maps the concrete types to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ResourceError : public Error {
 public:
  using Error::Error;
};

class ContractError : public Error {
 public:
  using Error::Error;
};

/// C(d, 2) for wedge group sizes.
inline Count choose2(Count d) { return d < 2 ? 0 : (d * (d - 1)) / 2; }

inline Count checked_add(Count a, Count b) {
#ifndef NDEBUG
  Count r;
  if (__builtin_add_overflow(a, b, &r)) throw Error("butterfly count overflow");
  return r;
#else
  return a + b;
#endif
}

}  // namespace bfly
