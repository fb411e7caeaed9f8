#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fgr {

// Invalid arguments are reported with std::invalid_argument. The types below
// cover the failure modes that callers are expected to distinguish.

/// The requested cluster count cannot be reached on the given graph.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, std::size_t components)
      : std::runtime_error(what), components_(components) {}
  std::size_t components() const noexcept { return components_; }

 private:
  std::size_t components_;
};

/// A method refused to run because the input exceeds its size guard.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A least-squares fit had no information to work with.
class DegenerateFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. `location()` is a byte offset for binary formats
/// and a 1-based line number for text formats.
class ParseError : public std::runtime_error {
 public:
  enum class Unit { byte_offset, line };

  ParseError(const std::string& what, std::size_t location, Unit unit)
      : std::runtime_error(format(what, location, unit)),
        location_(location),
        unit_(unit) {}

  std::size_t location() const noexcept { return location_; }
  Unit unit() const noexcept { return unit_; }

 private:
  static std::string format(const std::string& what, std::size_t location, Unit unit) {
    return (unit == Unit::line ? "line " : "byte ") + std::to_string(location) + ": " + what;
  }

  std::size_t location_;
  Unit unit_;
};

}  // namespace fgr
