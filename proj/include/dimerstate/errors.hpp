#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dimerstate {

/// Rejected input: malformed files, bad grids, underdetermined series.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Text that could not be parsed; carries the 1-based line number when known.
class ParseError : public InputError {
 public:
  explicit ParseError(const std::string& msg, std::size_t line = 0)
      : InputError(line ? msg + " (line " + std::to_string(line) + ")" : msg),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Data that parsed fine but cannot come from the physical model
/// (e.g. a susceptibility whose reduced value falls outside a dimer's range).
class InconsistentDataError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace dimerstate
