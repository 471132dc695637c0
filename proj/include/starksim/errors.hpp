#pragma once

#include <stdexcept>
#include <string>

namespace starksim {

// Raised when an eigenstate cannot be matched to a high-field product state
// with dominant overlap, so a transition label cannot be resolved.
class IdentificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when sequence timing is inconsistent (e.g. a voltage window does
// not fit inside its decoupling interval).
class ScheduleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised on mismatched trace shapes or non-uniform grids.
class ShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a lineshape fit cannot start or does not converge.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when tomography inputs do not span the operator space.
class SpanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by the pulse-program parser; carries the source location.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int col, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", col " +
                           std::to_string(col) + ": " + message),
        line_(line),
        col_(col) {}

  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

}  // namespace starksim
