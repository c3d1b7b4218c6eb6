#pragma once

#include <stdexcept>
#include <string>

namespace subclonal {

/// Inputs with inconsistent shapes or out-of-domain entries.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A state whose sample copy number vanishes somewhere (M_st <= 1e-10).
class DegenerateStateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed count or output file; carries 1-based row/column when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t row = 0, std::size_t col = 0)
      : std::runtime_error(what), row_(row), col_(col) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

}  // namespace subclonal
