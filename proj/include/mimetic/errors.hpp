#pragma once

#include <stdexcept>
#include <string>

namespace mimetic {

enum class ErrorKind {
  invalid_input,
  invalid_degree,
  invalid_order,
  invalid_index,
  cannot_raise_degree,
  numerical_failure,
  invalid_deformation,
  singular_map,
  solver_failure,
};

/// Base exception for every failure raised by the library. The kind lets
/// callers (the CLI in particular) map failures onto exit codes without
/// string matching.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace mimetic
