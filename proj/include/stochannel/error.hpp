#pragma once

#include <stdexcept>
#include <string>

namespace stochannel {

enum class ErrorKind {
  EmptyVector,
  NegativeWeight,
  NotNormalized,
  IndexOutOfRange,
  ParameterOutOfRange,
  DimensionMismatch,
  RaggedMatrix,
  NotSquare,
  NoConvergence,
  TooLarge,
  BadTable,
  NoIdentity,
  NotAssociative,
  MonoidMismatch,
  NotHomomorphism,
  NotAGroup,
  NotDoublyStochastic,
  DecompositionFailed,
};

/// Library-wide exception; kind() tells input errors apart from numeric
/// failures (NoConvergence, DecompositionFailed).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline bool is_numeric_failure(ErrorKind k) noexcept {
  return k == ErrorKind::NoConvergence || k == ErrorKind::DecompositionFailed;
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace stochannel
