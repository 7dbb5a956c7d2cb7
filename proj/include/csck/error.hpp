#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace csck {

enum class ErrorKind {
  // validation
  NotDelzant,
  Unbounded,
  EmptyInterior,
  NonPrimitiveNormal,
  RedundantFacet,
  BadDocument,
  SubdivisionGap,
  DegenerateGram,
  EmptyFamily,
  GridMismatch,
  OutOfDomain,
  InadmissibleEndpoint,
  // numerical
  HessianDegenerate,
  LegendreFailure,
  NoConvergence,
  NewtonDiverged,
};

std::string_view to_string(ErrorKind kind);

/// True for failures of a numerical method (as opposed to bad input).
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace csck
