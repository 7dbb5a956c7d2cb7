#include "csck/error.hpp"

namespace csck {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotDelzant: return "NotDelzant";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::EmptyInterior: return "EmptyInterior";
    case ErrorKind::NonPrimitiveNormal: return "NonPrimitiveNormal";
    case ErrorKind::RedundantFacet: return "RedundantFacet";
    case ErrorKind::BadDocument: return "BadDocument";
    case ErrorKind::SubdivisionGap: return "SubdivisionGap";
    case ErrorKind::DegenerateGram: return "DegenerateGram";
    case ErrorKind::EmptyFamily: return "EmptyFamily";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::InadmissibleEndpoint: return "InadmissibleEndpoint";
    case ErrorKind::HessianDegenerate: return "HessianDegenerate";
    case ErrorKind::LegendreFailure: return "LegendreFailure";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NewtonDiverged: return "NewtonDiverged";
  }
  return "Unknown";
}

bool is_numerical(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::HessianDegenerate:
    case ErrorKind::LegendreFailure:
    case ErrorKind::NoConvergence:
    case ErrorKind::NewtonDiverged:
      return true;
    default:
      return false;
  }
}

}  // namespace csck
