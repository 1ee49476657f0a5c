#include "covfield/error.hpp"

namespace covfield {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::AntipodalPoint: return "AntipodalPoint";
    case ErrorKind::CoincidentPoint: return "CoincidentPoint";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::FrameMismatch: return "FrameMismatch";
    case ErrorKind::ObservationMismatch: return "ObservationMismatch";
    case ErrorKind::NotHemispheric: return "NotHemispheric";
    case ErrorKind::IterationLimit: return "IterationLimit";
    case ErrorKind::TooFewPairs: return "TooFewPairs";
    case ErrorKind::SampleSizeMismatch: return "SampleSizeMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace covfield
