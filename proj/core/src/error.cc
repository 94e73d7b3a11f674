#include "optcon/error.h"

namespace optcon {

const char* ToString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidGraph: return "invalid-graph";
    case ErrorKind::kInvalidDimension: return "invalid-dimension";
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kSpectralGap: return "spectral-gap";
    case ErrorKind::kInvalidRange: return "invalid-range";
    case ErrorKind::kUnbounded: return "unbounded-problem";
    case ErrorKind::kInvalidParameter: return "invalid-parameter";
    case ErrorKind::kConfiguration: return "configuration";
    case ErrorKind::kAssumption: return "assumption";
    case ErrorKind::kDivergence: return "divergence";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

}  // namespace optcon
