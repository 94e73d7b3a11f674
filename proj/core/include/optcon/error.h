#pragma once

#include <stdexcept>
#include <string>

namespace optcon {

// Failure categories. The CLI maps these onto process exit codes, so the set
// is append-only.
enum class ErrorKind {
  kInvalidGraph,
  kInvalidDimension,
  kShape,
  kSpectralGap,
  kInvalidRange,
  kUnbounded,
  kInvalidParameter,
  kConfiguration,
  kAssumption,
  kDivergence,
  kParse,
  kIo,
};

const char* ToString(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised when an integrated state leaves the finite/bounded region.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& message, double time, int component)
      : Error(ErrorKind::kDivergence, message),
        time_(time),
        component_(component) {}

  double time() const { return time_; }
  int component() const { return component_; }

 private:
  double time_;
  int component_;
};

}  // namespace optcon
