#include "efpred/common/error.hpp"

namespace efpred {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kSchema: return "schema error";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kLabel: return "label error";
    case ErrorKind::kImputation: return "imputation error";
    case ErrorKind::kBalance: return "balance error";
    case ErrorKind::kScaling: return "scaling error";
    case ErrorKind::kFold: return "fold error";
    case ErrorKind::kTraining: return "training error";
    case ErrorKind::kParameter: return "parameter error";
    case ErrorKind::kShape: return "shape error";
    case ErrorKind::kDomain: return "domain error";
    case ErrorKind::kNumeric: return "numeric error";
    case ErrorKind::kInvariant: return "invariant error";
    case ErrorKind::kConvergence: return "convergence error";
    case ErrorKind::kCrossValidation: return "cross-validation error";
    case ErrorKind::kInput: return "input error";
    case ErrorKind::kConfig: return "config error";
    case ErrorKind::kEmission: return "emission error";
    case ErrorKind::kIo: return "i/o error";
  }
  return "error";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
    case ErrorKind::kParameter:
    case ErrorKind::kInput:
      return 1;
    case ErrorKind::kTraining:
    case ErrorKind::kNumeric:
    case ErrorKind::kInvariant:
    case ErrorKind::kConvergence:
    case ErrorKind::kCrossValidation:
      return 3;
    default:
      return 2;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message) {}

}  // namespace efpred
