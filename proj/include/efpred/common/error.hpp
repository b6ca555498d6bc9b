#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace efpred {

enum class ErrorKind {
  kSchema,
  kParse,
  kLabel,
  kImputation,
  kBalance,
  kScaling,
  kFold,
  kTraining,
  kParameter,
  kShape,
  kDomain,
  kNumeric,
  kInvariant,
  kConvergence,
  kCrossValidation,
  kInput,
  kConfig,
  kEmission,
  kIo,
};

std::string_view to_string(ErrorKind kind);

// CLI exit status for an error category:
// 1 usage/config, 2 data, 3 training/convergence.
int exit_code_for(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix that what() carries.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace efpred
