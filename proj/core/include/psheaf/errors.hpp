#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace psheaf {

enum class ErrorCode {
  InvalidArgument,
  Io,
  OverlappingPoints,
  InvalidPartition,
  DegenerateInput,
  NotAFace,
  ZeroF,
  DimensionMismatch,
  NonSymmetric,
  Numerical,
  MalformedRecord,
  ResidueNotFound,
  ResidueIdentityMismatch,
  GridMismatch,
  InstanceTooLarge,
};

std::string_view to_string(ErrorCode code);

// Exit-code taxonomy shared by the CLI and any embedding front end:
// 2 input/parse, 3 numerical, 4 semantic mismatch.
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace psheaf
