#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace reebfol {

enum class ErrorCode {
  Domain,
  Structural,
  InvalidProfile,
  ContinuumOfTori,
  DegenerateSlope,
  NonClosing,
  DegenerateWithinTolerance,
  Precondition,
  Construction,
  Matrix,
  Input,
  IntervalNotElementary,
  NotMorseBott,
  DegenerateCover,
  SignConvention,
  SlowConvergence,
  Matching,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace reebfol
