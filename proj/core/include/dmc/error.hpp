#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dmc {

enum class Errc {
  kHorizonTooLarge,
  kProbabilityOutOfRange,
  kIndexOutOfRange,
  kTimeIndexOutOfRange,
  kNotPredictable,
  kSpaceMismatch,
  kOrderMismatch,
  kNonConstantP,
  kNegativeTime,
  kNotAMartingale,
  kNonPositiveInput,
  kDegenerateGradient,
  kArbitrageViolation,
  kInvalidPrice,
  kInvalidStrike,
  kUndefinedFunctionValue,
  kInvalidInput,
};

std::string_view errc_name(Errc code) noexcept;

/// Exception carrying one of the library error codes. The message is
/// prefixed with the code name so CLI output stays greppable.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace dmc
