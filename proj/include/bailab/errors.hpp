#pragma once

#include <stdexcept>
#include <string>

namespace bailab {

enum class ErrorCode {
  invalid_argument,
  too_few_arms,
  out_of_range,
  tied_best_arm,
  degenerate_belief,
  state_space_too_large,
  path_explosion,
  config,
};

const char* to_string(ErrorCode code);

// All library failures surface as this exception; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bailab
