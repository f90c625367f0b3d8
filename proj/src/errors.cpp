#include "bailab/errors.hpp"

namespace bailab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::too_few_arms: return "TooFewArms";
    case ErrorCode::out_of_range: return "OutOfRange";
    case ErrorCode::tied_best_arm: return "TiedBestArm";
    case ErrorCode::degenerate_belief: return "DegenerateBelief";
    case ErrorCode::state_space_too_large: return "StateSpaceTooLarge";
    case ErrorCode::path_explosion: return "PathExplosion";
    case ErrorCode::config: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace bailab
