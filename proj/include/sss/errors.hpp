#pragma once

#include <ostream>
#include <stdexcept>
#include <string>

namespace sss {

// Every recoverable failure in the library throws Error with one of these
// codes. Codes, not messages, are the stable contract; tests match on them.
enum class Errc {
    composite_modulus,
    too_small,
    modulus_mismatch,
    zero_inverse,
    duplicate_x,
    zero_x,
    too_few_points,
    insufficient_shares,
    corrupt_share_suspected,
    epoch_mismatch,
    weight_exceeds_cap,
    pool_exhausted,
    inconsistent_shares,
    reused_x,
    too_few_contributors,
    unknown_x,
    out_of_range,
    degenerate_line,
    empty_list,
    length_mismatch,
    invalid_params,
    unknown_player,
    would_break_access,
    would_break_safety,
    invalid_config,
};

constexpr const char* to_string(Errc code) {
    switch (code) {
    case Errc::composite_modulus:       return "composite_modulus";
    case Errc::too_small:               return "too_small";
    case Errc::modulus_mismatch:        return "modulus_mismatch";
    case Errc::zero_inverse:            return "zero_inverse";
    case Errc::duplicate_x:             return "duplicate_x";
    case Errc::zero_x:                  return "zero_x";
    case Errc::too_few_points:          return "too_few_points";
    case Errc::insufficient_shares:     return "insufficient_shares";
    case Errc::corrupt_share_suspected: return "corrupt_share_suspected";
    case Errc::epoch_mismatch:          return "epoch_mismatch";
    case Errc::weight_exceeds_cap:      return "weight_exceeds_cap";
    case Errc::pool_exhausted:          return "pool_exhausted";
    case Errc::inconsistent_shares:     return "inconsistent_shares";
    case Errc::reused_x:                return "reused_x";
    case Errc::too_few_contributors:    return "too_few_contributors";
    case Errc::unknown_x:               return "unknown_x";
    case Errc::out_of_range:            return "out_of_range";
    case Errc::degenerate_line:         return "degenerate_line";
    case Errc::empty_list:              return "empty_list";
    case Errc::length_mismatch:         return "length_mismatch";
    case Errc::invalid_params:          return "invalid_params";
    case Errc::unknown_player:          return "unknown_player";
    case Errc::would_break_access:      return "would_break_access";
    case Errc::would_break_safety:      return "would_break_safety";
    case Errc::invalid_config:          return "invalid_config";
    }
    return "unknown";
}

inline std::ostream& operator<<(std::ostream& os, Errc code) {
    return os << to_string(code);
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace sss
