#include "sss/social.hpp"

#include <algorithm>
#include <string>

namespace sss {

ActionVector::ActionVector(std::vector<bool> flags)
    : cooperated(std::move(flags)) {
    if (cooperated.empty())
        raise(Errc::empty_list, "action vector must cover at least one player");
}

int delta(const ActionVector& actions) {
    return static_cast<int>(std::count(actions.cooperated.begin(),
                                       actions.cooperated.end(), true));
}

double cooperation_factor(int delta, int n) {
    return 1.0 - static_cast<double>(delta) / static_cast<double>(n);
}

double defection_factor(int delta, int n) {
    return static_cast<double>(delta) / static_cast<double>(n);
}

std::vector<TrustState> social_update(const std::vector<TrustState>& states,
                                      const ActionVector& actions,
                                      const TrustParams& params) {
    if (static_cast<int>(states.size()) != actions.size())
        raise(Errc::length_mismatch,
              std::to_string(states.size()) + " states vs " +
                  std::to_string(actions.size()) + " actions");
    const int n = actions.size();
    const int d = delta(actions);
    const double reward_scale = cooperation_factor(d, n);
    const double penalty_scale = defection_factor(d, n);

    std::vector<TrustState> out;
    out.reserve(states.size());
    for (int i = 0; i < n; ++i) {
        const TrustState& s = states[static_cast<std::size_t>(i)];
        const double raw =
            actions.cooperated[static_cast<std::size_t>(i)]
                ? s.value + reward_scale * mu(s.value, params)
                : s.value - penalty_scale * mu_prime(s.value, params);
        out.emplace_back(std::clamp(raw, -1.0, 1.0), s.period + 1);
    }
    return out;
}

} // namespace sss
