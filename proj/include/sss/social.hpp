#pragma once

#include <vector>

#include "sss/trust.hpp"

namespace sss {

// Per-player cooperation flags for one period, in a fixed player order.
struct ActionVector {
    std::vector<bool> cooperated;

    explicit ActionVector(std::vector<bool> flags);

    int size() const noexcept { return static_cast<int>(cooperated.size()); }
};

// Number of cooperators.
int delta(const ActionVector& actions);

// Reward scale 1 - delta/n: unanimous cooperation earns nothing (it is the
// expected norm), a lone cooperator earns the full increment.
double cooperation_factor(int delta, int n);

// Penalty scale delta/n: defecting against full cooperation costs the full
// decrement, defecting in a round with no cooperators costs nothing.
double defection_factor(int delta, int n);

// One synchronized period: every player's value moves by the shared factor
// times its own mu/mu_prime, then clamps (the clamp never engages for valid
// params). length_mismatch if the vectors disagree. The all-cooperate and
// all-defect rounds are exact fixed points, bit for bit.
std::vector<TrustState> social_update(const std::vector<TrustState>& states,
                                      const ActionVector& actions,
                                      const TrustParams& params);

} // namespace sss
