#pragma once

#include <functional>
#include <set>
#include <vector>

#include "sss/dynamics.hpp"
#include "sss/trust.hpp"

namespace sss {

// Threshold t and per-player weight cap m, 1 <= m < t: no single player may
// ever reach the threshold alone.
struct AccessConstraints {
    int threshold;
    int weight_cap;

    AccessConstraints(int threshold, int weight_cap);
};

enum class PlayerStatus { active, corrupted, newcomer };

constexpr const char* to_string(PlayerStatus s) {
    switch (s) {
    case PlayerStatus::active:    return "active";
    case PlayerStatus::corrupted: return "corrupted";
    case PlayerStatus::newcomer:  return "newcomer";
    }
    return "?";
}

// Everything the planner knows about one player.
struct PlayerRecord {
    PlayerId id;
    int weight = 0;
    TrustState trust;
    PlayerClass cls = PlayerClass::fresh;
    PlayerStatus status = PlayerStatus::active;
};

// True iff the coalition's combined weight meets the threshold.
// unknown_player for ids outside records.
bool check_access(const std::vector<PlayerRecord>& records,
                  const std::set<PlayerId>& coalition,
                  const AccessConstraints& c);

// True iff the corrupted set stays strictly below the threshold.
bool check_safety(const std::vector<PlayerRecord>& records,
                  const std::set<PlayerId>& corrupted,
                  const AccessConstraints& c);

// One period's weight adjustments. The four sets are disjoint and cover
// every player mentioned; increments and decrements move one unit each,
// revocations drop a player to zero.
struct TuningPlan {
    std::set<PlayerId> increments;
    std::set<PlayerId> decrements;
    std::set<PlayerId> revocations;
    std::set<PlayerId> unchanged;
};

// Signed unit step (+1 / 0 / -1) wanted for one player. Must already respect
// cap and floor; plan_weights trusts it.
using WeightPolicy =
    std::function<int(const PlayerRecord&, const AccessConstraints&)>;

// Default policy: good players grow toward the cap, bad players shrink
// toward zero, fresh players hold, weightless newcomers are admitted with
// one unit. Corrupted players are handled structurally (revocation), not by
// the policy.
int class_band_policy(const PlayerRecord& r, const AccessConstraints& c);

TuningPlan plan_weights(const std::vector<PlayerRecord>& records,
                        const AccessConstraints& c,
                        const WeightPolicy& policy = class_band_policy);

struct ApplyOutcome {
    SchemeState scheme;
    std::vector<PlayerRecord> records;
    std::vector<EpochTransition> transitions;
};

// Execute a plan against copies: enrollments first (contributors are the
// t live points of the highest-trust active players), then one disenrollment
// per decrement unit (highest x first), then revocations, then an
// unconditional global refresh. Projected access and safety are validated
// before anything runs (would_break_access / would_break_safety), so a
// throwing plan leaves no trace. Revoked players come back as newcomers.
ApplyOutcome apply_plan(const SchemeState& scheme,
                        const std::vector<PlayerRecord>& records,
                        const TuningPlan& plan, const AccessConstraints& c,
                        Rng& rng);

} // namespace sss
