#include "sss/tuning.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <string>

namespace sss {

AccessConstraints::AccessConstraints(int threshold, int weight_cap)
    : threshold(threshold), weight_cap(weight_cap) {
    if (threshold < 1)
        raise(Errc::invalid_params, "threshold must be at least 1");
    if (weight_cap < 1 || weight_cap >= threshold)
        raise(Errc::invalid_params,
              "weight cap must satisfy 1 <= cap < threshold");
}

namespace {

const PlayerRecord& find_record(const std::vector<PlayerRecord>& records,
                                const PlayerId& id) {
    for (const PlayerRecord& r : records)
        if (r.id == id)
            return r;
    raise(Errc::unknown_player, "no record for player " + id);
}

} // namespace

bool check_access(const std::vector<PlayerRecord>& records,
                  const std::set<PlayerId>& coalition,
                  const AccessConstraints& c) {
    int w = 0;
    for (const PlayerId& id : coalition)
        w += find_record(records, id).weight;
    return w >= c.threshold;
}

bool check_safety(const std::vector<PlayerRecord>& records,
                  const std::set<PlayerId>& corrupted,
                  const AccessConstraints& c) {
    int w = 0;
    for (const PlayerId& id : corrupted)
        w += find_record(records, id).weight;
    return w < c.threshold;
}

int class_band_policy(const PlayerRecord& r, const AccessConstraints& c) {
    if (r.status == PlayerStatus::newcomer)
        return r.weight == 0 ? +1 : 0;
    if (r.cls == PlayerClass::good && r.weight < c.weight_cap)
        return +1;
    if (r.cls == PlayerClass::bad && r.weight > 0)
        return -1;
    return 0;
}

TuningPlan plan_weights(const std::vector<PlayerRecord>& records,
                        const AccessConstraints& c,
                        const WeightPolicy& policy) {
    TuningPlan plan;
    for (const PlayerRecord& r : records) {
        if (r.status == PlayerStatus::corrupted) {
            plan.revocations.insert(r.id);
            continue;
        }
        const int step = policy(r, c);
        if (step > 0 && r.weight < c.weight_cap)
            plan.increments.insert(r.id);
        else if (step < 0 && r.weight > 0)
            plan.decrements.insert(r.id);
        else
            plan.unchanged.insert(r.id);
    }
    return plan;
}

namespace {

// The t live points of the most reputable active players: trust descending,
// id ascending on ties, each bundle's points in ascending x.
std::vector<SharePoint> pick_contributors(const SchemeState& scheme,
                                          const std::vector<PlayerRecord>& records,
                                          int threshold) {
    std::vector<const PlayerRecord*> active;
    for (const PlayerRecord& r : records)
        if (r.status == PlayerStatus::active)
            active.push_back(&r);
    std::sort(active.begin(), active.end(),
              [](const PlayerRecord* a, const PlayerRecord* b) {
                  if (a->trust.value != b->trust.value)
                      return a->trust.value > b->trust.value;
                  return a->id < b->id;
              });
    std::vector<SharePoint> pts;
    for (const PlayerRecord* r : active) {
        auto it = scheme.bundles.find(r->id);
        if (it == scheme.bundles.end())
            continue;
        for (const SharePoint& pt : it->second.points) {
            pts.push_back(pt);
            if (static_cast<int>(pts.size()) == threshold)
                return pts;
        }
    }
    raise(Errc::too_few_contributors,
          "active players hold " + std::to_string(pts.size()) +
              " shares, enrollment needs " + std::to_string(threshold));
}

PlayerRecord& find_mutable(std::vector<PlayerRecord>& records,
                           const PlayerId& id) {
    for (PlayerRecord& r : records)
        if (r.id == id)
            return r;
    raise(Errc::unknown_player, "no record for player " + id);
}

} // namespace

ApplyOutcome apply_plan(const SchemeState& scheme,
                        const std::vector<PlayerRecord>& records,
                        const TuningPlan& plan, const AccessConstraints& c,
                        Rng& rng) {
    // Reject structurally bad plans before touching state: every mentioned
    // player known, no player in two sets, projected weights within bounds.
    {
        std::set<PlayerId> seen;
        auto distinct = [&](const std::set<PlayerId>& ids) {
            for (const PlayerId& id : ids) {
                find_record(records, id);
                if (!seen.insert(id).second)
                    raise(Errc::invalid_params,
                          "player " + id + " appears twice in the plan");
            }
        };
        distinct(plan.increments);
        distinct(plan.decrements);
        distinct(plan.revocations);
        distinct(plan.unchanged);
    }

    std::map<PlayerId, int> projected;
    for (const PlayerRecord& r : records)
        projected[r.id] = r.weight;
    for (const PlayerId& id : plan.increments) {
        if (++projected.at(id) > c.weight_cap)
            raise(Errc::weight_exceeds_cap, "plan pushes " + id + " above the cap");
    }
    for (const PlayerId& id : plan.decrements) {
        if (--projected.at(id) < 0)
            raise(Errc::invalid_params, "plan pushes " + id + " below zero weight");
    }
    for (const PlayerId& id : plan.revocations)
        projected.at(id) = 0;

    int honest = 0, corrupted = 0;
    for (const PlayerRecord& r : records) {
        if (r.status == PlayerStatus::corrupted)
            corrupted += projected[r.id];
        else
            honest += projected[r.id];
    }
    if (honest < c.threshold)
        raise(Errc::would_break_access,
              "honest weight would drop to " + std::to_string(honest) +
                  ", threshold is " + std::to_string(c.threshold));
    if (corrupted >= c.threshold)
        raise(Errc::would_break_safety,
              "corrupted weight would reach " + std::to_string(corrupted));

    ApplyOutcome out{scheme, records, {}};

    // Enroll before disenrolling: a plan whose end state is feasible can
    // still starve the sub-share protocol of live points if shares are
    // dropped first.
    for (const PlayerId& id : plan.increments) {
        const std::vector<SharePoint> contributors =
            pick_contributors(out.scheme, out.records, c.threshold);
        enroll(out.scheme, id, contributors, rng);
        PlayerRecord& r = find_mutable(out.records, id);
        r.weight += 1;
        if (r.status == PlayerStatus::newcomer)
            r.status = PlayerStatus::active;
    }

    for (const PlayerId& id : plan.decrements) {
        ShareBundle& bundle = out.scheme.bundles.at(id);
        const std::uint64_t x = bundle.points.back().x.value();
        out.transitions.push_back(disenroll(out.scheme, x, rng));
        find_mutable(out.records, id).weight -= 1;
    }

    for (const PlayerId& id : plan.revocations) {
        auto it = out.scheme.bundles.find(id);
        while (it != out.scheme.bundles.end() && !it->second.points.empty()) {
            const std::uint64_t x = it->second.points.back().x.value();
            out.transitions.push_back(disenroll(out.scheme, x, rng));
        }
        PlayerRecord& r = find_mutable(out.records, id);
        r.weight = 0;
        r.status = PlayerStatus::newcomer;
    }

    out.transitions.push_back(refresh(out.scheme, rng));

    for ([[maybe_unused]] const PlayerRecord& r : out.records)
        assert(r.weight == out.scheme.weight_of(r.id));

    return out;
}

} // namespace sss
