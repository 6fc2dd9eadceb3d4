#include "sss/tuning.hpp"

#include <doctest.h>

#include <vector>

#include "common.hpp"

using namespace sss;

namespace {

PlayerRecord rec(PlayerId id, int weight, double trust, PlayerClass cls,
                 PlayerStatus status = PlayerStatus::active) {
    return PlayerRecord{std::move(id), weight, TrustState(trust, 0), cls,
                        status};
}

struct Fixture {
    Modulus m{10007};
    AccessConstraints c{5, 3};
    Rng rng{404};
    std::vector<PlayerRecord> records;
    SchemeState scheme;

    Fixture()
        : records{rec("P1", 2, 0.0, PlayerClass::fresh),
                  rec("P2", 2, 0.0, PlayerClass::fresh),
                  rec("P3", 2, 0.0, PlayerClass::fresh),
                  rec("P4", 2, 0.0, PlayerClass::fresh)},
          scheme(init_scheme(FieldElement(3141, m), 5,
                             {{"P1", 2}, {"P2", 2}, {"P3", 2}, {"P4", 2}}, 3,
                             rng)) {}

    std::uint64_t secret() const {
        return reconstruct(scheme.live_points(), scheme.threshold).value();
    }
};

} // namespace

TEST_CASE("constraints demand a cap strictly under the threshold") {
    CHECK_NOTHROW(AccessConstraints(5, 3));
    CHECK_NOTHROW(AccessConstraints(2, 1));
    CHECK_RAISES(invalid_params, AccessConstraints(5, 5));
    CHECK_RAISES(invalid_params, AccessConstraints(5, 0));
    CHECK_RAISES(invalid_params, AccessConstraints(0, 1));
    CHECK_RAISES(invalid_params, AccessConstraints(3, 4));
}

TEST_CASE("access needs combined weight at the threshold") {
    const Fixture f;
    CHECK(check_access(f.records, {"P1", "P2", "P3"}, f.c));
    CHECK(check_access(f.records, {"P1", "P2", "P3", "P4"}, f.c));
    CHECK_FALSE(check_access(f.records, {"P1", "P2"}, f.c));
    CHECK_FALSE(check_access(f.records, {"P1"}, f.c));
    CHECK_FALSE(check_access(f.records, {}, f.c));
    CHECK_RAISES(unknown_player, check_access(f.records, {"ghost"}, f.c));
}

TEST_CASE("safety needs the corrupted set below the threshold") {
    const Fixture f;
    CHECK(check_safety(f.records, {}, f.c));
    CHECK(check_safety(f.records, {"P1"}, f.c));
    CHECK(check_safety(f.records, {"P1", "P2"}, f.c));
    CHECK_FALSE(check_safety(f.records, {"P1", "P2", "P3"}, f.c));
    CHECK_RAISES(unknown_player, check_safety(f.records, {"ghost"}, f.c));
}

TEST_CASE("the class band policy maps standing to unit steps") {
    const AccessConstraints c(5, 3);

    CHECK(class_band_policy(rec("a", 2, 0.5, PlayerClass::good), c) == +1);
    CHECK(class_band_policy(rec("a", 3, 0.5, PlayerClass::good), c) == 0);
    CHECK(class_band_policy(rec("a", 2, 0.0, PlayerClass::fresh), c) == 0);
    CHECK(class_band_policy(rec("a", 2, -0.5, PlayerClass::bad), c) == -1);
    CHECK(class_band_policy(rec("a", 0, -0.5, PlayerClass::bad), c) == 0);
    CHECK(class_band_policy(
              rec("a", 0, 0.0, PlayerClass::fresh, PlayerStatus::newcomer),
              c) == +1);
    CHECK(class_band_policy(
              rec("a", 1, 0.0, PlayerClass::fresh, PlayerStatus::newcomer),
              c) == 0);
}

TEST_CASE("planning routes corrupted players to revocation") {
    const AccessConstraints c(5, 3);
    const std::vector<PlayerRecord> records{
        rec("up", 2, 0.5, PlayerClass::good),
        rec("down", 2, -0.5, PlayerClass::bad),
        rec("hold", 2, 0.0, PlayerClass::fresh),
        rec("out", 2, 0.9, PlayerClass::good, PlayerStatus::corrupted),
        rec("in", 0, 0.0, PlayerClass::fresh, PlayerStatus::newcomer),
    };
    const TuningPlan plan = plan_weights(records, c);
    CHECK(plan.increments == std::set<PlayerId>{"up", "in"});
    CHECK(plan.decrements == std::set<PlayerId>{"down"});
    CHECK(plan.revocations == std::set<PlayerId>{"out"});
    CHECK(plan.unchanged == std::set<PlayerId>{"hold"});

    SUBCASE("the policy verdict is clamped against cap and floor") {
        const WeightPolicy greedy = [](const PlayerRecord&,
                                       const AccessConstraints&) {
            return +1;
        };
        const std::vector<PlayerRecord> capped{
            rec("full", 3, 0.5, PlayerClass::good)};
        CHECK(plan_weights(capped, c, greedy).increments.empty());

        const WeightPolicy harsh = [](const PlayerRecord&,
                                      const AccessConstraints&) {
            return -1;
        };
        const std::vector<PlayerRecord> empty_handed{
            rec("broke", 0, -0.5, PlayerClass::bad)};
        CHECK(plan_weights(empty_handed, c, harsh).decrements.empty());
    }
}

TEST_CASE("applying a plan conserves the secret and syncs the records") {
    Fixture f;
    TuningPlan plan;
    plan.increments = {"P1"};
    plan.decrements = {"P4"};
    plan.unchanged = {"P2", "P3"};

    const std::uint64_t before = f.secret();
    const ApplyOutcome out = apply_plan(f.scheme, f.records, plan, f.c, f.rng);

    CHECK(reconstruct(out.scheme.live_points(), out.scheme.threshold)
              .value() == before);
    CHECK(out.scheme.weight_of("P1") == 3);
    CHECK(out.scheme.weight_of("P4") == 1);
    CHECK(out.scheme.total_weight() == 8);

    for (const PlayerRecord& r : out.records)
        CHECK(r.weight == out.scheme.weight_of(r.id));

    // One disenrollment boundary plus the trailing refresh.
    CHECK(out.transitions.size() == 2);
    CHECK(out.scheme.epoch == f.scheme.epoch + 2);

    // P4 loses its highest x (8), keeps its lowest (7).
    CHECK(out.scheme.bundles.at("P4").points[0].x.value() == 7);
    CHECK(out.scheme.retired_xs.count(8) == 1);

    // The original inputs are untouched.
    CHECK(f.scheme.weight_of("P1") == 2);
    CHECK(f.records[0].weight == 2);
}

TEST_CASE("an all-hold plan still refreshes the shares") {
    Fixture f;
    TuningPlan plan;
    plan.unchanged = {"P1", "P2", "P3", "P4"};

    const std::vector<SharePoint> before = f.scheme.live_points();
    const ApplyOutcome out = apply_plan(f.scheme, f.records, plan, f.c, f.rng);

    CHECK(out.transitions.size() == 1);
    CHECK(out.scheme.epoch == f.scheme.epoch + 1);
    const std::vector<SharePoint> after = out.scheme.live_points();
    int moved = 0;
    for (std::size_t i = 0; i < before.size(); ++i)
        if (!(before[i].y == after[i].y))
            ++moved;
    CHECK(moved > 0);
    CHECK(reconstruct(after, 5).value() == f.secret());
}

TEST_CASE("revocation drains every share and demotes the holder") {
    Fixture f;
    f.records[1].status = PlayerStatus::corrupted;
    TuningPlan plan;
    plan.revocations = {"P2"};
    plan.unchanged = {"P1", "P3", "P4"};

    const ApplyOutcome out = apply_plan(f.scheme, f.records, plan, f.c, f.rng);

    CHECK(out.scheme.weight_of("P2") == 0);
    CHECK(out.scheme.retired_xs.count(3) == 1);
    CHECK(out.scheme.retired_xs.count(4) == 1);
    const PlayerRecord* p2 = nullptr;
    for (const PlayerRecord& r : out.records)
        if (r.id == "P2")
            p2 = &r;
    REQUIRE(p2 != nullptr);
    CHECK(p2->status == PlayerStatus::newcomer);
    CHECK(p2->weight == 0);
    CHECK(reconstruct(out.scheme.live_points(), 5).value() == f.secret());
    // Two share drops plus the trailing refresh.
    CHECK(out.transitions.size() == 3);
}

TEST_CASE("infeasible plans throw before touching anything") {
    Fixture f;

    SUBCASE("access would break") {
        // Dropping three players to zero leaves 2 < 5 honest weight.
        TuningPlan plan;
        plan.revocations = {"P1", "P2", "P3"};
        plan.unchanged = {"P4"};
        CHECK_RAISES(would_break_access,
                     apply_plan(f.scheme, f.records, plan, f.c, f.rng));
    }

    SUBCASE("safety would break") {
        // Two corrupted players raised to the cap reach 6 >= 5. The honest
        // side keeps 6 units so only the safety check can fire. Validation
        // precedes execution, so the scheme is never touched.
        std::vector<PlayerRecord> records = f.records;
        records[0].status = PlayerStatus::corrupted;
        records[1].status = PlayerStatus::corrupted;
        records[2].weight = 3;
        records[3].weight = 3;

        TuningPlan plan;
        plan.increments = {"P1", "P2"};
        plan.unchanged = {"P3", "P4"};
        CHECK_RAISES(would_break_safety,
                     apply_plan(f.scheme, records, plan, f.c, f.rng));
    }

    SUBCASE("cap overflow") {
        TuningPlan plan;
        plan.increments = {"P1"};
        plan.unchanged = {"P2", "P3", "P4"};
        std::vector<PlayerRecord> records = f.records;
        records[0].weight = 3;
        CHECK_RAISES(weight_exceeds_cap,
                     apply_plan(f.scheme, records, plan, f.c, f.rng));
    }

    SUBCASE("a player in two sets") {
        TuningPlan plan;
        plan.increments = {"P1"};
        plan.decrements = {"P1"};
        plan.unchanged = {"P2", "P3", "P4"};
        CHECK_RAISES(invalid_params,
                     apply_plan(f.scheme, f.records, plan, f.c, f.rng));
    }

    SUBCASE("an unknown player") {
        TuningPlan plan;
        plan.increments = {"ghost"};
        CHECK_RAISES(unknown_player,
                     apply_plan(f.scheme, f.records, plan, f.c, f.rng));
    }
}

TEST_CASE("enrollments run before share drops") {
    // P1 holds three of the six live points. A plan that decrements P1 while
    // admitting a newcomer still finds t = 4 live contributor points because
    // the enrollment happens first.
    const Modulus m(10007);
    Rng rng(11);
    SchemeState scheme = init_scheme(FieldElement(99, m), 4,
                                     {{"P1", 3}, {"P2", 2}}, 3, rng);
    std::vector<PlayerRecord> records{
        rec("P1", 3, -0.5, PlayerClass::bad),
        rec("P2", 2, 0.0, PlayerClass::fresh),
        rec("P3", 0, 0.0, PlayerClass::fresh, PlayerStatus::newcomer)};
    const AccessConstraints c(4, 3);

    const TuningPlan plan = plan_weights(records, c);
    CHECK(plan.increments == std::set<PlayerId>{"P3"});
    CHECK(plan.decrements == std::set<PlayerId>{"P1"});

    const ApplyOutcome out = apply_plan(scheme, records, plan, c, rng);
    CHECK(out.scheme.weight_of("P1") == 2);
    CHECK(out.scheme.weight_of("P3") == 1);
    CHECK(reconstruct(out.scheme.live_points(), 4).value() == 99);

    const PlayerRecord* p3 = nullptr;
    for (const PlayerRecord& r : out.records)
        if (r.id == "P3")
            p3 = &r;
    REQUIRE(p3 != nullptr);
    CHECK(p3->status == PlayerStatus::active);
}

TEST_CASE("corrupted players never contribute to enrollments") {
    // Actives hold only two live points; the corrupted P2 holds two more.
    // Issuing a new share needs t = 3 contributor points, so the enrollment
    // must fail: P2's points are off limits even though its trust is
    // highest. Were corrupted players eligible, the plan would succeed.
    const Modulus m(10007);
    Rng rng(21);
    const SchemeState scheme = init_scheme(
        FieldElement(500, m), 3, {{"P1", 1}, {"P2", 2}, {"P3", 1}}, 2, rng);
    const std::vector<PlayerRecord> records{
        rec("P1", 1, 0.2, PlayerClass::fresh),
        rec("P2", 2, 0.9, PlayerClass::good, PlayerStatus::corrupted),
        rec("P3", 1, 0.4, PlayerClass::good),
        rec("P4", 0, 0.0, PlayerClass::fresh, PlayerStatus::newcomer)};

    TuningPlan plan;
    plan.increments = {"P4"};
    plan.revocations = {"P2"};
    plan.unchanged = {"P1", "P3"};
    const AccessConstraints c(3, 2);

    CHECK_RAISES(too_few_contributors,
                 apply_plan(scheme, records, plan, c, rng));
}
