#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sss/social.hpp"
#include "sss/tuning.hpp"

namespace sss {

// What a provider did in one period: served on time, failed to serve (late
// or absent), or actively tampered.
enum class Action { cooperate, defect, corrupt };

char to_char(Action a);
Action action_from_char(char c); // invalid_config on anything but C/D/X

// Response time drawn uniformly from [base_ms, base_ms + jitter_ms).
struct LatencyModel {
    double base_ms = 10.0;
    double jitter_ms = 0.0;
};

struct ProviderProfile {
    PlayerId id;
    int initial_weight = 1;
    double availability = 1.0; // chance of producing any response
    double corruption = 0.0;   // chance of tampering instead of serving
    LatencyModel latency;
    double unit_cost = 1.0;    // per weight unit per period
};

// A threshold of infinity never flags.
struct SlaThresholds {
    double max_hourly_cost = std::numeric_limits<double>::infinity();
    double max_avg_rt_ms = std::numeric_limits<double>::infinity();
    double max_rt_ms = std::numeric_limits<double>::infinity();
};

enum class SimMode { sampled, replay };

struct SimConfig {
    std::uint64_t modulus = 0;
    int threshold = 0;
    int weight_cap = 0;
    int periods = 0; // replay mode: 0 means "whole trace"
    std::uint64_t seed = 0;
    double deadline_ms = 1000.0;
    std::optional<std::uint64_t> secret; // drawn from the scheme stream if absent
    TrustParams trust = TrustParams::defaults();
    SlaThresholds sla;
    std::vector<ProviderProfile> providers;
    SimMode mode = SimMode::sampled;
    std::vector<std::vector<Action>> trace; // replay: trace[period][provider]

    static SimConfig from_json(const nlohmann::json& j);
};

struct ReconstructionOutcome {
    bool quorum = false;         // responsive weight reached the threshold
    bool success = false;        // interpolation ran and cross-checks passed
    bool matches_secret = false;
    int responder_weight = 0;
    std::vector<PlayerId> responders;
};

struct RtStats {
    int samples = 0;
    double avg_ms = 0.0;
    double max_ms = 0.0;
};

struct SlaFlags {
    bool cost_exceeded = false;
    bool avg_rt_exceeded = false;
    bool max_rt_exceeded = false;

    bool any() const { return cost_exceeded || avg_rt_exceeded || max_rt_exceeded; }
};

struct PeriodReport {
    int period = 0;                   // 1-based
    std::vector<Action> actions;      // config provider order
    int cooperators = 0;
    std::map<PlayerId, double> trust; // end-of-period snapshots
    std::map<PlayerId, PlayerClass> classes;
    std::map<PlayerId, int> weights;
    std::map<PlayerId, double> response_ms; // timely responders only
    std::vector<PlayerId> tampered;         // flagged by commitment checks
    ReconstructionOutcome reconstruction;
    RtStats rt;
    double hourly_cost = 0.0;
    SlaFlags sla;
    bool plan_applied = false;
    std::string plan_error;
    std::vector<EpochTransition> transitions;
    bool safety_ok = true;
    bool access_ok = true;
};

// Discrete-period loop: sample or replay actions, flag tampered shares,
// attempt reconstruction from timely responders, apply the social trust
// update (tampering players sit that round out; their value was reset by the
// reboot), then plan and apply weight tuning with its trailing refresh.
//
// Three rng streams are derived from the one seed: "behavior" (action
// sampling; idle in replay mode), "latency" (one draw per provider per
// period, unconditionally), and "scheme" (share protocols). Replaying a
// sampled run's trace therefore reproduces it byte for byte.
class Simulation {
public:
    explicit Simulation(SimConfig config);

    int horizon() const noexcept { return horizon_; }
    int periods_done() const noexcept { return period_; }
    // True once the horizon is reached or safety failed (corrupted weight at
    // or above the threshold aborts the run).
    bool done() const noexcept { return aborted_ || period_ >= horizon_; }
    bool safety_aborted() const noexcept { return aborted_; }

    PeriodReport step(); // out_of_range once done

    const SimConfig& config() const noexcept { return config_; }
    const SchemeState& scheme() const noexcept { return scheme_; }
    const std::vector<PlayerRecord>& records() const noexcept { return records_; }
    // Actions taken so far, one row per period; feeding this back as a
    // replay trace reproduces the run.
    const std::vector<std::vector<Action>>& action_trace() const noexcept {
        return trace_out_;
    }
    std::uint64_t secret_value() const noexcept { return secret_.value(); }

private:
    std::vector<Action> draw_actions(std::span<const double> latencies);

    SimConfig config_;
    int horizon_;
    Rng behavior_;
    Rng latency_;
    Rng scheme_rng_;
    FieldElement secret_;
    SchemeState scheme_;
    AccessConstraints constraints_;
    std::vector<PlayerRecord> records_;
    std::vector<std::vector<Action>> trace_out_;
    int period_ = 0;
    bool aborted_ = false;
};

std::vector<PeriodReport> run(const SimConfig& config);

// One row per provider per period; rt_ms is empty unless the provider
// cooperated. Numbers render shortest-round-trip, so equal runs give equal
// bytes.
std::string reports_to_csv(std::span<const PeriodReport> reports,
                           std::span<const PlayerId> provider_order);

nlohmann::json reports_to_json(std::span<const PeriodReport> reports);

nlohmann::json transition_to_json(const EpochTransition& t);

nlohmann::json trace_to_json(const std::vector<std::vector<Action>>& trace,
                             std::span<const PlayerId> provider_order);

// Accepts the trace_to_json shape, a bare action matrix, or a full report
// array (actions are pulled per provider id).
std::vector<std::vector<Action>> trace_from_json(
    const nlohmann::json& j, std::span<const PlayerId> provider_order);

} // namespace sss
