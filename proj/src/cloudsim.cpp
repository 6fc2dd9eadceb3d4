#include "sss/cloudsim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <string>
#include <utility>

namespace sss {

char to_char(Action a) {
    switch (a) {
    case Action::cooperate: return 'C';
    case Action::defect:    return 'D';
    case Action::corrupt:   return 'X';
    }
    return '?';
}

Action action_from_char(char c) {
    switch (c) {
    case 'C': return Action::cooperate;
    case 'D': return Action::defect;
    case 'X': return Action::corrupt;
    default:
        raise(Errc::invalid_config,
              std::string("unknown action '") + c + "', expected C, D or X");
    }
}

namespace {

// Shortest decimal that round-trips; the JSON library does the same, so CSV
// and JSON render one value identically.
std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::string format_fixed3(double v) {
    char buf[48];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v,
                                   std::chars_format::fixed, 3);
    return std::string(buf, end);
}

[[noreturn]] void bad_config(const std::string& detail) {
    raise(Errc::invalid_config, detail);
}

const nlohmann::json& require_key(const nlohmann::json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end())
        bad_config(std::string("missing config key \"") + key + "\"");
    return *it;
}

std::uint64_t as_u64(const nlohmann::json& j, const char* key) {
    if (j.is_string()) {
        const std::string& s = j.get_ref<const std::string&>();
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size())
            bad_config(std::string(key) + " is not a decimal 64-bit value");
        return v;
    }
    if (j.is_number_unsigned())
        return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    bad_config(std::string(key) + " must be a nonnegative integer or decimal string");
}

int as_int(const nlohmann::json& j, const char* key) {
    if (!j.is_number_integer())
        bad_config(std::string(key) + " must be an integer");
    return j.get<int>();
}

double as_double(const nlohmann::json& j, const char* key) {
    if (!j.is_number())
        bad_config(std::string(key) + " must be a number");
    return j.get<double>();
}

double probability(const nlohmann::json& j, const char* key) {
    const double v = as_double(j, key);
    if (!(v >= 0.0 && v <= 1.0))
        bad_config(std::string(key) + " must lie in [0, 1]");
    return v;
}

} // namespace

SimConfig SimConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object())
        bad_config("config root must be a JSON object");
    SimConfig cfg;
    cfg.modulus = as_u64(require_key(j, "modulus"), "modulus");
    cfg.threshold = as_int(require_key(j, "threshold"), "threshold");
    cfg.weight_cap = as_int(require_key(j, "weight_cap"), "weight_cap");
    cfg.seed = as_u64(require_key(j, "seed"), "seed");
    if (j.contains("periods"))
        cfg.periods = as_int(j["periods"], "periods");
    if (j.contains("deadline_ms"))
        cfg.deadline_ms = as_double(j["deadline_ms"], "deadline_ms");
    if (j.contains("secret"))
        cfg.secret = as_u64(j["secret"], "secret");

    if (j.contains("trust")) {
        const nlohmann::json& t = j["trust"];
        cfg.trust = TrustParams(as_double(require_key(t, "alpha"), "trust.alpha"),
                                as_double(require_key(t, "beta"), "trust.beta"),
                                as_double(require_key(t, "epsilon"), "trust.epsilon"),
                                as_double(require_key(t, "eta"), "trust.eta"),
                                as_double(require_key(t, "theta"), "trust.theta"),
                                as_double(require_key(t, "kappa"), "trust.kappa"));
    }
    if (j.contains("sla")) {
        const nlohmann::json& s = j["sla"];
        if (s.contains("max_hourly_cost"))
            cfg.sla.max_hourly_cost = as_double(s["max_hourly_cost"], "sla.max_hourly_cost");
        if (s.contains("max_avg_rt_ms"))
            cfg.sla.max_avg_rt_ms = as_double(s["max_avg_rt_ms"], "sla.max_avg_rt_ms");
        if (s.contains("max_rt_ms"))
            cfg.sla.max_rt_ms = as_double(s["max_rt_ms"], "sla.max_rt_ms");
    }

    const nlohmann::json& providers = require_key(j, "providers");
    if (!providers.is_array() || providers.empty())
        bad_config("providers must be a nonempty array");
    for (const nlohmann::json& p : providers) {
        ProviderProfile prof;
        prof.id = require_key(p, "id").get<std::string>();
        if (p.contains("weight"))
            prof.initial_weight = as_int(p["weight"], "provider weight");
        if (p.contains("availability"))
            prof.availability = probability(p["availability"], "availability");
        if (p.contains("corruption"))
            prof.corruption = probability(p["corruption"], "corruption");
        if (p.contains("latency")) {
            const nlohmann::json& l = p["latency"];
            if (l.contains("base_ms"))
                prof.latency.base_ms = as_double(l["base_ms"], "latency.base_ms");
            if (l.contains("jitter_ms"))
                prof.latency.jitter_ms = as_double(l["jitter_ms"], "latency.jitter_ms");
        }
        if (p.contains("unit_cost"))
            prof.unit_cost = as_double(p["unit_cost"], "unit_cost");
        cfg.providers.push_back(std::move(prof));
    }

    if (j.contains("mode")) {
        const std::string m = j["mode"].get<std::string>();
        if (m == "sampled")
            cfg.mode = SimMode::sampled;
        else if (m == "replay")
            cfg.mode = SimMode::replay;
        else
            bad_config("mode must be \"sampled\" or \"replay\"");
    }
    if (j.contains("trace")) {
        std::vector<PlayerId> order;
        for (const ProviderProfile& p : cfg.providers)
            order.push_back(p.id);
        cfg.trace = trace_from_json(j["trace"], order);
        cfg.mode = SimMode::replay;
    }
    return cfg;
}

namespace {

SimConfig validated(SimConfig cfg) {
    if (cfg.threshold < 1)
        bad_config("threshold must be at least 1");
    if (cfg.weight_cap < 1 || cfg.weight_cap >= cfg.threshold)
        bad_config("weight_cap must satisfy 1 <= cap < threshold");
    if (cfg.periods < 0)
        bad_config("periods must be nonnegative");
    if (!(cfg.deadline_ms > 0.0))
        bad_config("deadline_ms must be positive");
    if (cfg.providers.empty())
        bad_config("at least one provider required");
    std::set<PlayerId> ids;
    int total_weight = 0;
    for (const ProviderProfile& p : cfg.providers) {
        if (p.id.empty())
            bad_config("provider ids must be nonempty");
        if (!ids.insert(p.id).second)
            bad_config("duplicate provider id " + p.id);
        if (p.initial_weight < 0 || p.initial_weight > cfg.weight_cap)
            bad_config("initial weight of " + p.id + " outside [0, cap]");
        if (!(p.latency.base_ms >= 0.0) || !(p.latency.jitter_ms >= 0.0))
            bad_config("latency of " + p.id + " must be nonnegative");
        if (!(p.unit_cost >= 0.0))
            bad_config("unit_cost of " + p.id + " must be nonnegative");
        total_weight += p.initial_weight;
    }
    if (total_weight < cfg.threshold)
        bad_config("total initial weight " + std::to_string(total_weight) +
                   " is below the threshold " + std::to_string(cfg.threshold));
    if (cfg.mode == SimMode::sampled && !cfg.trace.empty())
        bad_config("a trace is only meaningful in replay mode");
    for (const std::vector<Action>& row : cfg.trace)
        if (row.size() != cfg.providers.size())
            bad_config("every trace row must list one action per provider");
    if (cfg.secret && cfg.modulus != 0)
        cfg.secret = *cfg.secret % cfg.modulus;
    return cfg;
}

int compute_horizon(const SimConfig& cfg) {
    if (cfg.mode == SimMode::sampled)
        return cfg.periods;
    const int rows = static_cast<int>(cfg.trace.size());
    return cfg.periods == 0 ? rows : std::min(cfg.periods, rows);
}

FieldElement draw_secret(const SimConfig& cfg, const Modulus& m, Rng& rng) {
    if (cfg.secret)
        return FieldElement(*cfg.secret, m);
    return FieldElement(rng.below(m.value()), m);
}

SchemeState initial_scheme(const SimConfig& cfg, const FieldElement& secret,
                           Rng& rng) {
    std::map<PlayerId, int> weights;
    for (const ProviderProfile& p : cfg.providers)
        weights.emplace(p.id, p.initial_weight);
    return init_scheme(secret, cfg.threshold, weights, cfg.weight_cap, rng);
}

std::vector<PlayerRecord> initial_records(const SimConfig& cfg) {
    std::vector<PlayerRecord> records;
    records.reserve(cfg.providers.size());
    for (const ProviderProfile& p : cfg.providers)
        records.push_back({p.id, p.initial_weight, TrustState::initial(),
                           classify(0.0, cfg.trust), PlayerStatus::active});
    return records;
}

} // namespace

Simulation::Simulation(SimConfig config)
    : config_(validated(std::move(config))),
      horizon_(compute_horizon(config_)),
      behavior_(Rng::derive(config_.seed, "behavior")),
      latency_(Rng::derive(config_.seed, "latency")),
      scheme_rng_(Rng::derive(config_.seed, "scheme")),
      secret_(draw_secret(config_, Modulus(config_.modulus), scheme_rng_)),
      scheme_(initial_scheme(config_, secret_, scheme_rng_)),
      constraints_(config_.threshold, config_.weight_cap),
      records_(initial_records(config_)) {}

std::vector<Action> Simulation::draw_actions(std::span<const double> latencies) {
    const std::size_t n = config_.providers.size();
    std::vector<Action> acts(n, Action::defect);
    if (config_.mode == SimMode::replay)
        return config_.trace[static_cast<std::size_t>(period_ - 1)];
    for (std::size_t i = 0; i < n; ++i) {
        const ProviderProfile& p = config_.providers[i];
        const double u_corrupt = behavior_.unit();
        const double u_avail = behavior_.unit();
        if (u_corrupt < p.corruption)
            acts[i] = Action::corrupt;
        else if (u_avail < p.availability && latencies[i] <= config_.deadline_ms)
            acts[i] = Action::cooperate;
        else
            acts[i] = Action::defect; // unavailable, or available but late
    }
    return acts;
}

PeriodReport Simulation::step() {
    if (done())
        raise(Errc::out_of_range, "simulation already finished");
    period_ += 1;
    const std::size_t n = config_.providers.size();
    PeriodReport rep;
    rep.period = period_;

    auto snapshot = [&] {
        for (const PlayerRecord& r : records_) {
            rep.trust.emplace(r.id, r.trust.value);
            rep.classes.emplace(r.id, r.cls);
            rep.weights.emplace(r.id, scheme_.weight_of(r.id));
        }
    };

    // Latency is drawn for every provider every period, whatever the mode
    // or action, to keep the latency stream aligned between a sampled run
    // and its replay.
    std::vector<double> latencies(n);
    for (std::size_t i = 0; i < n; ++i) {
        const LatencyModel& lm = config_.providers[i].latency;
        latencies[i] = lm.base_ms + lm.jitter_ms * latency_.unit();
    }

    rep.actions = draw_actions(latencies);
    trace_out_.push_back(rep.actions);

    // Tampering: the player submits a corrupted share once; the commitment
    // check flags it, the share set is quarantined, and the player is
    // rebooted (trust wiped, weight revoked by this period's plan).
    std::set<PlayerId> corrupted_ids;
    for (std::size_t i = 0; i < n; ++i) {
        PlayerRecord& r = records_[i];
        if (rep.actions[i] == Action::corrupt) {
            r.status = PlayerStatus::corrupted;
            r.trust = TrustState(0.0, r.trust.period);
            const auto it = scheme_.bundles.find(r.id);
            if (it != scheme_.bundles.end() && !it->second.points.empty()) {
                const SharePoint& real = it->second.points.front();
                const SharePoint forged{real.x, real.y + real.y.peer(1)};
                if (!verify_share(forged,
                                  scheme_.commitments.at(real.x.value()),
                                  scheme_.epoch))
                    rep.tampered.push_back(r.id);
            }
        }
        if (r.status == PlayerStatus::corrupted)
            corrupted_ids.insert(r.id);
    }

    rep.safety_ok = check_safety(records_, corrupted_ids, constraints_);
    if (!rep.safety_ok) {
        // Corrupted coalition reached the threshold: the secret must be
        // considered burned. Stop instead of simulating on.
        aborted_ = true;
        snapshot();
        return rep;
    }

    // Reconstruction from the timely responders' shares.
    std::vector<SharePoint> points;
    for (std::size_t i = 0; i < n; ++i) {
        if (rep.actions[i] != Action::cooperate)
            continue;
        const PlayerId& id = config_.providers[i].id;
        rep.reconstruction.responders.push_back(id);
        rep.reconstruction.responder_weight += scheme_.weight_of(id);
        rep.response_ms.emplace(id, latencies[i]);
        const auto it = scheme_.bundles.find(id);
        if (it != scheme_.bundles.end())
            points.insert(points.end(), it->second.points.begin(),
                          it->second.points.end());
    }
    if (rep.reconstruction.responder_weight >= config_.threshold) {
        rep.reconstruction.quorum = true;
        try {
            const FieldElement value =
                reconstruct(points, config_.threshold, /*cross_check=*/true);
            rep.reconstruction.success = true;
            rep.reconstruction.matches_secret = (value == secret_);
        } catch (const Error&) {
            rep.reconstruction.success = false;
        }
    }

    // Social update over the players that took part (C or D); tampering
    // players sit the round out with their freshly reset value.
    {
        std::vector<std::size_t> participants;
        std::vector<TrustState> states;
        std::vector<bool> flags;
        for (std::size_t i = 0; i < n; ++i) {
            if (rep.actions[i] == Action::corrupt)
                continue;
            participants.push_back(i);
            states.push_back(records_[i].trust);
            flags.push_back(rep.actions[i] == Action::cooperate);
            if (rep.actions[i] == Action::cooperate)
                rep.cooperators += 1;
        }
        if (!participants.empty()) {
            const std::vector<TrustState> updated =
                social_update(states, ActionVector(flags), config_.trust);
            for (std::size_t k = 0; k < participants.size(); ++k)
                records_[participants[k]].trust = updated[k];
        }
        for (PlayerRecord& r : records_)
            r.cls = classify(r.trust.value, config_.trust);
    }

    // Weight tuning; a rejected plan is recorded, not fatal.
    const TuningPlan plan = plan_weights(records_, constraints_);
    try {
        ApplyOutcome out =
            apply_plan(scheme_, records_, plan, constraints_, scheme_rng_);
        scheme_ = std::move(out.scheme);
        records_ = std::move(out.records);
        rep.transitions = std::move(out.transitions);
        rep.plan_applied = true;
    } catch (const Error& e) {
        rep.plan_error = e.what();
    }

    std::set<PlayerId> everyone;
    for (const PlayerRecord& r : records_)
        if (r.status != PlayerStatus::corrupted)
            everyone.insert(r.id);
    rep.access_ok = check_access(records_, everyone, constraints_);

    snapshot();

    for (const auto& [id, ms] : rep.response_ms) {
        rep.rt.samples += 1;
        rep.rt.avg_ms += ms;
        rep.rt.max_ms = std::max(rep.rt.max_ms, ms);
    }
    if (rep.rt.samples > 0)
        rep.rt.avg_ms /= rep.rt.samples;
    for (std::size_t i = 0; i < n; ++i)
        rep.hourly_cost += config_.providers[i].unit_cost *
                           scheme_.weight_of(config_.providers[i].id);
    rep.sla.cost_exceeded = rep.hourly_cost > config_.sla.max_hourly_cost;
    rep.sla.avg_rt_exceeded =
        rep.rt.samples > 0 && rep.rt.avg_ms > config_.sla.max_avg_rt_ms;
    rep.sla.max_rt_exceeded =
        rep.rt.samples > 0 && rep.rt.max_ms > config_.sla.max_rt_ms;
    return rep;
}

std::vector<PeriodReport> run(const SimConfig& config) {
    Simulation sim(config);
    std::vector<PeriodReport> reports;
    reports.reserve(static_cast<std::size_t>(sim.horizon()));
    while (!sim.done())
        reports.push_back(sim.step());
    return reports;
}

std::string reports_to_csv(std::span<const PeriodReport> reports,
                           std::span<const PlayerId> provider_order) {
    std::string out = "period,player,action,trust,class,weight,rt_ms\n";
    for (const PeriodReport& rep : reports) {
        for (std::size_t i = 0; i < provider_order.size(); ++i) {
            const PlayerId& id = provider_order[i];
            out += std::to_string(rep.period);
            out += ',';
            out += id;
            out += ',';
            out += to_char(rep.actions[i]);
            out += ',';
            out += format_double(rep.trust.at(id));
            out += ',';
            out += to_string(rep.classes.at(id));
            out += ',';
            out += std::to_string(rep.weights.at(id));
            out += ',';
            if (auto it = rep.response_ms.find(id); it != rep.response_ms.end())
                out += format_fixed3(it->second);
            out += '\n';
        }
    }
    return out;
}

nlohmann::json transition_to_json(const EpochTransition& t) {
    return {{"old_epoch", t.old_epoch},
            {"new_epoch", t.new_epoch},
            {"retained_xs", t.retained_xs},
            {"retired_xs", t.retired_xs},
            {"enrolled_xs", t.enrolled_xs}};
}

nlohmann::json reports_to_json(std::span<const PeriodReport> reports) {
    nlohmann::json out = nlohmann::json::array();
    for (const PeriodReport& rep : reports) {
        nlohmann::json classes = nlohmann::json::object();
        for (const auto& [id, c] : rep.classes)
            classes[id] = to_string(c);
        nlohmann::json j{{"period", rep.period},
                         {"cooperators", rep.cooperators},
                         {"trust", rep.trust},
                         {"classes", classes},
                         {"weights", rep.weights},
                         {"response_ms", rep.response_ms},
                         {"tampered", rep.tampered},
                         {"reconstruction",
                          {{"quorum", rep.reconstruction.quorum},
                           {"success", rep.reconstruction.success},
                           {"matches_secret", rep.reconstruction.matches_secret},
                           {"responder_weight", rep.reconstruction.responder_weight},
                           {"responders", rep.reconstruction.responders}}},
                         {"rt",
                          {{"samples", rep.rt.samples},
                           {"avg_ms", rep.rt.avg_ms},
                           {"max_ms", rep.rt.max_ms}}},
                         {"hourly_cost", rep.hourly_cost},
                         {"sla",
                          {{"cost_exceeded", rep.sla.cost_exceeded},
                           {"avg_rt_exceeded", rep.sla.avg_rt_exceeded},
                           {"max_rt_exceeded", rep.sla.max_rt_exceeded}}},
                         {"plan_applied", rep.plan_applied},
                         {"plan_error", rep.plan_error},
                         {"safety_ok", rep.safety_ok},
                         {"access_ok", rep.access_ok}};
        nlohmann::json acts = nlohmann::json::array();
        for (Action a : rep.actions)
            acts.push_back(std::string(1, to_char(a)));
        j["actions"] = std::move(acts);
        nlohmann::json transitions = nlohmann::json::array();
        for (const EpochTransition& t : rep.transitions)
            transitions.push_back(transition_to_json(t));
        j["transitions"] = std::move(transitions);
        out.push_back(std::move(j));
    }
    return out;
}

nlohmann::json trace_to_json(const std::vector<std::vector<Action>>& trace,
                             std::span<const PlayerId> provider_order) {
    nlohmann::json rows = nlohmann::json::array();
    for (const std::vector<Action>& row : trace) {
        nlohmann::json r = nlohmann::json::array();
        for (Action a : row)
            r.push_back(std::string(1, to_char(a)));
        rows.push_back(std::move(r));
    }
    return {{"providers", std::vector<PlayerId>(provider_order.begin(),
                                                provider_order.end())},
            {"actions", std::move(rows)}};
}

namespace {

Action parse_action(const nlohmann::json& j) {
    if (j.is_string() && j.get_ref<const std::string&>().size() == 1)
        return action_from_char(j.get_ref<const std::string&>()[0]);
    bad_config("actions must be one-character strings (C, D or X)");
}

std::vector<std::vector<Action>> matrix_from_json(const nlohmann::json& rows) {
    std::vector<std::vector<Action>> out;
    for (const nlohmann::json& row : rows) {
        if (!row.is_array())
            bad_config("trace rows must be arrays of actions");
        std::vector<Action> r;
        r.reserve(row.size());
        for (const nlohmann::json& a : row)
            r.push_back(parse_action(a));
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace

std::vector<std::vector<Action>> trace_from_json(
    const nlohmann::json& j, std::span<const PlayerId> provider_order) {
    if (j.is_object()) {
        if (j.contains("providers")) {
            const auto given = j["providers"].get<std::vector<PlayerId>>();
            if (!std::equal(given.begin(), given.end(), provider_order.begin(),
                            provider_order.end()))
                bad_config("trace provider order does not match the config");
        }
        return matrix_from_json(require_key(j, "actions"));
    }
    if (!j.is_array())
        bad_config("trace must be an array or an object with \"actions\"");
    if (j.empty())
        return {};
    if (j.front().is_array())
        return matrix_from_json(j);
    // Full report array: pull each period's actions in provider order.
    std::vector<std::vector<Action>> out;
    for (const nlohmann::json& rep : j) {
        if (!rep.is_object() || !rep.contains("actions"))
            bad_config("report entries must carry an \"actions\" field");
        const nlohmann::json& acts = rep["actions"];
        if (!acts.is_array() || acts.size() != provider_order.size())
            bad_config("report actions must list one action per provider");
        std::vector<Action> row;
        row.reserve(acts.size());
        for (const nlohmann::json& a : acts)
            row.push_back(parse_action(a));
        out.push_back(std::move(row));
    }
    return out;
}

} // namespace sss
