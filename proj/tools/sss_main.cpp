// Command-line front end: deal/reconstruct and the share-set lifecycle on
// explicit share lists, trust trajectories as CSV, and the full simulator.
// Exit codes: 0 success, 1 domain failure (bad values, bad config), 2 usage.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <unistd.h>

#include "sss/cloudsim.hpp"
#include "sss/dynamics.hpp"
#include "sss/shamir.hpp"
#include "sss/social.hpp"
#include "sss/trust.hpp"

namespace {

using nlohmann::json;

bool color_enabled() {
    return isatty(fileno(stderr)) && std::getenv("NO_COLOR") == nullptr;
}

void diag(const std::string& message) {
    if (color_enabled())
        std::fprintf(stderr, "\x1b[31merror:\x1b[0m %s\n", message.c_str());
    else
        std::fprintf(stderr, "error: %s\n", message.c_str());
}

// True iff sv is a decimal that fits in 64 bits.
bool fits_u64(std::string_view sv) {
    if (sv.empty() || sv.find_first_not_of("0123456789") != std::string_view::npos)
        return false;
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    return ec == std::errc() && ptr == sv.data() + sv.size();
}

// Option syntax checks run inside CLI11 so malformed values exit 2.
const CLI::Validator SharePair(
    [](std::string& s) -> std::string {
        const auto colon = s.find(':');
        if (colon == std::string::npos ||
            !fits_u64(std::string_view(s).substr(0, colon)) ||
            !fits_u64(std::string_view(s).substr(colon + 1)))
            return "expected decimal x:y";
        return {};
    },
    "X:Y");

const CLI::Validator DecimalList(
    [](std::string& s) -> std::string {
        std::size_t start = 0;
        if (s.empty())
            return "expected v1,v2,...";
        while (true) {
            const std::size_t comma = s.find(',', start);
            const std::string_view item =
                std::string_view(s).substr(start, comma - start);
            if (!fits_u64(item))
                return "expected v1,v2,...";
            if (comma == std::string::npos)
                return {};
            start = comma + 1;
        }
    },
    "V1,V2,...");

const CLI::Validator XsRange(
    [](std::string& s) -> std::string {
        const auto range = s.find("..");
        if (range != std::string::npos) {
            if (!fits_u64(std::string_view(s).substr(0, range)) ||
                !fits_u64(std::string_view(s).substr(range + 2)))
                return "expected lo..hi";
            return {};
        }
        std::string err = DecimalList(s);
        return err.empty() ? err : "expected lo..hi or v1,v2,...";
    },
    "LO..HI|V1,V2,...");

const CLI::Validator ActionPattern(
    [](std::string& s) -> std::string {
        if (s.empty() || s.find_first_not_of("CD") != std::string::npos)
            return "expected a string of C and D";
        return {};
    },
    "[CD]+");

std::vector<std::uint64_t> parse_list(const std::string& csv) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(std::stoull(item));
    return out;
}

std::vector<std::uint64_t> parse_xs(const std::string& text) {
    const auto range = text.find("..");
    if (range == std::string::npos)
        return parse_list(text);
    const std::uint64_t lo = std::stoull(text.substr(0, range));
    const std::uint64_t hi = std::stoull(text.substr(range + 2));
    if (hi < lo)
        sss::raise(sss::Errc::invalid_params, "empty x range " + text);
    std::vector<std::uint64_t> out;
    for (std::uint64_t x = lo; x <= hi; ++x)
        out.push_back(x);
    return out;
}

std::vector<sss::SharePoint> parse_shares(const std::vector<std::string>& raw,
                                          const sss::Modulus& m) {
    std::vector<sss::SharePoint> out;
    out.reserve(raw.size());
    for (const std::string& s : raw) {
        const auto colon = s.find(':');
        out.push_back({sss::FieldElement(std::stoull(s.substr(0, colon)), m),
                       sss::FieldElement(std::stoull(s.substr(colon + 1)), m)});
    }
    return out;
}

std::string dec(std::uint64_t v) { return std::to_string(v); }

json share_to_json(const sss::SharePoint& pt, std::uint64_t epoch) {
    return {{"x", dec(pt.x.value())},
            {"y", dec(pt.y.value())},
            {"p", dec(pt.x.modulus())},
            {"epoch", epoch}};
}

json commitment_to_json(const sss::ShareCommitment& c) {
    return {{"x", dec(c.x)},
            {"epoch", c.epoch},
            {"algorithm", sss::ShareCommitment::kAlgorithm},
            {"digest", sss::to_hex(c.digest)}};
}

void emit(const json& j) {
    std::fputs(j.dump(2).c_str(), stdout);
    std::fputc('\n', stdout);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        sss::raise(sss::Errc::invalid_config, "cannot open " + path + " for writing");
    out << content;
    if (!out.flush())
        sss::raise(sss::Errc::invalid_config, "failed writing " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        sss::raise(sss::Errc::invalid_config, "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Scheme wrapper for the stateless subcommands: the share list given on the
// command line becomes one synthetic bundle with commitments minted at the
// stated epoch, so the library's consistency checks pass by construction.
sss::SchemeState scheme_from_shares(const sss::Modulus& m, int threshold,
                                    std::uint64_t epoch,
                                    const std::vector<sss::SharePoint>& shares) {
    sss::SchemeState s{m, threshold};
    s.epoch = epoch;
    sss::ShareBundle bundle{"holder", {}};
    std::uint64_t max_x = 0;
    for (const sss::SharePoint& pt : shares) {
        bundle.insert(pt);
        s.commitments.emplace(pt.x.value(), sss::make_commitment(epoch, pt));
        max_x = std::max(max_x, pt.x.value());
    }
    s.bundles.emplace("holder", std::move(bundle));
    s.next_x = max_x + 1;
    return s;
}

json scheme_to_json(const sss::SchemeState& s, const sss::EpochTransition& t) {
    json shares = json::array();
    json commitments = json::array();
    for (const sss::SharePoint& pt : s.live_points()) {
        shares.push_back(share_to_json(pt, s.epoch));
        commitments.push_back(commitment_to_json(s.commitments.at(pt.x.value())));
    }
    return {{"epoch", s.epoch},
            {"shares", std::move(shares)},
            {"commitments", std::move(commitments)},
            {"transition", sss::transition_to_json(t)}};
}

struct DealArgs {
    std::uint64_t prime = 0;
    int threshold = 0;
    std::uint64_t epoch = 0;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> secret;
    int share_count = 0;
    std::string coeffs;
    std::string xs;
};

void run_deal(const DealArgs& a) {
    const sss::Modulus m(a.prime);
    std::vector<sss::FieldElement> xs;
    if (!a.xs.empty()) {
        for (std::uint64_t x : parse_xs(a.xs))
            xs.emplace_back(x, m);
    } else if (a.share_count > 0) {
        for (std::uint64_t x = 1; x <= static_cast<std::uint64_t>(a.share_count); ++x)
            xs.emplace_back(x, m);
    } else {
        sss::raise(sss::Errc::invalid_params, "need --shares or --xs");
    }

    sss::DealResult dealt;
    int threshold = a.threshold;
    std::uint64_t secret_value = 0;
    if (!a.coeffs.empty()) {
        std::vector<sss::FieldElement> coeffs;
        for (std::uint64_t c : parse_list(a.coeffs))
            coeffs.emplace_back(c, m);
        if (a.threshold != 0 && a.threshold != static_cast<int>(coeffs.size()))
            sss::raise(sss::Errc::invalid_params,
                       "--threshold disagrees with the coefficient count");
        threshold = static_cast<int>(coeffs.size());
        secret_value = coeffs.front().value();
        dealt = sss::deal_with_coefficients(coeffs, xs, a.epoch);
    } else {
        if (!a.secret)
            sss::raise(sss::Errc::invalid_params, "need --secret or --coeffs");
        if (threshold == 0)
            sss::raise(sss::Errc::invalid_params, "need --threshold");
        sss::Rng rng(a.seed);
        const sss::FieldElement secret(*a.secret, m);
        secret_value = secret.value();
        dealt = sss::deal(secret, threshold, xs, rng, a.epoch);
    }

    json shares = json::array();
    json commitments = json::array();
    for (std::size_t i = 0; i < dealt.shares.size(); ++i) {
        shares.push_back(share_to_json(dealt.shares[i], a.epoch));
        commitments.push_back(commitment_to_json(dealt.commitments[i]));
    }
    emit({{"p", dec(a.prime)},
          {"threshold", threshold},
          {"epoch", a.epoch},
          {"shares", std::move(shares)},
          {"commitments", std::move(commitments)},
          // x = 0 is the secret's slot; its commitment binds the dealt value
          // without disclosing it.
          {"secret_commitment",
           {{"epoch", a.epoch},
            {"algorithm", sss::ShareCommitment::kAlgorithm},
            {"digest", sss::to_hex(sss::commitment_digest(a.epoch, 0,
                                                          secret_value))}}}});
}

struct ShareSetArgs {
    std::uint64_t prime = 0;
    int threshold = 0;
    std::uint64_t epoch = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> shares;
    std::string g_coeffs;
    bool cross_check = false;
    std::uint64_t revoke = 0;
    std::uint64_t x_new = 0;
};

void run_reconstruct(const ShareSetArgs& a) {
    const sss::Modulus m(a.prime);
    const std::vector<sss::SharePoint> shares = parse_shares(a.shares, m);
    const sss::FieldElement secret =
        sss::reconstruct(shares, a.threshold, a.cross_check);
    std::printf("%llu\n", static_cast<unsigned long long>(secret.value()));
}

sss::RefreshPolynomial refresh_poly(const ShareSetArgs& a, const sss::Modulus& m,
                                    int threshold) {
    if (!a.g_coeffs.empty()) {
        sss::RefreshPolynomial g;
        for (std::uint64_t c : parse_list(a.g_coeffs))
            g.coefficients.emplace_back(c, m);
        return g;
    }
    sss::Rng rng(a.seed);
    return sss::RefreshPolynomial::random(threshold, m, rng);
}

void run_refresh(const ShareSetArgs& a) {
    const sss::Modulus m(a.prime);
    sss::SchemeState s = scheme_from_shares(m, a.threshold, a.epoch,
                                            parse_shares(a.shares, m));
    const sss::EpochTransition t =
        sss::refresh_with(s, refresh_poly(a, m, a.threshold));
    emit(scheme_to_json(s, t));
}

void run_disenroll(const ShareSetArgs& a) {
    const sss::Modulus m(a.prime);
    sss::SchemeState s = scheme_from_shares(m, a.threshold, a.epoch,
                                            parse_shares(a.shares, m));
    const sss::EpochTransition t =
        sss::disenroll_with(s, a.revoke, refresh_poly(a, m, a.threshold));
    emit(scheme_to_json(s, t));
}

void run_enroll(const ShareSetArgs& a) {
    const sss::Modulus m(a.prime);
    const std::vector<sss::SharePoint> contributors = parse_shares(a.shares, m);
    sss::Rng rng(a.seed);
    const sss::SharePoint pt = sss::enroll_point(
        contributors, a.threshold, sss::FieldElement(a.x_new, m), rng);
    emit(share_to_json(pt, a.epoch));
}

struct TrustCurveArgs {
    std::string pattern;
    int rounds = 0;
    double alpha = 0.3, beta = -0.3, epsilon = 0.1;
    double eta = 0.01, theta = 0.05, kappa = 0.09;
    int social = 0;
    std::string others;
    std::string out_path;
};

void run_trust_curve(const TrustCurveArgs& a) {
    const sss::TrustParams params(a.alpha, a.beta, a.epsilon, a.eta, a.theta,
                                  a.kappa);
    const int rounds = a.rounds > 0 ? a.rounds : static_cast<int>(a.pattern.size());

    std::string csv = "round,x,applied,trust\n";
    auto fmt = [](double v) {
        char buf[32];
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, end);
    };

    if (a.social == 0) {
        sss::TrustState s;
        for (int r = 1; r <= rounds; ++r) {
            const bool coop =
                a.pattern[static_cast<std::size_t>((r - 1)) % a.pattern.size()] == 'C';
            const sss::TrustState next = sss::update_individual(s, coop, params);
            csv += std::to_string(r) + "," + fmt(s.value) + "," +
                   fmt(next.value - s.value) + "," + fmt(next.value) + "\n";
            s = next;
        }
    } else {
        // Subject is player 0; each other player repeats one fixed action.
        const std::size_t others = static_cast<std::size_t>(a.social - 1);
        std::string fixed = a.others.empty() ? std::string(others, 'C') : a.others;
        if (fixed.size() != others)
            sss::raise(sss::Errc::invalid_params,
                       "--others must give one action per non-subject player");
        std::vector<sss::TrustState> states(static_cast<std::size_t>(a.social));
        for (int r = 1; r <= rounds; ++r) {
            std::vector<bool> flags;
            flags.push_back(
                a.pattern[static_cast<std::size_t>(r - 1) % a.pattern.size()] == 'C');
            for (char c : fixed)
                flags.push_back(c == 'C');
            const double before = states[0].value;
            states = sss::social_update(states, sss::ActionVector(flags), params);
            csv += std::to_string(r) + "," + fmt(before) + "," +
                   fmt(states[0].value - before) + "," + fmt(states[0].value) + "\n";
        }
    }

    if (a.out_path.empty())
        std::fputs(csv.c_str(), stdout);
    else
        write_file(a.out_path, csv);
}

struct SimArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string trace_path;
    std::string out_csv;
    std::string out_json;
};

void run_sim(const SimArgs& a) {
    json cfg_json;
    try {
        cfg_json = json::parse(read_file(a.config_path));
    } catch (const json::exception& e) {
        sss::raise(sss::Errc::invalid_config,
                   a.config_path + ": " + std::string(e.what()));
    }
    sss::SimConfig cfg = sss::SimConfig::from_json(cfg_json);
    if (a.seed)
        cfg.seed = *a.seed;

    std::vector<sss::PlayerId> order;
    for (const sss::ProviderProfile& p : cfg.providers)
        order.push_back(p.id);

    if (!a.trace_path.empty()) {
        json trace_json;
        try {
            trace_json = json::parse(read_file(a.trace_path));
        } catch (const json::exception& e) {
            sss::raise(sss::Errc::invalid_config,
                       a.trace_path + ": " + std::string(e.what()));
        }
        cfg.trace = sss::trace_from_json(trace_json, order);
        cfg.mode = sss::SimMode::replay;
    }

    sss::Simulation sim(cfg);
    std::vector<sss::PeriodReport> reports;
    while (!sim.done())
        reports.push_back(sim.step());

    int reconstructions = 0, sla_violations = 0;
    for (const sss::PeriodReport& rep : reports) {
        if (rep.reconstruction.success && rep.reconstruction.matches_secret)
            reconstructions += 1;
        if (rep.sla.any())
            sla_violations += 1;
    }

    if (!a.out_csv.empty())
        write_file(a.out_csv, sss::reports_to_csv(reports, order));
    if (!a.out_json.empty())
        write_file(a.out_json, sss::reports_to_json(reports).dump(2) + "\n");
    if (a.out_csv.empty() && a.out_json.empty())
        emit(sss::reports_to_json(reports));

    std::fprintf(stderr, "periods=%zu reconstructions=%d/%zu sla_violations=%d safety=%s\n",
                 reports.size(), reconstructions, reports.size(), sla_violations,
                 sim.safety_aborted() ? "aborted" : "ok");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted threshold secret sharing with trust-driven resizing"};
    app.require_subcommand(1);

    DealArgs deal_args;
    CLI::App* deal = app.add_subcommand("deal", "split a secret into shares");
    deal->add_option("--prime", deal_args.prime, "field modulus p")->required();
    deal->add_option("--threshold,-t", deal_args.threshold,
                     "shares needed to reconstruct");
    deal->add_option("--epoch", deal_args.epoch, "epoch stamped on commitments");
    auto* opt_secret =
        deal->add_option("--secret", deal_args.secret, "secret in [0, p)");
    deal->add_option("--seed", deal_args.seed, "rng seed for random coefficients");
    deal->add_option("--shares", deal_args.share_count,
                     "number of shares, dealt at x = 1..N");
    auto* opt_coeffs =
        deal->add_option("--coeffs", deal_args.coeffs,
                         "insecure-deterministic: explicit coefficients "
                         "a0,a1,... (a0 is the secret, threshold = count); "
                         "every share becomes predictable, demos/tests only")
            ->check(DecimalList);
    deal->add_option("--xs", deal_args.xs, "evaluation points, lo..hi or list")
        ->check(XsRange);
    opt_coeffs->excludes(opt_secret);
    deal->callback([&] { run_deal(deal_args); });

    ShareSetArgs rec_args;
    CLI::App* rec = app.add_subcommand("reconstruct",
                                       "recover the secret from shares");
    rec->add_option("--prime", rec_args.prime, "field modulus p")->required();
    rec->add_option("--threshold,-t", rec_args.threshold, "scheme threshold")
        ->required();
    rec->add_option("--share", rec_args.shares, "share point x:y (repeat)")
        ->required()
        ->check(SharePair);
    rec->add_flag("--cross-check", rec_args.cross_check,
                  "verify surplus shares against the interpolant");
    rec->callback([&] { run_reconstruct(rec_args); });

    ShareSetArgs ref_args;
    CLI::App* ref = app.add_subcommand(
        "refresh", "re-randomize a share set without moving the secret");
    ref->add_option("--prime", ref_args.prime, "field modulus p")->required();
    ref->add_option("--threshold,-t", ref_args.threshold, "scheme threshold")
        ->required();
    ref->add_option("--epoch", ref_args.epoch, "current epoch of the shares");
    ref->add_option("--share", ref_args.shares, "share point x:y (repeat)")
        ->required()
        ->check(SharePair);
    auto* ref_g = ref->add_option("--g-coeffs", ref_args.g_coeffs,
                                  "insecure-deterministic: refresh polynomial "
                                  "coefficients g1,g2,... (g0 = 0 implied)")
                      ->check(DecimalList);
    ref->add_option("--seed", ref_args.seed, "rng seed for a random refresh")
        ->excludes(ref_g);
    ref->callback([&] { run_refresh(ref_args); });

    ShareSetArgs enr_args;
    CLI::App* enr = app.add_subcommand(
        "enroll", "issue one new share from t contributor shares");
    enr->add_option("--prime", enr_args.prime, "field modulus p")->required();
    enr->add_option("--threshold,-t", enr_args.threshold, "scheme threshold")
        ->required();
    enr->add_option("--epoch", enr_args.epoch, "current epoch of the shares");
    enr->add_option("--share", enr_args.shares,
                    "contributor share x:y (repeat, exactly t)")
        ->required()
        ->check(SharePair);
    enr->add_option("--x-new", enr_args.x_new, "x of the share to issue")
        ->required();
    enr->add_option("--seed", enr_args.seed, "rng seed for the sub-share split");
    enr->callback([&] { run_enroll(enr_args); });

    ShareSetArgs dis_args;
    CLI::App* dis = app.add_subcommand(
        "disenroll", "revoke one share and refresh the rest");
    dis->add_option("--prime", dis_args.prime, "field modulus p")->required();
    dis->add_option("--threshold,-t", dis_args.threshold, "scheme threshold")
        ->required();
    dis->add_option("--epoch", dis_args.epoch, "current epoch of the shares");
    dis->add_option("--share", dis_args.shares, "share point x:y (repeat)")
        ->required()
        ->check(SharePair);
    dis->add_option("--revoke", dis_args.revoke, "x of the share to revoke")
        ->required();
    auto* dis_g = dis->add_option("--g-coeffs", dis_args.g_coeffs,
                                  "insecure-deterministic: refresh polynomial "
                                  "coefficients g1,g2,... (g0 = 0 implied)")
                      ->check(DecimalList);
    dis->add_option("--seed", dis_args.seed, "rng seed for a random refresh")
        ->excludes(dis_g);
    dis->callback([&] { run_disenroll(dis_args); });

    TrustCurveArgs tc_args;
    CLI::App* tc = app.add_subcommand(
        "trust-curve", "trust trajectory for an action pattern, as CSV");
    tc->add_option("--pattern", tc_args.pattern,
                   "subject actions per round, cycled (e.g. CCDC)")
        ->required()
        ->check(ActionPattern);
    tc->add_option("--rounds", tc_args.rounds,
                   "rounds to run (default: pattern length)");
    tc->add_option("--alpha", tc_args.alpha, "good-class edge");
    tc->add_option("--beta", tc_args.beta, "bad-class edge");
    tc->add_option("--epsilon", tc_args.epsilon, "taper band width");
    tc->add_option("--eta", tc_args.eta, "edge increment");
    tc->add_option("--theta", tc_args.theta, "flat band increment");
    tc->add_option("--kappa", tc_args.kappa, "peak increment");
    tc->add_option("--social", tc_args.social,
                   "population size for the scaled update (0 = individual)");
    tc->add_option("--others", tc_args.others,
                   "fixed action of each other player (default all C)")
        ->check(ActionPattern);
    tc->add_option("--out", tc_args.out_path, "write the CSV here instead of stdout");
    tc->callback([&] { run_trust_curve(tc_args); });

    SimArgs sim_args;
    CLI::App* sim = app.add_subcommand("sim", "run the provider simulation");
    sim->add_option("--config", sim_args.config_path, "simulation config JSON")
        ->required();
    sim->add_option("--seed", sim_args.seed, "override the config seed");
    sim->add_option("--trace", sim_args.trace_path,
                    "replay this action trace (matrix or report JSON)");
    sim->add_option("--out-csv", sim_args.out_csv, "write per-player CSV here");
    sim->add_option("--out-json", sim_args.out_json, "write period reports here");
    sim->callback([&] { run_sim(sim_args); });

    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help / --version
        app.exit(e);
        return 2;
    } catch (const sss::Error& e) {
        diag(e.what());
        return 1;
    } catch (const json::exception& e) {
        diag(e.what());
        return 1;
    } catch (const std::exception& e) {
        diag(e.what());
        return 1;
    }
}
