#include "sss/dynamics.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <utility>

namespace sss {

FieldElement RefreshPolynomial::evaluate(const FieldElement& x) const {
    // Horner on x * (g_1 + g_2 x + ...): the constant term is structurally 0.
    FieldElement acc = x.peer(0);
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
        acc = acc * x + *it;
    return acc * x;
}

RefreshPolynomial RefreshPolynomial::random(int threshold, const Modulus& m,
                                            Rng& rng) {
    if (threshold < 1)
        raise(Errc::invalid_params, "threshold must be at least 1");
    RefreshPolynomial g;
    g.coefficients.reserve(static_cast<std::size_t>(threshold - 1));
    for (int i = 1; i < threshold; ++i)
        g.coefficients.push_back(FieldElement(rng.below(m.value()), m));
    return g;
}

std::vector<SharePoint> SchemeState::live_points() const {
    std::vector<SharePoint> pts;
    for (const auto& [id, bundle] : bundles)
        pts.insert(pts.end(), bundle.points.begin(), bundle.points.end());
    std::sort(pts.begin(), pts.end(), [](const SharePoint& a, const SharePoint& b) {
        return a.x.value() < b.x.value();
    });
    return pts;
}

bool SchemeState::x_live(std::uint64_t x) const {
    for (const auto& [id, bundle] : bundles)
        if (bundle.find(x))
            return true;
    return false;
}

bool SchemeState::x_in_use(std::uint64_t x) const {
    return retired_xs.count(x) != 0 || x_live(x);
}

int SchemeState::weight_of(const PlayerId& id) const {
    auto it = bundles.find(id);
    return it == bundles.end() ? 0 : it->second.weight();
}

int SchemeState::total_weight() const {
    int w = 0;
    for (const auto& [id, bundle] : bundles)
        w += bundle.weight();
    return w;
}

SchemeState init_scheme(const FieldElement& secret, int threshold,
                        const std::map<PlayerId, int>& weights, int weight_cap,
                        Rng& rng) {
    Modulus m(secret.modulus());
    WeightedDealResult dealt =
        weighted_deal(secret, threshold, weights, weight_cap, rng, 0);
    SchemeState s{m, threshold};
    s.bundles = std::move(dealt.bundles);
    for (const ShareCommitment& c : dealt.commitments)
        s.commitments.emplace(c.x, c);
    s.next_x = static_cast<std::uint64_t>(s.total_weight()) + 1;
    return s;
}

namespace {

// Every live point must carry a current-epoch commitment that verifies.
void require_consistent(const SchemeState& s) {
    for (const auto& [id, bundle] : s.bundles) {
        for (const SharePoint& pt : bundle.points) {
            auto it = s.commitments.find(pt.x.value());
            if (it == s.commitments.end())
                raise(Errc::inconsistent_shares,
                      "no commitment for live x = " +
                          std::to_string(pt.x.value()));
            if (!verify_share(pt, it->second, s.epoch))
                raise(Errc::inconsistent_shares,
                      "share at x = " + std::to_string(pt.x.value()) +
                          " does not match its commitment");
        }
    }
}

void require_degree_fits(const RefreshPolynomial& g, int threshold) {
    if (static_cast<int>(g.coefficients.size()) > threshold - 1)
        raise(Errc::invalid_params,
              "refresh polynomial degree exceeds threshold - 1");
}

// Shared tail of refresh/disenroll: add g to every remaining live share,
// re-issue commitments, advance the epoch, emit the transition record.
EpochTransition advance_epoch(SchemeState& s, const RefreshPolynomial& g,
                              std::vector<std::uint64_t> retired_now) {
    EpochTransition t;
    t.old_epoch = s.epoch;
    t.new_epoch = s.epoch + 1;
    t.retired_xs = std::move(retired_now);
    t.enrolled_xs = std::exchange(s.pending_enrolled, {});

    for (auto& [id, bundle] : s.bundles)
        for (SharePoint& pt : bundle.points)
            pt.y = pt.y + g.evaluate(pt.x);

    for (const auto& [x, c] : s.commitments)
        s.archived_commitments.push_back(c);
    s.commitments.clear();
    s.epoch = t.new_epoch;
    for (const SharePoint& pt : s.live_points()) {
        s.commitments.emplace(pt.x.value(), make_commitment(s.epoch, pt));
        const std::uint64_t x = pt.x.value();
        const bool enrolled_since_boundary =
            std::find(t.enrolled_xs.begin(), t.enrolled_xs.end(), x) !=
            t.enrolled_xs.end();
        if (!enrolled_since_boundary)
            t.retained_xs.push_back(x);
    }
    return t;
}

} // namespace

EpochTransition refresh_with(SchemeState& s, const RefreshPolynomial& g) {
    require_degree_fits(g, s.threshold);
    require_consistent(s);
    return advance_epoch(s, g, {});
}

EpochTransition refresh(SchemeState& s, Rng& rng) {
    RefreshPolynomial g = RefreshPolynomial::random(s.threshold, s.modulus, rng);
    return refresh_with(s, g);
}

EpochTransition disenroll_with(SchemeState& s, std::uint64_t revoked_x,
                               const RefreshPolynomial& g) {
    require_degree_fits(g, s.threshold);
    if (!s.x_live(revoked_x))
        raise(Errc::unknown_x,
              "no live share at x = " + std::to_string(revoked_x));
    require_consistent(s);

    for (auto& [id, bundle] : s.bundles) {
        if (bundle.find(revoked_x)) {
            bundle.remove(revoked_x);
            break;
        }
    }
    if (auto it = s.commitments.find(revoked_x); it != s.commitments.end()) {
        s.archived_commitments.push_back(it->second);
        s.commitments.erase(it);
    }
    s.retired_xs.insert(revoked_x);

    // A pending enrollment that is immediately revoked would otherwise show
    // up as both enrolled and retired; drop it from pending instead.
    auto pending = std::find(s.pending_enrolled.begin(),
                             s.pending_enrolled.end(), revoked_x);
    if (pending != s.pending_enrolled.end())
        s.pending_enrolled.erase(pending);

    return advance_epoch(s, g, {revoked_x});
}

EpochTransition disenroll(SchemeState& s, std::uint64_t revoked_x, Rng& rng) {
    RefreshPolynomial g = RefreshPolynomial::random(s.threshold, s.modulus, rng);
    return disenroll_with(s, revoked_x, g);
}

SharePoint enroll_point(std::span<const SharePoint> contributors, int threshold,
                        const FieldElement& x_new, Rng& rng,
                        EnrollTranscript* transcript) {
    if (static_cast<int>(contributors.size()) != threshold)
        raise(Errc::too_few_contributors,
              std::to_string(contributors.size()) +
                  " contributors, protocol needs exactly " +
                  std::to_string(threshold));
    std::set<std::uint64_t> xs;
    for (const SharePoint& pt : contributors) {
        if (pt.x.modulus() != x_new.modulus() ||
            pt.y.modulus() != x_new.modulus())
            raise(Errc::modulus_mismatch, "contributors from different fields");
        if (pt.x.is_zero())
            raise(Errc::zero_x, "x = 0 is reserved for the secret");
        if (!xs.insert(pt.x.value()).second)
            raise(Errc::duplicate_x, "contributor x = " +
                                         std::to_string(pt.x.value()) +
                                         " appears twice");
    }
    if (x_new.is_zero())
        raise(Errc::zero_x, "x = 0 is reserved for the secret");
    if (xs.count(x_new.value()))
        raise(Errc::reused_x, "x = " + std::to_string(x_new.value()) +
                                  " already holds a share");

    const std::size_t t = contributors.size();
    EnrollTranscript local;
    EnrollTranscript& tr = transcript ? *transcript : local;
    tr.pieces.assign(t, {});
    tr.piece_sums.assign(t, x_new.peer(0));

    for (std::size_t j = 0; j < t; ++j) {
        // lambda_j(x_new) = prod_{k != j} (x_new - x_k) / (x_j - x_k)
        FieldElement lambda = x_new.peer(1);
        for (std::size_t k = 0; k < t; ++k) {
            if (k == j)
                continue;
            lambda = lambda * ((x_new - contributors[k].x) /
                               (contributors[j].x - contributors[k].x));
        }
        const FieldElement sigma = lambda * contributors[j].y;

        // Additive t-way split of sigma: t-1 uniform pieces, one balance.
        std::vector<FieldElement>& row = tr.pieces[j];
        row.reserve(t);
        FieldElement running = x_new.peer(0);
        for (std::size_t k = 0; k + 1 < t; ++k) {
            row.push_back(x_new.peer(rng.below(x_new.modulus())));
            running = running + row.back();
        }
        row.push_back(sigma - running);
        for (std::size_t k = 0; k < t; ++k)
            tr.piece_sums[k] = tr.piece_sums[k] + row[k];
    }

    FieldElement y_new = x_new.peer(0);
    for (const FieldElement& partial : tr.piece_sums)
        y_new = y_new + partial;
    return SharePoint{x_new, y_new};
}

namespace {

void require_live_contributors(const SchemeState& s,
                               std::span<const SharePoint> contributors) {
    for (const SharePoint& pt : contributors) {
        const SharePoint* live = nullptr;
        for (const auto& [id, bundle] : s.bundles)
            if ((live = bundle.find(pt.x.value())))
                break;
        if (!live)
            raise(Errc::unknown_x, "contributor x = " +
                                       std::to_string(pt.x.value()) +
                                       " is not a live share");
        if (live->y != pt.y)
            raise(Errc::inconsistent_shares,
                  "contributor share at x = " + std::to_string(pt.x.value()) +
                      " disagrees with the live share");
    }
}

SharePoint enroll_common(SchemeState& s, const PlayerId& recipient,
                         const FieldElement& x_new,
                         std::span<const SharePoint> contributors, Rng& rng) {
    require_live_contributors(s, contributors);
    SharePoint pt = enroll_point(contributors, s.threshold, x_new, rng);
    auto [it, inserted] = s.bundles.try_emplace(recipient,
                                                ShareBundle{recipient, {}});
    it->second.insert(pt);
    s.commitments.emplace(pt.x.value(), make_commitment(s.epoch, pt));
    s.pending_enrolled.push_back(pt.x.value());
    if (pt.x.value() >= s.next_x)
        s.next_x = pt.x.value() + 1;
    return pt;
}

} // namespace

SharePoint enroll(SchemeState& s, const PlayerId& recipient,
                  std::span<const SharePoint> contributors, Rng& rng) {
    if (s.next_x >= s.modulus.value())
        raise(Errc::pool_exhausted, "x-pool [1, p) is spent");
    return enroll_common(s, recipient, FieldElement(s.next_x, s.modulus),
                         contributors, rng);
}

SharePoint enroll_at(SchemeState& s, const PlayerId& recipient,
                     const FieldElement& x_new,
                     std::span<const SharePoint> contributors, Rng& rng) {
    if (x_new.modulus() != s.modulus.value())
        raise(Errc::modulus_mismatch, "x from a different field");
    if (x_new.is_zero())
        raise(Errc::zero_x, "x = 0 is reserved for the secret");
    if (s.x_in_use(x_new.value()))
        raise(Errc::reused_x, "x = " + std::to_string(x_new.value()) +
                                  " is live or retired");
    return enroll_common(s, recipient, x_new, contributors, rng);
}

} // namespace sss
