#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "sss/shamir.hpp"

namespace sss {

// Zero-constant-term polynomial g added share-wise during a refresh:
// f_new = f_old + g keeps the secret (g(0) = 0) while re-randomizing every
// share. Coefficients are g_1 .. g_{t-1}; g_{t-1} may be zero.
struct RefreshPolynomial {
    std::vector<FieldElement> coefficients;

    FieldElement evaluate(const FieldElement& x) const;

    static RefreshPolynomial random(int threshold, const Modulus& m, Rng& rng);
};

// Audit record of one epoch boundary. retained + retired always partitions
// the live x-set of the previous boundary; enrolled lists x's added since
// then and is disjoint from retired.
struct EpochTransition {
    std::uint64_t old_epoch = 0;
    std::uint64_t new_epoch = 0;
    std::vector<std::uint64_t> retained_xs;
    std::vector<std::uint64_t> retired_xs;
    std::vector<std::uint64_t> enrolled_xs;
};

// Sub-share traffic of one enrollment, exposed so tests can check that no
// single message leaks the new share. pieces[j] is contributor j's additive
// split of its Lagrange term; piece_sums[k] is what recipient k forwards.
struct EnrollTranscript {
    std::vector<std::vector<FieldElement>> pieces;
    std::vector<FieldElement> piece_sums;
};

// The dealer-side view of a live scheme: who holds which points, the current
// epoch's commitments, and which x's may never be handed out again.
struct SchemeState {
    SchemeState(const Modulus& m, int threshold)
        : modulus(m), threshold(threshold) {}

    Modulus modulus;
    int threshold;
    std::uint64_t epoch = 0;
    std::map<PlayerId, ShareBundle> bundles;
    std::map<std::uint64_t, ShareCommitment> commitments; // current epoch, by x
    std::vector<ShareCommitment> archived_commitments;    // stale epochs, audit only
    std::set<std::uint64_t> retired_xs;
    std::uint64_t next_x = 1;
    // x's enrolled since the last epoch boundary; stamped into the next
    // transition record and cleared.
    std::vector<std::uint64_t> pending_enrolled;

    // All live points, ascending x.
    std::vector<SharePoint> live_points() const;
    bool x_live(std::uint64_t x) const;
    bool x_in_use(std::uint64_t x) const; // live or retired
    int weight_of(const PlayerId& id) const;
    int total_weight() const;
};

// Weighted deal wrapped into a scheme at epoch 0.
SchemeState init_scheme(const FieldElement& secret, int threshold,
                        const std::map<PlayerId, int>& weights, int weight_cap,
                        Rng& rng);

// Re-randomize every live share in place and advance the epoch. Before
// touching anything, every live share is checked against its commitment;
// a mismatch throws inconsistent_shares and leaves the state unmodified.
EpochTransition refresh(SchemeState& s, Rng& rng);
EpochTransition refresh_with(SchemeState& s, const RefreshPolynomial& g);

// Refresh every share except revoked_x, which is dropped and its x retired.
// The revoked holder's copy stays consistent with the dead epoch only.
// unknown_x if revoked_x is not live.
EpochTransition disenroll(SchemeState& s, std::uint64_t revoked_x, Rng& rng);
EpochTransition disenroll_with(SchemeState& s, std::uint64_t revoked_x,
                               const RefreshPolynomial& g);

// Dealer-free issuance of the share at x_new from exactly t live points.
// Each contributor splits lambda_j(x_new) * y_j into t uniform additive
// pieces, one per contributor; only the piece-sums are combined, so no
// participant ever sees another's full Lagrange term. The result equals
// f(x_new) for the current polynomial.
SharePoint enroll_point(std::span<const SharePoint> contributors, int threshold,
                        const FieldElement& x_new, Rng& rng,
                        EnrollTranscript* transcript = nullptr);

// Stateful enrollment at the next pool x. Contributor points must match the
// scheme's live shares (unknown_x / inconsistent_shares otherwise). The
// epoch does not advance; the new commitment joins the current set.
SharePoint enroll(SchemeState& s, const PlayerId& recipient,
                  std::span<const SharePoint> contributors, Rng& rng);

// Same, at an explicit x. reused_x if that x is live or retired.
SharePoint enroll_at(SchemeState& s, const PlayerId& recipient,
                     const FieldElement& x_new,
                     std::span<const SharePoint> contributors, Rng& rng);

} // namespace sss
