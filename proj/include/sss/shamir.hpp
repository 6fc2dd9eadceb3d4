#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sss/field.hpp"
#include "sss/rng.hpp"

namespace sss {

using PlayerId = std::string;

// One evaluation point (x, y) of the sharing polynomial. x = 0 is reserved
// for the secret itself and never appears in a share.
struct SharePoint {
    FieldElement x;
    FieldElement y;
};

// All points held by one player; the player's weight is the point count.
// Points stay sorted by x and x-values never repeat within a bundle.
struct ShareBundle {
    PlayerId player_id;
    std::vector<SharePoint> points;

    int weight() const noexcept { return static_cast<int>(points.size()); }
    // Keeps ascending-x order; duplicate_x if the slot is taken.
    void insert(const SharePoint& pt);
    // unknown_x if absent.
    SharePoint remove(std::uint64_t x);
    const SharePoint* find(std::uint64_t x) const noexcept;
};

// SHA-256 over (epoch, x, y), each as 8 big-endian bytes. A stand-in for
// verifiable secret sharing: enough to let honest parties detect a tampered
// or stale share, with no cryptographic binding claims beyond that.
struct ShareCommitment {
    std::uint64_t x = 0;
    std::uint64_t epoch = 0;
    std::array<std::uint8_t, 32> digest{};

    static constexpr const char* kAlgorithm = "SHA-256";
};

std::array<std::uint8_t, 32> commitment_digest(std::uint64_t epoch,
                                               std::uint64_t x,
                                               std::uint64_t y);
ShareCommitment make_commitment(std::uint64_t epoch, const SharePoint& pt);

// True iff the commitment matches pt at current_epoch. A commitment from any
// other epoch is a caller bug, not a verification failure: epoch_mismatch.
bool verify_share(const SharePoint& pt, const ShareCommitment& c,
                  std::uint64_t current_epoch);

std::string to_hex(std::span<const std::uint8_t> bytes);

// Degree t-1 polynomial with the secret at coefficient 0. Lives in memory
// only for the duration of a deal; nothing serializes it.
struct SecretPolynomial {
    std::vector<FieldElement> coefficients; // a_0 .. a_{t-1}, a_0 = secret

    int threshold() const noexcept { return static_cast<int>(coefficients.size()); }
    FieldElement evaluate(const FieldElement& x) const;

    // a_1 .. a_{t-1} drawn uniformly, zero included; a degenerate-looking
    // draw (e.g. a_{t-1} = 0) is required for the secrecy distribution to
    // be exactly uniform.
    static SecretPolynomial random(const FieldElement& secret, int threshold,
                                   Rng& rng);
};

struct DealResult {
    std::vector<SharePoint> shares;
    std::vector<ShareCommitment> commitments;
};

struct WeightedDealResult {
    std::map<PlayerId, ShareBundle> bundles;
    std::vector<ShareCommitment> commitments;
};

// Evaluate a fresh random polynomial at the given x's. Throws zero_x,
// duplicate_x, too_few_points (fewer x's than threshold), modulus_mismatch.
DealResult deal(const FieldElement& secret, int threshold,
                std::span<const FieldElement> xs, Rng& rng,
                std::uint64_t epoch = 0);

// Same, but with caller-supplied coefficients (a_0 first). Reproducible and
// therefore insecure; exists for worked examples and tests.
DealResult deal_with_coefficients(std::span<const FieldElement> coefficients,
                                  std::span<const FieldElement> xs,
                                  std::uint64_t epoch = 0);

// Interpolate the secret from the t lowest-x shares. insufficient_shares if
// fewer than threshold, duplicate_x on repeats. With cross_check set, every
// extra share is tested against the interpolant; a disagreement throws
// corrupt_share_suspected.
FieldElement reconstruct(std::span<const SharePoint> shares, int threshold,
                         bool cross_check = false);

// Evaluate the interpolant at an arbitrary x (the general Lagrange form, a
// separate code path from reconstruct's at-zero product form).
FieldElement interpolate_at(std::span<const SharePoint> shares, int threshold,
                            const FieldElement& x_target);

// Deal one point per unit of weight, x = 1,2,... assigned in id order.
// weight_exceeds_cap if any weight is negative or above cap (cap < threshold
// is the caller's invariant, checked here), pool_exhausted if the x-pool
// [1, p) cannot cover the total weight, too_few_points if total weight is
// below threshold.
WeightedDealResult weighted_deal(const FieldElement& secret, int threshold,
                                 const std::map<PlayerId, int>& weights,
                                 int weight_cap, Rng& rng,
                                 std::uint64_t epoch = 0);

} // namespace sss
