#include "sss/shamir.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstring>
#include <set>
#include <string>

namespace sss {

namespace {

void store_be64(std::uint8_t* out, std::uint64_t v) {
    for (int i = 7; i >= 0; --i) {
        out[i] = static_cast<std::uint8_t>(v & 0xff);
        v >>= 8;
    }
}

// Shares must be nonzero-x, pairwise distinct, and all in one field.
void validate_points(std::span<const SharePoint> pts) {
    std::set<std::uint64_t> seen;
    for (const SharePoint& pt : pts) {
        if (pt.x.modulus() != pts.front().x.modulus() ||
            pt.y.modulus() != pt.x.modulus())
            raise(Errc::modulus_mismatch, "share points from different fields");
        if (pt.x.is_zero())
            raise(Errc::zero_x, "x = 0 is reserved for the secret");
        if (!seen.insert(pt.x.value()).second)
            raise(Errc::duplicate_x,
                  "x = " + std::to_string(pt.x.value()) + " appears twice");
    }
}

void validate_xs(std::span<const FieldElement> xs, int threshold) {
    if (static_cast<int>(xs.size()) < threshold)
        raise(Errc::too_few_points,
              std::to_string(xs.size()) + " evaluation points for threshold " +
                  std::to_string(threshold));
    std::set<std::uint64_t> seen;
    for (const FieldElement& x : xs) {
        if (x.modulus() != xs.front().modulus())
            raise(Errc::modulus_mismatch, "evaluation points from different fields");
        if (x.is_zero())
            raise(Errc::zero_x, "x = 0 is reserved for the secret");
        if (!seen.insert(x.value()).second)
            raise(Errc::duplicate_x,
                  "x = " + std::to_string(x.value()) + " appears twice");
    }
}

// The t lowest-x shares, ascending. Callers have already validated.
std::vector<SharePoint> lowest_t(std::span<const SharePoint> shares, int t) {
    std::vector<SharePoint> sorted(shares.begin(), shares.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const SharePoint& a, const SharePoint& b) {
                  return a.x.value() < b.x.value();
              });
    sorted.erase(sorted.begin() + t, sorted.end());
    return sorted;
}

} // namespace

void ShareBundle::insert(const SharePoint& pt) {
    auto it = std::lower_bound(points.begin(), points.end(), pt.x.value(),
                               [](const SharePoint& a, std::uint64_t x) {
                                   return a.x.value() < x;
                               });
    if (it != points.end() && it->x.value() == pt.x.value())
        raise(Errc::duplicate_x,
              "bundle already holds x = " + std::to_string(pt.x.value()));
    points.insert(it, pt);
}

SharePoint ShareBundle::remove(std::uint64_t x) {
    for (auto it = points.begin(); it != points.end(); ++it) {
        if (it->x.value() == x) {
            SharePoint out = *it;
            points.erase(it);
            return out;
        }
    }
    raise(Errc::unknown_x, "bundle holds no x = " + std::to_string(x));
}

const SharePoint* ShareBundle::find(std::uint64_t x) const noexcept {
    for (const SharePoint& pt : points)
        if (pt.x.value() == x)
            return &pt;
    return nullptr;
}

std::array<std::uint8_t, 32> commitment_digest(std::uint64_t epoch,
                                               std::uint64_t x,
                                               std::uint64_t y) {
    std::uint8_t buf[24];
    store_be64(buf, epoch);
    store_be64(buf + 8, x);
    store_be64(buf + 16, y);
    std::array<std::uint8_t, 32> md{};
    unsigned int len = 0;
    EVP_Digest(buf, sizeof buf, md.data(), &len, EVP_sha256(), nullptr);
    return md;
}

ShareCommitment make_commitment(std::uint64_t epoch, const SharePoint& pt) {
    return {pt.x.value(), epoch,
            commitment_digest(epoch, pt.x.value(), pt.y.value())};
}

bool verify_share(const SharePoint& pt, const ShareCommitment& c,
                  std::uint64_t current_epoch) {
    if (c.epoch != current_epoch)
        raise(Errc::epoch_mismatch,
              "commitment is for epoch " + std::to_string(c.epoch) +
                  ", current epoch is " + std::to_string(current_epoch));
    return c.x == pt.x.value() &&
           c.digest == commitment_digest(c.epoch, pt.x.value(), pt.y.value());
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0xf]);
    }
    return out;
}

FieldElement SecretPolynomial::evaluate(const FieldElement& x) const {
    // Horner, highest coefficient first.
    FieldElement acc = x.peer(0);
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

SecretPolynomial SecretPolynomial::random(const FieldElement& secret,
                                          int threshold, Rng& rng) {
    if (threshold < 1)
        raise(Errc::invalid_params, "threshold must be at least 1");
    SecretPolynomial poly;
    poly.coefficients.reserve(static_cast<std::size_t>(threshold));
    poly.coefficients.push_back(secret);
    for (int i = 1; i < threshold; ++i)
        poly.coefficients.push_back(secret.peer(rng.below(secret.modulus())));
    return poly;
}

namespace {

DealResult evaluate_deal(const SecretPolynomial& poly,
                         std::span<const FieldElement> xs,
                         std::uint64_t epoch) {
    DealResult out;
    out.shares.reserve(xs.size());
    out.commitments.reserve(xs.size());
    for (const FieldElement& x : xs) {
        SharePoint pt{x, poly.evaluate(x)};
        out.commitments.push_back(make_commitment(epoch, pt));
        out.shares.push_back(pt);
    }
    return out;
}

} // namespace

DealResult deal(const FieldElement& secret, int threshold,
                std::span<const FieldElement> xs, Rng& rng,
                std::uint64_t epoch) {
    validate_xs(xs, threshold);
    if (!xs.empty() && xs.front().modulus() != secret.modulus())
        raise(Errc::modulus_mismatch, "secret and evaluation points disagree");
    return evaluate_deal(SecretPolynomial::random(secret, threshold, rng), xs,
                         epoch);
}

DealResult deal_with_coefficients(std::span<const FieldElement> coefficients,
                                  std::span<const FieldElement> xs,
                                  std::uint64_t epoch) {
    if (coefficients.empty())
        raise(Errc::invalid_params, "no coefficients given");
    for (const FieldElement& c : coefficients)
        if (c.modulus() != coefficients.front().modulus())
            raise(Errc::modulus_mismatch, "coefficients from different fields");
    const int threshold = static_cast<int>(coefficients.size());
    validate_xs(xs, threshold);
    if (xs.front().modulus() != coefficients.front().modulus())
        raise(Errc::modulus_mismatch, "coefficients and evaluation points disagree");
    SecretPolynomial poly{{coefficients.begin(), coefficients.end()}};
    return evaluate_deal(poly, xs, epoch);
}

FieldElement reconstruct(std::span<const SharePoint> shares, int threshold,
                         bool cross_check) {
    if (threshold < 1)
        raise(Errc::invalid_params, "threshold must be at least 1");
    if (static_cast<int>(shares.size()) < threshold)
        raise(Errc::insufficient_shares,
              std::to_string(shares.size()) + " shares for threshold " +
                  std::to_string(threshold));
    validate_points(shares);

    const std::vector<SharePoint> pts = lowest_t(shares, threshold);
    // Secret = interpolant at 0, in the specialized product form
    // sum_i y_i * prod_{j != i} x_j / (x_j - x_i).
    FieldElement acc = pts.front().x.peer(0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        FieldElement coeff = pts[i].x.peer(1);
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (j == i)
                continue;
            coeff = coeff * (pts[j].x / (pts[j].x - pts[i].x));
        }
        acc = acc + coeff * pts[i].y;
    }

    if (cross_check) {
        std::vector<SharePoint> sorted(shares.begin(), shares.end());
        std::sort(sorted.begin(), sorted.end(),
                  [](const SharePoint& a, const SharePoint& b) {
                      return a.x.value() < b.x.value();
                  });
        for (std::size_t k = static_cast<std::size_t>(threshold);
             k < sorted.size(); ++k) {
            const FieldElement predicted =
                interpolate_at({pts.data(), pts.size()}, threshold, sorted[k].x);
            if (predicted != sorted[k].y)
                raise(Errc::corrupt_share_suspected,
                      "share at x = " + std::to_string(sorted[k].x.value()) +
                          " disagrees with the interpolant");
        }
    }
    return acc;
}

FieldElement interpolate_at(std::span<const SharePoint> shares, int threshold,
                            const FieldElement& x_target) {
    if (threshold < 1)
        raise(Errc::invalid_params, "threshold must be at least 1");
    if (static_cast<int>(shares.size()) < threshold)
        raise(Errc::insufficient_shares,
              std::to_string(shares.size()) + " shares for threshold " +
                  std::to_string(threshold));
    validate_points(shares);
    if (x_target.modulus() != shares.front().x.modulus())
        raise(Errc::modulus_mismatch, "target x from a different field");

    const std::vector<SharePoint> pts = lowest_t(shares, threshold);
    // General Lagrange form: sum_i y_i * prod_{j != i}
    // (x - x_j) / (x_i - x_j).
    FieldElement acc = x_target.peer(0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        FieldElement basis = x_target.peer(1);
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (j == i)
                continue;
            basis = basis * ((x_target - pts[j].x) / (pts[i].x - pts[j].x));
        }
        acc = acc + basis * pts[i].y;
    }
    return acc;
}

WeightedDealResult weighted_deal(const FieldElement& secret, int threshold,
                                 const std::map<PlayerId, int>& weights,
                                 int weight_cap, Rng& rng,
                                 std::uint64_t epoch) {
    if (weight_cap < 1 || weight_cap >= threshold)
        raise(Errc::invalid_params,
              "weight cap must satisfy 1 <= cap < threshold");
    std::uint64_t total = 0;
    for (const auto& [id, w] : weights) {
        if (w < 0 || w > weight_cap)
            raise(Errc::weight_exceeds_cap,
                  "weight " + std::to_string(w) + " for player " + id +
                      " outside [0, " + std::to_string(weight_cap) + "]");
        total += static_cast<std::uint64_t>(w);
    }
    if (total >= secret.modulus())
        raise(Errc::pool_exhausted,
              "total weight " + std::to_string(total) +
                  " does not fit in the x-pool [1, p)");

    std::vector<FieldElement> xs;
    xs.reserve(total);
    for (std::uint64_t x = 1; x <= total; ++x)
        xs.push_back(secret.peer(x));
    DealResult dealt = deal(secret, threshold, xs, rng, epoch);

    WeightedDealResult out;
    out.commitments = std::move(dealt.commitments);
    std::size_t next = 0;
    for (const auto& [id, w] : weights) {
        ShareBundle bundle{id, {}};
        for (int k = 0; k < w; ++k)
            bundle.points.push_back(dealt.shares[next++]);
        out.bundles.emplace(id, std::move(bundle));
    }
    return out;
}

} // namespace sss
