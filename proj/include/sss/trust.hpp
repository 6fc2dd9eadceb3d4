#pragma once

#include <cstdint>
#include <ostream>
#include <span>

#include "sss/errors.hpp"

namespace sss {

// Shape parameters for the piecewise-linear incentive functions. The
// constructor rejects any combination that breaks piece ordering or lets an
// update escape [-1, 1] (that last one hinges on kappa <= epsilon).
struct TrustParams {
    double alpha;   // lower edge of the good class
    double beta;    // upper edge of the bad class
    double epsilon; // width of the taper bands at the scale ends
    double eta;     // increment at the floor / decrement at the ceiling
    double theta;   // flat increment across the middle band
    double kappa;   // peak increment, reached next to the taper bands

    TrustParams(double alpha, double beta, double epsilon, double eta,
                double theta, double kappa);

    static TrustParams defaults() {
        return TrustParams(0.3, -0.3, 0.1, 0.01, 0.05, 0.09);
    }
};

// One player's trust value plus how many updates produced it. Fresh players
// start at exactly 0.
struct TrustState {
    double value = 0.0;
    std::int64_t period = 0;

    TrustState() = default;
    TrustState(double value, std::int64_t period);

    static TrustState initial() { return TrustState(); }
};

enum class PlayerClass { bad, fresh, good };

constexpr const char* to_string(PlayerClass c) {
    switch (c) {
    case PlayerClass::bad:   return "B";
    case PlayerClass::fresh: return "N";
    case PlayerClass::good:  return "G";
    }
    return "?";
}

inline std::ostream& operator<<(std::ostream& os, PlayerClass c) {
    return os << to_string(c);
}

struct LinePoint {
    double x;
    double y;
};

// Value at x of the line through a and b. Evaluation at either anchor
// reproduces its y exactly (the interpolation factor is exactly 0 or 1),
// which is what makes the piecewise functions below hit their boundary
// values without rounding slop. degenerate_line when a.x == b.x.
double line_through(LinePoint a, LinePoint b, double x);

// Cooperation increment, >= 0 on [-1, 1], out_of_range outside. Rises from
// eta at -1 to theta at beta, stays flat through [beta, alpha], rises to
// kappa at 1 - epsilon, then tapers to 0 at 1 so rewards cannot push the
// value past the ceiling.
double mu(double x, const TrustParams& p);

// Defection decrement, mirrored: 0 at -1 (a dead account cannot fall
// further), kappa at epsilon - 1, theta across [beta, alpha], easing to eta
// at 1.
double mu_prime(double x, const TrustParams& p);

// B below beta, G above alpha, N between.
PlayerClass classify(double value, const TrustParams& p);

// One broadcast-style update: value +/- cost_weight * mu/mu_prime. The
// clamp to [-1, 1] is a safety net; with cost_weight in [0, 1] and valid
// params it never engages.
TrustState update_individual(const TrustState& s, bool cooperated,
                             const TrustParams& p, double cost_weight = 1.0);

// Mean of pairwise opinions, each in [-1, 1]. empty_list / out_of_range.
double reputation_from_pairwise(std::span<const double> opinions);

} // namespace sss
