#include "sss/trust.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sss {

namespace {

void require_in_range(double x, const char* what) {
    if (!(x >= -1.0 && x <= 1.0))
        raise(Errc::out_of_range,
              std::string(what) + " = " + std::to_string(x) +
                  " outside [-1, 1]");
}

} // namespace

TrustParams::TrustParams(double alpha, double beta, double epsilon, double eta,
                         double theta, double kappa)
    : alpha(alpha), beta(beta), epsilon(epsilon), eta(eta), theta(theta),
      kappa(kappa) {
    const bool finite = std::isfinite(alpha) && std::isfinite(beta) &&
                        std::isfinite(epsilon) && std::isfinite(eta) &&
                        std::isfinite(theta) && std::isfinite(kappa);
    if (!finite)
        raise(Errc::invalid_params, "trust parameters must be finite");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        raise(Errc::invalid_params, "epsilon must lie in (0, 1)");
    if (!(beta > -1.0 && beta < alpha && alpha < 1.0 - epsilon))
        raise(Errc::invalid_params,
              "class edges must satisfy -1 < beta < alpha < 1 - epsilon");
    if (!(beta > epsilon - 1.0))
        raise(Errc::invalid_params,
              "beta must exceed epsilon - 1 or the penalty ramp collapses");
    if (!(eta > 0.0 && eta < theta && theta < kappa))
        raise(Errc::invalid_params,
              "increments must satisfy 0 < eta < theta < kappa");
    if (!(kappa <= epsilon))
        raise(Errc::invalid_params,
              "kappa must not exceed epsilon or updates can escape [-1, 1]");
}

TrustState::TrustState(double value, std::int64_t period)
    : value(value), period(period) {
    require_in_range(value, "trust value");
    if (period < 0)
        raise(Errc::out_of_range, "period must be nonnegative");
}

double line_through(LinePoint a, LinePoint b, double x) {
    if (a.x == b.x)
        raise(Errc::degenerate_line,
              "both anchors at x = " + std::to_string(a.x));
    return a.y + (b.y - a.y) * ((x - a.x) / (b.x - a.x));
}

double mu(double x, const TrustParams& p) {
    require_in_range(x, "trust value");
    if (x < p.beta)
        return line_through({-1.0, p.eta}, {p.beta, p.theta}, x);
    if (x <= p.alpha)
        return p.theta;
    if (x <= 1.0 - p.epsilon)
        return line_through({p.alpha, p.theta}, {1.0 - p.epsilon, p.kappa}, x);
    return line_through({1.0 - p.epsilon, p.kappa}, {1.0, 0.0}, x);
}

double mu_prime(double x, const TrustParams& p) {
    require_in_range(x, "trust value");
    if (x < p.epsilon - 1.0)
        return line_through({-1.0, 0.0}, {p.epsilon - 1.0, p.kappa}, x);
    if (x < p.beta)
        return line_through({p.epsilon - 1.0, p.kappa}, {p.beta, p.theta}, x);
    if (x <= p.alpha)
        return p.theta;
    return line_through({p.alpha, p.theta}, {1.0, p.eta}, x);
}

PlayerClass classify(double value, const TrustParams& p) {
    require_in_range(value, "trust value");
    if (value < p.beta)
        return PlayerClass::bad;
    if (value <= p.alpha)
        return PlayerClass::fresh;
    return PlayerClass::good;
}

TrustState update_individual(const TrustState& s, bool cooperated,
                             const TrustParams& p, double cost_weight) {
    if (!(std::isfinite(cost_weight) && cost_weight >= 0.0))
        raise(Errc::invalid_params, "cost weight must be finite and >= 0");
    const double raw = cooperated
                           ? s.value + cost_weight * mu(s.value, p)
                           : s.value - cost_weight * mu_prime(s.value, p);
    return TrustState(std::clamp(raw, -1.0, 1.0), s.period + 1);
}

double reputation_from_pairwise(std::span<const double> opinions) {
    if (opinions.empty())
        raise(Errc::empty_list, "no pairwise opinions to average");
    double sum = 0.0;
    for (double v : opinions) {
        require_in_range(v, "pairwise opinion");
        sum += v;
    }
    return sum / static_cast<double>(opinions.size());
}

} // namespace sss
