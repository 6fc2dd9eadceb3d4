#pragma once

#include <cstdint>
#include <ostream>

#include "sss/errors.hpp"

namespace sss {

// Exact for every 64-bit input (deterministic witness set, no probabilistic
// failure mode).
bool is_prime_u64(std::uint64_t n);

// A checked prime modulus. Construction is the validation: composite input
// throws composite_modulus, anything below 3 throws too_small. Once built it
// is immutable, so downstream code never re-checks primality.
class Modulus {
public:
    explicit Modulus(std::uint64_t p);

    std::uint64_t value() const noexcept { return p_; }

    friend bool operator==(const Modulus& a, const Modulus& b) noexcept {
        return a.p_ == b.p_;
    }
    friend bool operator!=(const Modulus& a, const Modulus& b) noexcept {
        return !(a == b);
    }

private:
    std::uint64_t p_;
};

// An element of Z_p in canonical form (0 <= value < p). Arithmetic is exact
// for p up to 2^64 - 59: products go through 128-bit intermediates, sums and
// differences through overflow-safe rearrangement. Mixing elements of
// different fields throws modulus_mismatch rather than silently coercing.
class FieldElement {
public:
    FieldElement(std::uint64_t value, const Modulus& m)
        : v_(value % m.value()), p_(m.value()) {}

    std::uint64_t value() const noexcept { return v_; }
    std::uint64_t modulus() const noexcept { return p_; }
    bool is_zero() const noexcept { return v_ == 0; }

    // Element of the same field, skipping re-validation of p.
    FieldElement peer(std::uint64_t value) const noexcept {
        return FieldElement(value % p_, p_, raw_tag{});
    }

    FieldElement operator-() const noexcept {
        return peer(v_ == 0 ? 0 : p_ - v_);
    }

    // Multiplicative inverse via extended Euclid; zero_inverse on 0.
    FieldElement inverse() const;

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b);

    // Elements of different fields are unequal, not an error.
    friend bool operator==(const FieldElement& a, const FieldElement& b) noexcept {
        return a.p_ == b.p_ && a.v_ == b.v_;
    }
    friend bool operator!=(const FieldElement& a, const FieldElement& b) noexcept {
        return !(a == b);
    }

    friend std::ostream& operator<<(std::ostream& os, const FieldElement& e) {
        return os << e.v_ << " (mod " << e.p_ << ")";
    }

private:
    struct raw_tag {};
    FieldElement(std::uint64_t v, std::uint64_t p, raw_tag) noexcept : v_(v), p_(p) {}

    std::uint64_t v_;
    std::uint64_t p_;
};

} // namespace sss
