#include "sss/field.hpp"

#include <initializer_list>
#include <string>

namespace sss {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<__uint128_t>(a) * b % p);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    base %= p;
    while (exp) {
        if (exp & 1)
            r = mulmod(r, base, p);
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    return r;
}

// Witnesses {2..37} make Miller-Rabin exact below 3.3 * 10^24, which covers
// the whole 64-bit range.
constexpr std::initializer_list<std::uint64_t> kWitnesses = {
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

} // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2)
        return false;
    for (std::uint64_t q : kWitnesses) {
        if (n == q)
            return true;
        if (n % q == 0)
            return false;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : kWitnesses) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool witness_found = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness_found = false;
                break;
            }
        }
        if (witness_found)
            return false;
    }
    return true;
}

Modulus::Modulus(std::uint64_t p) : p_(p) {
    if (p < 3)
        raise(Errc::too_small, "modulus must be at least 3, got " + std::to_string(p));
    if (!is_prime_u64(p))
        raise(Errc::composite_modulus, std::to_string(p) + " is not prime");
}

namespace {

void require_same_field(const FieldElement& a, const FieldElement& b) {
    if (a.modulus() != b.modulus())
        raise(Errc::modulus_mismatch,
              "operands live in Z_" + std::to_string(a.modulus()) + " and Z_" +
                  std::to_string(b.modulus()));
}

} // namespace

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    require_same_field(a, b);
    const std::uint64_t p = a.modulus();
    // a + b may not fit in 64 bits when p is near 2^64; compare against the
    // gap to p instead of forming the sum.
    const std::uint64_t gap = p - b.value();
    return a.peer(a.value() >= gap ? a.value() - gap : a.value() + b.value());
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    require_same_field(a, b);
    const std::uint64_t p = a.modulus();
    return a.peer(a.value() >= b.value() ? a.value() - b.value()
                                         : a.value() + (p - b.value()));
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    require_same_field(a, b);
    return a.peer(mulmod(a.value(), b.value(), a.modulus()));
}

FieldElement operator/(const FieldElement& a, const FieldElement& b) {
    require_same_field(a, b);
    return a * b.inverse();
}

FieldElement FieldElement::inverse() const {
    if (v_ == 0)
        raise(Errc::zero_inverse, "0 has no inverse in Z_" + std::to_string(p_));
    // Extended Euclid on (v, p). Bezout coefficients can exceed int64 range
    // for p near 2^64, hence the 128-bit accumulators.
    __int128 r0 = v_, r1 = p_;
    __int128 s0 = 1, s1 = 0;
    while (r1 != 0) {
        const __int128 q = r0 / r1;
        const __int128 r2 = r0 - q * r1;
        r0 = r1;
        r1 = r2;
        const __int128 s2 = s0 - q * s1;
        s0 = s1;
        s1 = s2;
    }
    // r0 == gcd(v, p) == 1 since p is prime and v != 0.
    if (s0 < 0)
        s0 += p_;
    return peer(static_cast<std::uint64_t>(s0));
}

} // namespace sss
