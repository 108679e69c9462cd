#pragma once

#include <cstdint>
#include <stdexcept>

#include "dzk/rng.hpp"

namespace dzk {

// Prime-field elements carry their modulus; mixing moduli throws.
// q is restricted to [3, 2^61) so products fit in 128-bit intermediates.
inline constexpr uint64_t kMaxModulus = 1ull << 61;

bool is_prime_u64(uint64_t n);

struct PrimeModulus {
    uint64_t q = 0;

    PrimeModulus() = default;
    explicit PrimeModulus(uint64_t q_);

    bool operator==(const PrimeModulus&) const = default;
};

// A prime drawn uniformly from [R, 2R], deterministic for a fixed seed.
PrimeModulus sample_prime(uint64_t R, uint64_t seed);

// Smallest prime strictly greater than n.
PrimeModulus next_prime_above(uint64_t n);

struct Fe {
    uint64_t v = 0;
    uint64_t q = 0;

    Fe() = default;
    Fe(uint64_t value, PrimeModulus m) : v(value % m.q), q(m.q) {}
    Fe(uint64_t value, uint64_t modulus) : v(value % modulus), q(modulus) {}

    PrimeModulus modulus() const {
        PrimeModulus m;
        m.q = q;
        return m;
    }

    bool is_zero() const { return v == 0; }

    bool operator==(const Fe&) const = default;
};

inline void check_same_field(const Fe& a, const Fe& b) {
    if (a.q != b.q) throw std::invalid_argument("field elements from different moduli");
}

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t q) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % q);
}

inline Fe operator+(Fe a, Fe b) {
    check_same_field(a, b);
    uint64_t s = a.v + b.v;
    if (s >= a.q) s -= a.q;
    return Fe(s, a.q);
}

inline Fe operator-(Fe a, Fe b) {
    check_same_field(a, b);
    uint64_t s = a.v >= b.v ? a.v - b.v : a.v + a.q - b.v;
    return Fe(s, a.q);
}

inline Fe operator*(Fe a, Fe b) {
    check_same_field(a, b);
    return Fe(mulmod(a.v, b.v, a.q), a.q);
}

inline Fe operator-(Fe a) { return Fe(a.v == 0 ? 0 : a.q - a.v, a.q); }

inline Fe& operator+=(Fe& a, Fe b) { a = a + b; return a; }
inline Fe& operator-=(Fe& a, Fe b) { a = a - b; return a; }
inline Fe& operator*=(Fe& a, Fe b) { a = a * b; return a; }

Fe fe_pow(Fe base, uint64_t exp);
Fe fe_inv(Fe a);
inline Fe operator/(Fe a, Fe b) { return a * fe_inv(b); }

inline Fe fe_uniform(Rng& rng, PrimeModulus m) { return Fe(rng.below(m.q), m); }

}  // namespace dzk
