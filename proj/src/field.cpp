#include "dzk/field.hpp"

namespace dzk {
namespace {

uint64_t powmod(uint64_t base, uint64_t exp, uint64_t q) {
    uint64_t acc = 1;
    base %= q;
    while (exp) {
        if (exp & 1) acc = mulmod(acc, base, q);
        base = mulmod(base, base, q);
        exp >>= 1;
    }
    return acc;
}

}  // namespace

// Deterministic Miller-Rabin; this witness set is exact for all n < 3.3e24,
// which covers the full u64 range.
bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

PrimeModulus::PrimeModulus(uint64_t q_) : q(q_) {
    if (q < 3) throw std::invalid_argument("modulus must be >= 3");
    if (q >= kMaxModulus) throw std::invalid_argument("modulus must be < 2^61");
    if (!is_prime_u64(q)) throw std::invalid_argument("modulus is not prime");
}

PrimeModulus sample_prime(uint64_t R, uint64_t seed) {
    if (R < 3) throw std::invalid_argument("sample_prime requires R >= 3");
    if (2 * R >= kMaxModulus) throw std::invalid_argument("prime range exceeds 2^61");
    Rng rng(seed);
    // Bertrand guarantees a prime in [R, 2R]; rejection terminates quickly.
    for (;;) {
        uint64_t c = R + rng.below(R + 1);
        if (is_prime_u64(c)) return PrimeModulus(c);
    }
}

PrimeModulus next_prime_above(uint64_t n) {
    uint64_t c = n + 1;
    if (c < 3) c = 3;
    while (!is_prime_u64(c)) ++c;
    return PrimeModulus(c);
}

Fe fe_pow(Fe base, uint64_t exp) {
    return Fe(powmod(base.v, exp, base.q), base.q);
}

Fe fe_inv(Fe a) {
    if (a.v == 0) throw std::invalid_argument("inverse of zero");
    // Fermat: a^(q-2).
    return fe_pow(a, a.q - 2);
}

}  // namespace dzk
