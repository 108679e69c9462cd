#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "dzk/field.hpp"

using namespace dzk;

TEST_CASE("field operations at q=7") {
    PrimeModulus q(7);
    CHECK(fe_inv(Fe(3, q)) == Fe(5, q));       // 3*5 = 15 = 1 mod 7
    CHECK(Fe(4, q) + Fe(0, q) == Fe(4, q));
    CHECK(fe_pow(Fe(2, q), 6) == Fe(1, q));    // Fermat
    CHECK(Fe(3, q) - Fe(5, q) == Fe(5, q));
    CHECK(-Fe(2, q) == Fe(5, q));
}

TEST_CASE("modulus mismatch and zero inverse are rejected") {
    PrimeModulus a(7), b(11);
    CHECK_THROWS_AS(Fe(1, a) + Fe(1, b), std::invalid_argument);
    CHECK_THROWS_AS(Fe(2, a) * Fe(2, b), std::invalid_argument);
    CHECK_THROWS_AS(fe_inv(Fe(0, a)), std::invalid_argument);
}

TEST_CASE("modulus validation") {
    CHECK_THROWS_AS(PrimeModulus(4), std::invalid_argument);
    CHECK_THROWS_AS(PrimeModulus(2), std::invalid_argument);
    CHECK_THROWS_AS(PrimeModulus(1), std::invalid_argument);
    CHECK_THROWS_AS(PrimeModulus(1ull << 62), std::invalid_argument);
    CHECK_NOTHROW(PrimeModulus(3));
    CHECK_NOTHROW(PrimeModulus((1ull << 61) - 1));  // Mersenne prime
}

TEST_CASE("miller-rabin agrees with a sieve up to 20000") {
    std::vector<bool> sieve(20000, true);
    sieve[0] = sieve[1] = false;
    for (std::size_t i = 2; i < sieve.size(); ++i)
        if (sieve[i])
            for (std::size_t j = 2 * i; j < sieve.size(); j += i) sieve[j] = false;
    for (std::size_t i = 0; i < sieve.size(); ++i) CHECK(is_prime_u64(i) == sieve[i]);
}

TEST_CASE("field axioms, exhaustive for q=13") {
    PrimeModulus q(13);
    for (uint64_t a = 0; a < 13; ++a)
        for (uint64_t b = 0; b < 13; ++b)
            for (uint64_t c = 0; c < 13; ++c) {
                Fe x(a, q), y(b, q), z(c, q);
                CHECK((x + y) + z == x + (y + z));
                CHECK((x * y) * z == x * (y * z));
                CHECK(x * (y + z) == x * y + x * z);
            }
    for (uint64_t a = 1; a < 13; ++a) CHECK(fe_inv(Fe(a, q)) * Fe(a, q) == Fe(1, q));
}

TEST_CASE("field axioms on random triples near the 2^61 cap") {
    PrimeModulus q((1ull << 61) - 1);
    Rng rng(99);
    for (int i = 0; i < 200; ++i) {
        Fe x = fe_uniform(rng, q), y = fe_uniform(rng, q), z = fe_uniform(rng, q);
        CHECK((x + y) + z == x + (y + z));
        CHECK((x * y) * z == x * (y * z));
        CHECK(x * (y + z) == x * y + x * z);
        if (!x.is_zero()) CHECK(fe_inv(x) * x == Fe(1, q));
    }
}

TEST_CASE("sample_prime lands in [R, 2R] and is deterministic") {
    // Sieve-derived fact: [100, 200] holds exactly 21 primes.
    std::set<uint64_t> primes_100_200;
    for (uint64_t p = 100; p <= 200; ++p)
        if (is_prime_u64(p)) primes_100_200.insert(p);
    CHECK(primes_100_200.size() == 21);

    std::set<uint64_t> seen;
    for (uint64_t s = 0; s < 50; ++s) {
        PrimeModulus p = sample_prime(100, s);
        CHECK(p.q >= 100);
        CHECK(p.q <= 200);
        CHECK(primes_100_200.count(p.q) == 1);
        CHECK(sample_prime(100, s).q == p.q);
        seen.insert(p.q);
    }
    CHECK(seen.size() > 5);  // different seeds spread over the range

    for (uint64_t s = 0; s < 10; ++s) {
        uint64_t p = sample_prime(3, s).q;
        CHECK((p == 3 || p == 5));
    }
}

TEST_CASE("next_prime_above") {
    CHECK(next_prime_above(243).q == 251);
    CHECK(next_prime_above(2).q == 3);
    CHECK(next_prime_above(10007).q == 10009);
}
