#include "affext/numtheory.hpp"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "affext/random.hpp"
#include "gtest/gtest.h"

namespace affext {
namespace {

bool trial_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

std::vector<bool> sieve(std::uint64_t limit) {
  std::vector<bool> prime(limit + 1, true);
  prime[0] = false;
  if (limit >= 1) prime[1] = false;
  for (std::uint64_t i = 2; i * i <= limit; ++i)
    if (prime[i])
      for (std::uint64_t j = i * i; j <= limit; j += i) prime[j] = false;
  return prime;
}

std::uint64_t omega_by_trial(std::uint64_t v) {
  std::uint64_t w = 0;
  for (std::uint64_t p = 2; p * p <= v; ++p) {
    if (v % p != 0) continue;
    ++w;
    while (v % p == 0) v /= p;
  }
  return w + (v > 1);
}

TEST(IsPrime, Examples) {
  EXPECT_TRUE(is_prime(13));
  EXPECT_FALSE(is_prime(1));
  EXPECT_FALSE(is_prime(0));
  EXPECT_TRUE(is_prime(2));
  EXPECT_FALSE(trial_prime(3215031751ull));
  EXPECT_FALSE(is_prime(3215031751ull));
}

TEST(IsPrime, AgreesWithSieveBelowOneMillion) {
  const auto prime = sieve(1'000'000);
  for (std::uint64_t n = 0; n <= 1'000'000; ++n) ASSERT_EQ(is_prime(n), prime[n]) << n;
}

TEST(IsPrime, AgreesWithTrialDivisionOnLargeSamples) {
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    const std::uint64_t n = (std::uint64_t{1} << 32) + uniform_below(rng, std::uint64_t{1} << 34);
    ASSERT_EQ(is_prime(n), trial_prime(n)) << n;
  }
  // Strong pseudoprimes to several small bases.
  for (std::uint64_t n : {2047ull, 1373653ull, 25326001ull, 3215031751ull, 2152302898747ull,
                          3474749660383ull, 341550071728321ull})
    EXPECT_FALSE(is_prime(n)) << n;
  EXPECT_TRUE(is_prime((std::uint64_t{1} << 61) - 1));
  EXPECT_TRUE(is_prime(1000000000000000003ull));
}

TEST(Factorize, Examples) {
  EXPECT_EQ(factorize(12).factors, (std::vector<PrimePower>{{2, 2}, {3, 1}}));
  EXPECT_TRUE(factorize(1).factors.empty());
  EXPECT_EQ(factorize(30).factors, (std::vector<PrimePower>{{2, 1}, {3, 1}, {5, 1}}));
  EXPECT_THROW(factorize(0), std::invalid_argument);
}

TEST(Factorize, ReconstructsEveryIntegerUpToOneMillion) {
  const auto prime = sieve(1'000'000);
  for (std::uint64_t n = 1; n <= 1'000'000; ++n) {
    const auto f = factorize(n);
    ASSERT_EQ(f.reconstruct(), n);
    for (std::size_t i = 0; i < f.factors.size(); ++i) {
      ASSERT_TRUE(prime[f.factors[i].prime]) << n;
      if (i > 0) {
        ASSERT_LT(f.factors[i - 1].prime, f.factors[i].prime);
      }
    }
  }
}

TEST(Factorize, LargeSemiprimesAndPowers) {
  const std::uint64_t p = 1000000007ull, q = 998244353ull;
  EXPECT_EQ(factorize(p * q).factors, (std::vector<PrimePower>{{q, 1}, {p, 1}}));
  EXPECT_EQ(factorize(p * p).factors, (std::vector<PrimePower>{{p, 2}}));
  const std::uint64_t big = (std::uint64_t{1} << 61) - 2;
  EXPECT_EQ(factorize(big).reconstruct(), big);
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t n = 1 + uniform_below(rng, std::uint64_t{1} << 61);
    const auto f = factorize(n);
    ASSERT_EQ(f.reconstruct(), n);
    for (const auto& pp : f.factors) ASSERT_TRUE(is_prime(pp.prime));
  }
}

TEST(PrimeModulus, CarriesFactorizationOfQMinusOne) {
  const PrimeModulus q(13);
  EXPECT_EQ(q.value(), 13u);
  EXPECT_EQ(q.factors_q_minus_1().reconstruct(), 12u);
  EXPECT_EQ(q.omega(), 2u);
  EXPECT_THROW(PrimeModulus(91), std::invalid_argument);
  EXPECT_EQ(PrimeModulus((std::uint64_t{1} << 61) - 1).omega(), 12u);
  EXPECT_THROW(PrimeModulus(2305843009213693967ull), std::invalid_argument);
}

TEST(Typicality, Examples) {
  EXPECT_TRUE(is_typical(PrimeModulus(13), {2.0, 3}));
  EXPECT_EQ(2311u, 2u * 3 * 5 * 7 * 11 + 1);
  EXPECT_FALSE(is_typical(PrimeModulus(2311), {0.1, 3}));
  // omega(q-1) = 1 for Fermat primes.
  for (std::uint64_t q : {5ull, 17ull, 257ull, 65537ull}) {
    EXPECT_EQ(PrimeModulus(q).omega(), 1u);
    EXPECT_TRUE(is_typical(PrimeModulus(q), {0.0, 3}));
  }
}

TEST(FirstPrimesCoprime, Examples) {
  EXPECT_EQ(first_primes_coprime(12, 2), (std::vector<std::uint64_t>{5, 7}));
  EXPECT_EQ(first_primes_coprime(30, 3), (std::vector<std::uint64_t>{7, 11, 13}));
  EXPECT_EQ(first_primes_coprime(1, 2), (std::vector<std::uint64_t>{2, 3}));
}

TEST(FirstPrimesCoprime, SkipsNoCoprimePrime) {
  const auto prime = sieve(2000);
  for (std::uint64_t m = 1; m <= 100000; m += 97) {
    const auto got = first_primes_coprime(m, 7);
    std::vector<std::uint64_t> want;
    for (std::uint64_t p = 2; want.size() < 7; ++p)
      if (prime[p] && std::gcd(p, m) == 1) want.push_back(p);
    ASSERT_EQ(got, want) << m;
  }
}

TEST(Divisors, Examples) {
  EXPECT_EQ(divisors(factorize(35)), (std::vector<std::uint64_t>{35, 7, 5, 1}));
  EXPECT_EQ(divisors(factorize(1)), (std::vector<std::uint64_t>{1}));
  EXPECT_EQ(divisors(factorize(77)), (std::vector<std::uint64_t>{77, 11, 7, 1}));
}

TEST(Divisors, CountAndOrderMatchBruteForce) {
  for (std::uint64_t n = 1; n <= 5000; ++n) {
    const auto f = factorize(n);
    const auto ds = divisors(f);
    ASSERT_EQ(ds.size(), f.divisor_count());
    std::vector<std::uint64_t> want;
    for (std::uint64_t d = n; d >= 1; --d)
      if (n % d == 0) want.push_back(d);
    ASSERT_EQ(ds, want) << n;
  }
}

TEST(Prachar, SmallLimits) {
  const auto ten = prachar_average(10);
  EXPECT_EQ(ten.sum, 4u);
  EXPECT_EQ(ten.prime_count, 4u);

  std::uint64_t sum = 0, count = 0;
  for (std::uint64_t q = 2; q <= 100; ++q)
    if (trial_prime(q)) {
      ++count;
      sum += omega_by_trial(q - 1);
    }
  const auto hundred = prachar_average(100);
  EXPECT_EQ(hundred.sum, sum);
  EXPECT_EQ(hundred.prime_count, count);
  EXPECT_DOUBLE_EQ(hundred.normalized, static_cast<double>(sum) / (100.0 * std::log(std::log(100.0)) / std::log(100.0)));
  EXPECT_THROW(prachar_average(9), std::invalid_argument);
}

TEST(Prachar, OneMillionWithinSanityBand) {
  const auto r = prachar_average(1'000'000);
  EXPECT_EQ(r.prime_count, 78498u);
  EXPECT_GE(r.normalized, 0.5);
  EXPECT_LE(r.normalized, 2.0);
}

}  // namespace
}  // namespace affext
