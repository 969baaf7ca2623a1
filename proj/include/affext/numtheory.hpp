#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "affext/modarith.hpp"

namespace affext {

// Deterministic Miller-Rabin; the first twelve prime bases are a proven
// witness set for every 64-bit input.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::uint64_t kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t p : kBases) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : kBases) {
    std::uint64_t x = detail::powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

struct PrimePower {
  std::uint64_t prime;
  std::uint32_t multiplicity;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Complete factorization of a positive integer; primes strictly increasing.
struct Factorization {
  std::uint64_t n = 1;
  std::vector<PrimePower> factors;

  std::uint64_t reconstruct() const {
    std::uint64_t r = 1;
    for (const auto& f : factors)
      for (std::uint32_t i = 0; i < f.multiplicity; ++i) r *= f.prime;
    return r;
  }
  std::size_t omega() const { return factors.size(); }
  std::uint64_t divisor_count() const {
    std::uint64_t c = 1;
    for (const auto& f : factors) c *= f.multiplicity + 1;
    return c;
  }
};

namespace detail {

// Brent's variant of Pollard rho. n must be odd and composite.
inline std::uint64_t pollard_brent(std::uint64_t n) {
  for (std::uint64_t c = 1;; ++c) {
    auto f = [&](std::uint64_t x) { return (mulmod(x, x, n) + c) % n; };
    std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
    std::uint64_t r = 1;
    constexpr std::uint64_t m = 128;
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void collect_prime_factors(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  std::uint64_t f = pollard_brent(n);
  collect_prime_factors(f, out);
  collect_prime_factors(n / f, out);
}

}  // namespace detail

inline Factorization factorize(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be positive");
  Factorization result;
  result.n = n;
  std::vector<std::uint64_t> primes;
  // Trial division handles everything below 10^6 on its own.
  for (std::uint64_t p = 2; p < 1000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  detail::collect_prime_factors(n, primes);
  std::sort(primes.begin(), primes.end());
  for (std::uint64_t p : primes) {
    if (!result.factors.empty() && result.factors.back().prime == p)
      ++result.factors.back().multiplicity;
    else
      result.factors.push_back({p, 1});
  }
  return result;
}

/// Configuration for the typicality test: q is typical when
/// omega(q-1) <= max(floor_threshold, c_prime * ln ln q).
struct TypicalityRule {
  double c_prime = 2.0;
  std::uint32_t floor_threshold = 3;
};

/// A verified prime q together with the factorization of q-1.
class PrimeModulus {
 public:
  explicit PrimeModulus(std::uint64_t q) : q_(q) {
    if (q >= kMaxModulus)
      throw std::invalid_argument("modulus " + std::to_string(q) + " exceeds the 2^61 cap");
    if (!is_prime(q)) throw std::invalid_argument(std::to_string(q) + " is not prime");
    q_minus_1_ = factorize(q - 1 == 0 ? 1 : q - 1);
  }

  std::uint64_t value() const noexcept { return q_; }
  const Factorization& factors_q_minus_1() const noexcept { return q_minus_1_; }
  std::size_t omega() const noexcept { return q_minus_1_.omega(); }

 private:
  std::uint64_t q_;
  Factorization q_minus_1_;
};

inline double typicality_threshold(std::uint64_t q, const TypicalityRule& rule) {
  double lnln = q > 2 ? std::log(std::log(static_cast<double>(q))) : 0.0;
  return std::max(static_cast<double>(rule.floor_threshold), rule.c_prime * lnln);
}

inline bool is_typical(const PrimeModulus& q, const TypicalityRule& rule = {}) {
  return static_cast<double>(q.omega()) <= typicality_threshold(q.value(), rule);
}

/// The `count` smallest primes coprime to `modulus_minus_1`, ascending.
inline std::vector<std::uint64_t> first_primes_coprime(std::uint64_t modulus_minus_1,
                                                       std::size_t count) {
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for (std::uint64_t p = 2; out.size() < count; ++p) {
    if (is_prime(p) && detail::gcd(p, modulus_minus_1) == 1) out.push_back(p);
  }
  return out;
}

/// All divisors of the factored integer, strictly descending.
inline std::vector<std::uint64_t> divisors(const Factorization& f) {
  std::vector<std::uint64_t> out{1};
  for (const auto& pp : f.factors) {
    const std::size_t prev = out.size();
    std::uint64_t power = 1;
    for (std::uint32_t e = 1; e <= pp.multiplicity; ++e) {
      power *= pp.prime;
      for (std::size_t i = 0; i < prev; ++i) out.push_back(out[i] * power);
    }
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

struct PracharAverage {
  std::uint64_t limit = 0;
  std::uint64_t sum = 0;         // sum of omega(q-1) over primes q <= limit
  std::uint64_t prime_count = 0;
  double normalized = 0.0;       // sum / (limit * ln ln limit / ln limit)
};

/// Tallies omega(q-1) over all primes q <= limit with a smallest-prime-factor
/// sieve; normalized against limit * ln ln limit / ln limit.
inline PracharAverage prachar_average(std::uint64_t limit) {
  if (limit < 10) throw std::invalid_argument("prachar_average: limit must be >= 10");
  std::vector<std::uint32_t> spf(limit + 1, 0);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf[i] != 0) continue;
    for (std::uint64_t j = i; j <= limit; j += i)
      if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
  }
  auto omega = [&](std::uint64_t v) {
    std::uint64_t w = 0;
    while (v > 1) {
      std::uint32_t p = spf[v];
      ++w;
      while (v % p == 0) v /= p;
    }
    return w;
  };
  PracharAverage r;
  r.limit = limit;
  for (std::uint64_t q = 2; q <= limit; ++q) {
    if (spf[q] != q) continue;
    ++r.prime_count;
    r.sum += omega(q - 1);
  }
  const double x = static_cast<double>(limit);
  r.normalized = static_cast<double>(r.sum) / (x * std::log(std::log(x)) / std::log(x));
  return r;
}

}  // namespace affext
