#pragma once

#include <cstdint>

namespace affext {

using Residue = std::uint64_t;
using u128 = unsigned __int128;

// Largest admissible modulus is strictly below 2^61 so that sums of a few
// products still fit comfortably in 128 bits.
inline constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 61;

namespace detail {

constexpr std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % n);
}

constexpr std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t n) {
  std::uint64_t result = 1 % n;
  base %= n;
  while (e != 0) {
    if (e & 1) result = mulmod(result, base, n);
    base = mulmod(base, base, n);
    e >>= 1;
  }
  return result;
}

constexpr std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Inverse of a modulo n when gcd(a, n) = 1; returns 0 otherwise.
constexpr std::uint64_t invmod(std::uint64_t a, std::uint64_t n) {
  if (n == 1) return 0;
  __int128 t = 0, new_t = 1;
  __int128 r = n, new_r = a % n;
  while (new_r != 0) {
    __int128 quot = r / new_r;
    __int128 tmp = t - quot * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - quot * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) return 0;
  if (t < 0) t += n;
  return static_cast<std::uint64_t>(t);
}

}  // namespace detail
}  // namespace affext
