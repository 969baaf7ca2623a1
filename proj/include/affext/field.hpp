#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "affext/modarith.hpp"
#include "affext/numtheory.hpp"

namespace affext {

using FieldVector = std::vector<Residue>;

/// Arithmetic in F_q for a prime q < 2^61 on canonical representatives in
/// [0, q). Elements are plain residues; the modulus lives here.
///
/// For q < 2^32 reduction uses a Barrett constant, otherwise a 128-bit
/// remainder. pow(0, 0) is defined as 1.
class PrimeField {
 public:
  explicit PrimeField(std::uint64_t q) : q_(q) {
    if (q >= kMaxModulus)
      throw std::invalid_argument("modulus " + std::to_string(q) + " exceeds the 2^61 cap");
    if (!is_prime(q)) throw std::invalid_argument(std::to_string(q) + " is not prime");
    small_ = q < (std::uint64_t{1} << 32);
    if (small_) barrett_ = static_cast<std::uint64_t>((u128{1} << 64) / q);
  }
  explicit PrimeField(const PrimeModulus& q) : PrimeField(q.value()) {}

  std::uint64_t modulus() const noexcept { return q_; }

  bool canonical(Residue a) const noexcept { return a < q_; }

  Residue reduce(std::uint64_t a) const noexcept { return a % q_; }

  Residue add(Residue a, Residue b) const noexcept {
    Residue s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  Residue sub(Residue a, Residue b) const noexcept { return a >= b ? a - b : a + q_ - b; }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : q_ - a; }

  Residue mul(Residue a, Residue b) const noexcept {
    if (small_) return barrett(a * b);
    return static_cast<Residue>(static_cast<u128>(a) * b % q_);
  }

  // Reduces any 64-bit value when q < 2^32; callers above that use reduce().
  Residue barrett(std::uint64_t x) const noexcept {
    std::uint64_t quot = static_cast<std::uint64_t>((static_cast<u128>(x) * barrett_) >> 64);
    std::uint64_t r = x - quot * q_;
    return r >= q_ ? r - q_ : r;
  }

  Residue pow(Residue a, std::uint64_t e) const noexcept {
    Residue result = 1;
    while (e != 0) {
      if (e & 1) result = mul(result, a);
      a = mul(a, a);
      e >>= 1;
    }
    return result;
  }

  Residue inv(Residue a) const {
    if (a == 0) throw std::domain_error("inverse of zero in F_q");
    return detail::invmod(a, q_);
  }

  /// Coordinate-wise exponentiation (x_1^{d_1}, ..., x_n^{d_n}).
  FieldVector pow_vector(std::span<const Residue> x, std::span<const std::uint64_t> d) const {
    if (x.size() != d.size())
      throw std::invalid_argument("pow_vector: length mismatch (" + std::to_string(x.size()) +
                                  " vs " + std::to_string(d.size()) + ")");
    FieldVector out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = pow(x[j], d[j]);
    return out;
  }

  Residue dot(std::span<const Residue> a, std::span<const Residue> b) const noexcept {
    Residue acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc = add(acc, mul(a[i], b[i]));
    return acc;
  }

  void require_canonical(std::span<const Residue> v, const char* what) const {
    for (Residue r : v)
      if (r >= q_)
        throw std::invalid_argument(std::string(what) + ": residue " + std::to_string(r) +
                                    " is not below q=" + std::to_string(q_));
  }

 private:
  std::uint64_t q_;
  std::uint64_t barrett_ = 0;
  bool small_ = false;
};

}  // namespace affext
