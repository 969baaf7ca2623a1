#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "affext/errors.hpp"
#include "affext/field.hpp"
#include "affext/numtheory.hpp"

namespace affext {

/// Strictly decreasing exponents d_1 > ... > d_n > 1, all dividing the
/// master modulus D (a product of primes coprime to q-1).
struct ExponentVector {
  std::vector<std::uint64_t> d;
  std::uint64_t D_master = 1;
  std::uint64_t lcm = 1;

  std::size_t size() const noexcept { return d.size(); }
};

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what) {
  if (a != 0 && b > UINT64_MAX / a) throw std::overflow_error(std::string(what) + " overflows 64 bits");
  return a * b;
}

inline std::uint64_t lcm_of(std::span<const std::uint64_t> values) {
  std::uint64_t l = 1;
  for (std::uint64_t v : values) l = checked_mul(l / gcd(l, v), v, "lcm");
  return l;
}

inline std::size_t ceil_log2(std::uint64_t x) {
  return x <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(x - 1));
}

}  // namespace detail

/// D is the product of the first ceil(log2(n+1)) primes coprime to q-1 and
/// d is its n largest divisors. Since D has at least n+1 divisors, 1 is
/// never among them, and d_1 = D.
inline ExponentVector gen_exponents(std::size_t n, const PrimeModulus& q) {
  if (n == 0) throw std::invalid_argument("gen_exponents: n must be at least 1");
  const std::size_t prime_count = detail::ceil_log2(static_cast<std::uint64_t>(n) + 1);
  const auto primes = first_primes_coprime(q.value() - 1, prime_count);

  Factorization master;
  master.n = 1;
  for (std::uint64_t p : primes) {
    master.n = detail::checked_mul(master.n, p, "exponent master modulus");
    master.factors.push_back({p, 1});
  }

  ExponentVector ev;
  ev.D_master = master.n;
  auto all = divisors(master);
  ev.d.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n));
  ev.lcm = detail::lcm_of(ev.d);
  return ev;
}

/// Checks the exponent premises: strictly decreasing, all > 1, coprime to
/// q-1, dividing D_master, and lcm consistent. Returns a description of the
/// first violation, or nullopt.
inline std::optional<std::string> exponent_violation(const ExponentVector& ev,
                                                     std::uint64_t q_minus_1) {
  if (ev.d.empty()) return "empty exponent vector";
  for (std::size_t i = 0; i < ev.d.size(); ++i) {
    const auto di = ev.d[i];
    if (di <= 1) return "d_" + std::to_string(i + 1) + " is not > 1";
    if (i > 0 && di >= ev.d[i - 1]) return "d is not strictly decreasing at " + std::to_string(i + 1);
    if (detail::gcd(di, q_minus_1) != 1) return "d_" + std::to_string(i + 1) + " shares a factor with q-1";
    if (ev.D_master % di != 0) return "d_" + std::to_string(i + 1) + " does not divide D";
  }
  if (ev.lcm != detail::lcm_of(ev.d)) return "lcm field does not match the exponents";
  if (ev.D_master % ev.lcm != 0) return "lcm does not divide D";
  return std::nullopt;
}

/// m x n Vandermonde matrix a_ij = r_j^(i-1) over distinct seed points.
class CoefficientMatrix {
 public:
  CoefficientMatrix(std::size_t m, const PrimeField& field, std::vector<Residue> seed_points)
      : m_(m), n_(seed_points.size()), seeds_(std::move(seed_points)) {
    field.require_canonical(seeds_, "seed point");
    if (std::set<Residue>(seeds_.begin(), seeds_.end()).size() != seeds_.size())
      throw std::invalid_argument("seed points must be pairwise distinct");
    entries_.resize(m_ * n_);
    for (std::size_t j = 0; j < n_; ++j) {
      Residue power = 1;
      for (std::size_t i = 0; i < m_; ++i) {
        entries_[i * n_ + j] = power;
        power = field.mul(power, seeds_[j]);
      }
    }
  }

  // Arbitrary entries, used to exercise the column-independence oracle.
  static CoefficientMatrix from_entries(std::size_t m, std::size_t n, std::vector<Residue> entries) {
    if (entries.size() != m * n) throw std::invalid_argument("matrix entry count mismatch");
    CoefficientMatrix a;
    a.m_ = m;
    a.n_ = n;
    a.entries_ = std::move(entries);
    return a;
  }

  std::size_t rows() const noexcept { return m_; }
  std::size_t cols() const noexcept { return n_; }
  const std::vector<Residue>& seed_points() const noexcept { return seeds_; }
  std::span<const Residue> entries() const noexcept { return entries_; }
  Residue at(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  std::span<const Residue> row(std::size_t i) const {
    return std::span<const Residue>(entries_).subspan(i * n_, n_);
  }

  /// b = c^T A.
  FieldVector left_multiply(std::span<const Residue> c, const PrimeField& field) const {
    if (c.size() != m_) throw std::invalid_argument("left_multiply: c must have length m");
    FieldVector b(n_, 0);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < n_; ++j) b[j] = field.add(b[j], field.mul(c[i], at(i, j)));
    return b;
  }

 private:
  CoefficientMatrix() = default;

  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::vector<Residue> seeds_;
  std::vector<Residue> entries_;
};

inline std::vector<Residue> default_seed_points(std::size_t n) {
  std::vector<Residue> r(n);
  for (std::size_t j = 0; j < n; ++j) r[j] = j + 1;
  return r;
}

inline CoefficientMatrix build_matrix(std::size_t m, std::size_t n, const PrimeField& field,
                                      std::optional<std::vector<Residue>> seed_points = {}) {
  if (m > n) throw std::invalid_argument("build_matrix: m must not exceed n");
  if (n >= field.modulus()) throw std::invalid_argument("build_matrix: n must be below q");
  auto seeds = seed_points ? std::move(*seed_points) : default_seed_points(n);
  if (seeds.size() != n) throw std::invalid_argument("build_matrix: need exactly n seed points");
  return CoefficientMatrix(m, field, std::move(seeds));
}

namespace detail {

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  u128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(r);
}

// Rank of a small dense matrix over F_q by Gaussian elimination (destroys input).
inline std::size_t rank(std::vector<Residue>& mat, std::size_t rows, std::size_t cols,
                        const PrimeField& field) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && mat[pivot * cols + c] == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(mat[pivot * cols + j], mat[r * cols + j]);
    const Residue inv = field.inv(mat[r * cols + c]);
    for (std::size_t j = c; j < cols; ++j) mat[r * cols + j] = field.mul(mat[r * cols + j], inv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || mat[i * cols + c] == 0) continue;
      const Residue f = mat[i * cols + c];
      for (std::size_t j = c; j < cols; ++j)
        mat[i * cols + j] = field.sub(mat[i * cols + j], field.mul(f, mat[r * cols + j]));
    }
    ++r;
  }
  return r;
}

}  // namespace detail

namespace detail {

// Montgomery arithmetic mod an odd q < 2^31, R = 2^32. The bound keeps
// t + (t * -q^{-1} mod R) * q below 2^64. Used only inside the
// batch evaluator; values leave it in canonical form.
struct Montgomery32 {
  std::uint32_t q = 0;
  std::uint32_t neg_qinv = 0;  // -q^{-1} mod 2^32
  std::uint32_t r2 = 0;        // R^2 mod q

  explicit Montgomery32(std::uint64_t modulus) : q(static_cast<std::uint32_t>(modulus)) {
    std::uint32_t inv = 1;
    for (int i = 0; i < 5; ++i) inv *= 2u - q * inv;
    neg_qinv = 0u - inv;
    r2 = static_cast<std::uint32_t>((u128{1} << 64) % modulus);
  }
};

inline std::uint32_t mont_mul(std::uint32_t a, std::uint32_t b, std::uint32_t q, std::uint32_t nqi) {
  const std::uint64_t t = static_cast<std::uint64_t>(a) * b;
  const std::uint32_t mq = static_cast<std::uint32_t>(t) * nqi;
  const std::uint64_t u = (t + static_cast<std::uint64_t>(mq) * q) >> 32;
  return static_cast<std::uint32_t>(u >= q ? u - q : u);
}

constexpr std::size_t kPowBlock = 32;

// x[v] <- x[v]^e for a block of kPowBlock canonical residues, in lockstep so
// the independent chains vectorize.
#if defined(__GNUC__) && defined(__x86_64__) && !defined(__clang__)
__attribute__((target_clones("avx2", "default")))
#endif
inline void mont_pow_block(std::uint32_t* x, std::uint64_t e, Montgomery32 mg) {
  const std::uint32_t q = mg.q, nqi = mg.neg_qinv;
  std::uint32_t base[kPowBlock], acc[kPowBlock];
  const std::uint32_t one = mont_mul(1, mg.r2, q, nqi);
  for (std::size_t v = 0; v < kPowBlock; ++v) {
    base[v] = mont_mul(x[v], mg.r2, q, nqi);
    acc[v] = one;
  }
  for (; e != 0; e >>= 1) {
    if (e & 1)
      for (std::size_t v = 0; v < kPowBlock; ++v) acc[v] = mont_mul(acc[v], base[v], q, nqi);
    if (e > 1)
      for (std::size_t v = 0; v < kPowBlock; ++v) base[v] = mont_mul(base[v], base[v], q, nqi);
  }
  for (std::size_t v = 0; v < kPowBlock; ++v) x[v] = mont_mul(acc[v], 1, q, nqi);
}

}  // namespace detail

/// True iff every m x m minor of A is nonsingular. Enumerates all C(n, m)
/// column subsets; refuses to run past the minor budget.
inline bool verify_mds(const CoefficientMatrix& a, const PrimeField& field, const Budget& budget = {}) {
  const std::size_t m = a.rows(), n = a.cols();
  if (m == 0) return true;
  const std::uint64_t subsets = detail::binomial(n, m);
  const std::uint64_t cube = static_cast<std::uint64_t>(m) * m * m;
  const std::uint64_t cost = subsets > UINT64_MAX / cube ? UINT64_MAX : subsets * cube;
  require_budget("verify_mds", cost, budget.minor_ops);

  std::vector<std::size_t> cols(m);
  for (std::size_t i = 0; i < m; ++i) cols[i] = i;
  std::vector<Residue> minor(m * m);
  while (true) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t c = 0; c < m; ++c) minor[i * m + c] = a.at(i, cols[c]);
    if (detail::rank(minor, m, m, field) != m) return false;
    // next combination
    std::size_t i = m;
    while (i > 0 && cols[i - 1] == n - m + i - 1) --i;
    if (i == 0) break;
    ++cols[i - 1];
    for (std::size_t j = i; j < m; ++j) cols[j] = cols[j - 1] + 1;
  }
  return true;
}

/// A complete extractor instance F_{d,A}: F_q^n -> F_q^m.
struct ExtractorSpec {
  PrimeModulus q;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t m = 0;
  double beta = 0.0;
  double epsilon = 0.0;
  ExponentVector d;
  CoefficientMatrix A;
  bool lcm_bound_satisfied = false;

  PrimeField field() const { return PrimeField(q); }
};

inline double epsilon_for(double beta) { return 0.25 - beta / 2.0; }

/// LCM(d) <= q^epsilon, compared in the log domain.
inline bool lcm_within_bound(std::uint64_t lcm, std::uint64_t q, double epsilon) {
  return std::log(static_cast<long double>(lcm)) <=
         static_cast<long double>(epsilon) * std::log(static_cast<long double>(q));
}

namespace detail {

inline ExtractorSpec assemble(const PrimeModulus& q, std::size_t n, std::size_t k, std::size_t m,
                              double beta, std::optional<std::vector<Residue>> seeds) {
  if (k < 1 || k > n) throw std::invalid_argument("need 1 <= k <= n");
  if (n >= q.value()) throw std::invalid_argument("need n < q");
  if (m == 0) throw std::invalid_argument("output length m = floor(beta*k) is 0");
  if (m > k) throw std::invalid_argument("need m <= k");
  PrimeField field(q);
  ExponentVector d = gen_exponents(n, q);
  CoefficientMatrix a = build_matrix(m, n, field, std::move(seeds));
  const double eps = epsilon_for(beta);
  const bool ok = lcm_within_bound(d.lcm, q.value(), eps);
  return ExtractorSpec{q, n, k, m, beta, eps, std::move(d), std::move(a), ok};
}

}  // namespace detail

struct PlanResult {
  ExtractorSpec spec;
  bool typical = false;
  std::vector<std::string> warnings;
};

/// Assembles exponents and Vandermonde matrix with m = floor(beta*k) and
/// epsilon = 1/4 - beta/2. Atypical q and a failed LCM bound are warnings.
inline PlanResult plan_parameters(std::size_t n, std::size_t k, double beta, const PrimeModulus& q,
                                  const TypicalityRule& rule = {},
                                  std::optional<std::vector<Residue>> seeds = {}) {
  if (!(beta > 0.0 && beta < 0.5)) throw std::invalid_argument("beta must lie in (0, 1/2)");
  if (k > n) throw std::invalid_argument("need k <= n");
  const auto m = static_cast<std::size_t>(std::floor(beta * static_cast<double>(k)));
  PlanResult r{detail::assemble(q, n, k, m, beta, std::move(seeds)), is_typical(q, rule), {}};
  if (!r.typical)
    r.warnings.push_back("q=" + std::to_string(q.value()) + " is not typical: omega(q-1)=" +
                         std::to_string(q.omega()));
  if (!r.spec.lcm_bound_satisfied)
    r.warnings.push_back("LCM bound fails: lcm=" + std::to_string(r.spec.d.lcm) +
                         " exceeds q^epsilon");
  return r;
}

/// Verification-lab instance with an explicit output length m. The rate
/// beta is recorded as m/k, which may fall outside (0, 1/2); the extractor
/// map itself is unchanged.
inline ExtractorSpec make_lab_spec(const PrimeModulus& q, std::size_t n, std::size_t k, std::size_t m,
                                   std::optional<std::vector<Residue>> seeds = {}) {
  if (k == 0) throw std::invalid_argument("need k >= 1");
  return detail::assemble(q, n, k, m, static_cast<double>(m) / static_cast<double>(k),
                          std::move(seeds));
}

/// Evaluates F_{d,A}(x) = A * x^d. Small fields use per-coordinate power
/// tables; otherwise square-and-multiply. Immutable and shareable.
class Evaluator {
 public:
  static constexpr std::uint64_t kTableEntries = std::uint64_t{1} << 22;
  static constexpr std::size_t kSmallN = 16;

  explicit Evaluator(const ExtractorSpec& spec)
      : field_(spec.q), n_(spec.n), m_(spec.m), d_(spec.d.d),
        a_(spec.A.entries().begin(), spec.A.entries().end()) {
    const std::uint64_t q = field_.modulus();
    two64_mod_q_ = static_cast<std::uint64_t>((u128{1} << 64) % q);
    if (q % 2 == 1 && q < (std::uint64_t{1} << 31)) mont_.emplace(q);
    narrow_ = q < (std::uint64_t{1} << 32) &&
              static_cast<u128>(q - 1) * (q - 1) * n_ <= UINT64_MAX;
    if (q <= (1u << 16) && q * n_ <= kTableEntries) {
      tables_.resize(q * n_);
      for (std::size_t j = 0; j < n_; ++j)
        for (Residue x = 0; x < q; ++x) tables_[j * q + x] = field_.pow(x, d_[j]);
    }
  }

  const PrimeField& field() const noexcept { return field_; }
  std::size_t input_length() const noexcept { return n_; }
  std::size_t output_length() const noexcept { return m_; }
  bool tabulated() const noexcept { return !tables_.empty(); }

  Residue power(std::size_t j, Residue x) const noexcept {
    return tables_.empty() ? field_.pow(x, d_[j]) : tables_[j * field_.modulus() + x];
  }

  void evaluate(std::span<const Residue> x, std::span<Residue> out) const {
    check_lengths(x.size(), out.size());
    if (n_ <= kSmallN) {
      Residue powers[kSmallN];
      for (std::size_t j = 0; j < n_; ++j) powers[j] = power(j, x[j]);
      apply_matrix(std::span<const Residue>(powers, n_), out);
      return;
    }
    thread_local std::vector<Residue> powers;
    powers.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) powers[j] = power(j, x[j]);
    apply_matrix(powers, out);
  }

  FieldVector evaluate(std::span<const Residue> x) const {
    FieldVector out(m_);
    evaluate(x, out);
    return out;
  }

  /// Row-major batch: xs holds count*n residues, out receives count*m.
  void evaluate_batch(std::span<const Residue> xs, std::span<Residue> out) const {
    if (xs.size() % n_ != 0) throw std::invalid_argument("evaluate_batch: ragged input");
    const std::size_t count = xs.size() / n_;
    if (out.size() != count * m_) throw std::invalid_argument("evaluate_batch: output size mismatch");
    constexpr std::size_t kBlock = detail::kPowBlock;
    std::vector<Residue> powers(kBlock * n_);
    for (std::size_t start = 0; start < count; start += kBlock) {
      const std::size_t len = std::min(kBlock, count - start);
      const Residue* block = xs.data() + start * n_;
      for (std::size_t v = 0; v < len * n_; ++v)
        if (block[v] >= field_.modulus())
          throw std::invalid_argument("evaluate_batch: non-canonical residue");
      if (tabulated()) {
        for (std::size_t v = 0; v < len; ++v)
          for (std::size_t j = 0; j < n_; ++j) powers[v * n_ + j] = power(j, block[v * n_ + j]);
      } else {
        // One coordinate at a time across the block: the exponent is shared,
        // so the independent squaring chains interleave.
        for (std::size_t j = 0; j < n_; ++j) {
          if (mont_) {
            std::uint32_t lane[kBlock] = {};
            for (std::size_t v = 0; v < len; ++v) lane[v] = static_cast<std::uint32_t>(block[v * n_ + j]);
            detail::mont_pow_block(lane, d_[j], *mont_);
            for (std::size_t v = 0; v < len; ++v) powers[v * n_ + j] = lane[v];
            continue;
          }
          Residue base[kBlock], acc[kBlock];
          for (std::size_t v = 0; v < len; ++v) {
            base[v] = block[v * n_ + j];
            acc[v] = 1;
          }
          for (std::uint64_t e = d_[j]; e != 0; e >>= 1) {
            if (e & 1)
              for (std::size_t v = 0; v < len; ++v) acc[v] = field_.mul(acc[v], base[v]);
            if (e > 1)
              for (std::size_t v = 0; v < len; ++v) base[v] = field_.mul(base[v], base[v]);
          }
          for (std::size_t v = 0; v < len; ++v) powers[v * n_ + j] = acc[v];
        }
      }
      for (std::size_t v = 0; v < len; ++v)
        apply_matrix(std::span<const Residue>(powers).subspan(v * n_, n_),
                     out.subspan((start + v) * m_, m_));
    }
  }

  std::vector<FieldVector> evaluate_batch(std::span<const FieldVector> xs) const {
    std::vector<FieldVector> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(evaluate(x));
    return out;
  }

 private:
  void check_lengths(std::size_t in, std::size_t out) const {
    if (in != n_)
      throw std::invalid_argument("evaluate: expected " + std::to_string(n_) + " coordinates, got " +
                                  std::to_string(in));
    if (out != m_) throw std::invalid_argument("evaluate: output span must have length m");
  }

  void apply_matrix(std::span<const Residue> powers, std::span<Residue> out) const {
    const std::uint64_t q = field_.modulus();
    const bool small = q < (std::uint64_t{1} << 32);
    for (std::size_t i = 0; i < m_; ++i) {
      const Residue* row = a_.data() + i * n_;
      if (narrow_) {
        // The whole row sum fits in 64 bits.
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < n_; ++j) acc += row[j] * powers[j];
        out[i] = field_.barrett(acc);
        continue;
      }
      u128 acc = 0;
      if (small) {
        // Products stay below 2^64, so the wide sum needs no interim reduction.
        std::size_t j = 0;
        if (q < (std::uint64_t{1} << 31)) {
          // Below 2^31 four products fit in 64 bits.
          for (; j + 4 <= n_; j += 4)
            acc += row[j] * powers[j] + row[j + 1] * powers[j + 1] + row[j + 2] * powers[j + 2] +
                   row[j + 3] * powers[j + 3];
        }
        for (; j < n_; ++j) acc += row[j] * powers[j];
        const auto hi = static_cast<std::uint64_t>(acc >> 64);
        out[i] = field_.add(field_.barrett(static_cast<std::uint64_t>(acc)), field_.barrett(hi * two64_mod_q_));
      } else {
        for (std::size_t j = 0; j < n_; ++j) {
          acc += static_cast<u128>(row[j]) * powers[j];
          if ((j & 31) == 31) acc %= q;
        }
        out[i] = static_cast<Residue>(acc % q);
      }
    }
  }

  PrimeField field_;
  std::size_t n_, m_;
  std::vector<std::uint64_t> d_;
  std::vector<Residue> a_;
  std::vector<Residue> tables_;
  std::uint64_t two64_mod_q_ = 0;
  std::optional<detail::Montgomery32> mont_;
  bool narrow_ = false;
};

inline FieldVector evaluate(const ExtractorSpec& spec, std::span<const Residue> x) {
  if (x.size() != spec.n)
    throw std::invalid_argument("evaluate: expected " + std::to_string(spec.n) + " coordinates");
  const PrimeField field = spec.field();
  field.require_canonical(x, "evaluate");
  const FieldVector powers = field.pow_vector(x, spec.d.d);
  FieldVector out(spec.m, 0);
  for (std::size_t i = 0; i < spec.m; ++i) out[i] = field.dot(spec.A.row(i), powers);
  return out;
}

inline std::vector<FieldVector> evaluate_batch(const ExtractorSpec& spec,
                                               std::span<const FieldVector> xs) {
  std::vector<FieldVector> out;
  if (xs.empty()) return out;
  const Evaluator eval(spec);
  for (const auto& x : xs) {
    eval.field().require_canonical(x, "evaluate_batch");
    out.push_back(eval.evaluate(x));
  }
  return out;
}

}  // namespace affext
