#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "affext/errors.hpp"
#include "affext/field.hpp"
#include "affext/random.hpp"
#include "affext/spec_io.hpp"

namespace affext {

/// A k-dimensional affine subspace offset + span(basis) of F_q^n, held in
/// canonical form: basis in reduced row-echelon form with pivot columns
/// j_1 < ... < j_k, and the offset zero on every pivot column. Two
/// descriptions of the same set always produce equal objects.
class AffineSubspace {
 public:
  std::size_t ambient_dim() const noexcept { return n_; }
  std::size_t dim() const noexcept { return basis_.size(); }
  std::uint64_t modulus() const noexcept { return q_; }
  const FieldVector& offset() const noexcept { return offset_; }
  const std::vector<FieldVector>& basis() const noexcept { return basis_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  friend bool operator==(const AffineSubspace&, const AffineSubspace&) = default;

 private:
  friend AffineSubspace canonicalize(const PrimeField&, FieldVector, std::vector<FieldVector>);
  friend class SubspaceEnumerator;

  std::uint64_t q_ = 0;
  std::size_t n_ = 0;
  FieldVector offset_;
  std::vector<FieldVector> basis_;
  std::vector<std::size_t> pivots_;
};

/// Row-reduces the spanning set, drops dependent vectors, and reduces the
/// offset modulo the span.
inline AffineSubspace canonicalize(const PrimeField& field, FieldVector offset,
                                   std::vector<FieldVector> spanning) {
  const std::size_t n = offset.size();
  field.require_canonical(offset, "subspace offset");
  for (const auto& v : spanning) {
    if (v.size() != n) throw std::invalid_argument("canonicalize: spanning vector length mismatch");
    field.require_canonical(v, "spanning vector");
  }
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < spanning.size(); ++c) {
    std::size_t p = r;
    while (p < spanning.size() && spanning[p][c] == 0) ++p;
    if (p == spanning.size()) continue;
    std::swap(spanning[p], spanning[r]);
    const Residue inv = field.inv(spanning[r][c]);
    for (auto& x : spanning[r]) x = field.mul(x, inv);
    for (std::size_t i = 0; i < spanning.size(); ++i) {
      if (i == r || spanning[i][c] == 0) continue;
      const Residue f = spanning[i][c];
      for (std::size_t j = 0; j < n; ++j)
        spanning[i][j] = field.sub(spanning[i][j], field.mul(f, spanning[r][j]));
    }
    pivots.push_back(c);
    ++r;
  }
  spanning.resize(r);
  for (std::size_t i = 0; i < r; ++i) {
    const Residue f = offset[pivots[i]];
    if (f == 0) continue;
    for (std::size_t j = 0; j < n; ++j) offset[j] = field.sub(offset[j], field.mul(f, spanning[i][j]));
  }
  AffineSubspace v;
  v.q_ = field.modulus();
  v.n_ = n;
  v.offset_ = std::move(offset);
  v.basis_ = std::move(spanning);
  v.pivots_ = std::move(pivots);
  return v;
}

/// One coordinate of the parametrization: constant + sum_i coeffs[i] * t_i.
struct AffineForm {
  Residue constant = 0;
  FieldVector coeffs;

  // Largest i (1-based) with a nonzero coefficient on t_i; 0 if constant.
  std::size_t last_variable() const noexcept {
    for (std::size_t i = coeffs.size(); i > 0; --i)
      if (coeffs[i - 1] != 0) return i;
    return 0;
  }
};

/// Pivot-structured affine map l: F_q^k -> F_q^n whose image is V, with
/// l_{j_i}(t) = t_i, constants before j_1, and coordinates between j_i and
/// j_{i+1} depending on t_1..t_i only.
struct Parametrization {
  std::uint64_t q = 0;
  std::vector<std::size_t> pivots;  // 0-based j_1 < ... < j_k
  std::vector<AffineForm> maps;     // one per ambient coordinate

  std::size_t dim() const noexcept { return pivots.size(); }

  void apply(const PrimeField& field, std::span<const Residue> t, std::span<Residue> out) const {
    for (std::size_t j = 0; j < maps.size(); ++j) {
      Residue acc = maps[j].constant;
      for (std::size_t i = 0; i < t.size(); ++i) acc = field.add(acc, field.mul(maps[j].coeffs[i], t[i]));
      out[j] = acc;
    }
  }

  /// Number of pivots strictly before coordinate j.
  std::size_t pivots_before(std::size_t j) const noexcept {
    return static_cast<std::size_t>(std::lower_bound(pivots.begin(), pivots.end(), j) - pivots.begin());
  }

  /// Whether the three structural properties hold.
  bool well_formed() const {
    const std::size_t k = pivots.size();
    for (std::size_t i = 0; i < k; ++i) {
      const auto& f = maps[pivots[i]];
      if (f.constant != 0) return false;
      for (std::size_t c = 0; c < k; ++c)
        if (f.coeffs[c] != (c == i ? 1u : 0u)) return false;
    }
    for (std::size_t j = 0; j < maps.size(); ++j) {
      if (std::binary_search(pivots.begin(), pivots.end(), j)) continue;
      if (maps[j].last_variable() > pivots_before(j)) return false;
    }
    return true;
  }
};

/// Reads the greedy pivot parametrization off the canonical form: the
/// first non-constant coordinate is the first pivot, and so on.
inline Parametrization parametrize(const AffineSubspace& v) {
  Parametrization p;
  p.q = v.modulus();
  p.pivots = v.pivots();
  const std::size_t k = v.dim();
  p.maps.resize(v.ambient_dim());
  for (std::size_t j = 0; j < v.ambient_dim(); ++j) {
    p.maps[j].constant = v.offset()[j];
    p.maps[j].coeffs.resize(k);
    for (std::size_t i = 0; i < k; ++i) p.maps[j].coeffs[i] = v.basis()[i][j];
  }
  return p;
}

/// Visits every point of V once, in lexicographic order of (t_1, ..., t_k)
/// with t_k varying fastest. The callback receives a span valid for the
/// duration of the call.
template <typename Visitor>
void enumerate_points(const AffineSubspace& v, const PrimeField& field, Visitor&& visit,
                      const Budget& budget = {}) {
  const std::size_t k = v.dim(), n = v.ambient_dim();
  const std::uint64_t q = field.modulus();
  require_budget("enumerate_points", saturating_pow(q, k), budget.points);
  FieldVector x = v.offset();
  std::vector<Residue> digits(k, 0);
  while (true) {
    visit(std::span<const Residue>(x));
    // Odometer step. Whether a digit increments or wraps from q-1 to 0, the
    // point moves by exactly one copy of that basis vector.
    std::size_t i = k;
    while (i > 0) {
      --i;
      const auto& b = v.basis()[i];
      for (std::size_t j = 0; j < n; ++j) x[j] = field.add(x[j], b[j]);
      if (++digits[i] < q) break;
      digits[i] = 0;
      if (i == 0) return;
    }
    if (k == 0) return;
  }
}

inline std::vector<FieldVector> collect_points(const AffineSubspace& v, const PrimeField& field,
                                               const Budget& budget = {}) {
  std::vector<FieldVector> pts;
  enumerate_points(v, field, [&](std::span<const Residue> x) { pts.emplace_back(x.begin(), x.end()); },
                   budget);
  return pts;
}

/// Number of k-dimensional linear subspaces of F_q^n, saturating at UINT64_MAX.
inline std::uint64_t gaussian_binomial(std::uint64_t n, std::uint64_t k, std::uint64_t q) {
  if (k > n) return 0;
  u128 num = 1, den = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    const std::uint64_t a = saturating_pow(q, n - i), b = saturating_pow(q, i + 1);
    if (a == UINT64_MAX || b == UINT64_MAX) return UINT64_MAX;
    num *= a - 1;
    den *= b - 1;
    u128 g = num, h = den;  // gcd keeps both factors small
    while (h != 0) {
      const u128 t = g % h;
      g = h;
      h = t;
    }
    num /= g;
    den /= g;
    if (num > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(num / den);
}

/// Random-access enumeration of every k-dimensional affine subspace of
/// F_q^n in canonical form. Index order: pivot patterns lexicographically,
/// then the free RREF entries, then the offset entries on non-pivot
/// columns, each as base-q digits with the last digit least significant.
class SubspaceEnumerator {
 public:
  SubspaceEnumerator(std::size_t n, std::size_t k, const PrimeField& field, const Budget& budget = {})
      : n_(n), k_(k), q_(field.modulus()) {
    if (k > n) throw std::invalid_argument("enumerate_subspaces: need k <= n");
    std::vector<std::size_t> piv(k);
    for (std::size_t i = 0; i < k; ++i) piv[i] = i;
    std::uint64_t total = 0;
    while (true) {
      Pattern pat{piv, 0, 0};
      std::size_t free = n - k;  // offset entries
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t c = piv[i] + 1; c < n; ++c)
          if (!std::binary_search(piv.begin(), piv.end(), c)) ++free;
      pat.free_digits = free;
      const std::uint64_t cnt = saturating_pow(q_, free);
      pat.first = total;
      total = (cnt == UINT64_MAX || total > UINT64_MAX - cnt) ? UINT64_MAX : total + cnt;
      patterns_.push_back(std::move(pat));
      if (total == UINT64_MAX) break;
      std::size_t i = k;
      while (i > 0 && piv[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++piv[i - 1];
      for (std::size_t j = i; j < k; ++j) piv[j] = piv[j - 1] + 1;
    }
    count_ = total;
    require_budget("enumerate_subspaces", count_, budget.subspaces);
  }

  std::uint64_t size() const noexcept { return count_; }

  AffineSubspace at(std::uint64_t index) const {
    if (index >= count_) throw std::out_of_range("subspace index out of range");
    auto it = std::upper_bound(patterns_.begin(), patterns_.end(), index,
                               [](std::uint64_t v, const Pattern& p) { return v < p.first; });
    const Pattern& pat = *(it - 1);
    std::uint64_t rem = index - pat.first;
    std::vector<Residue> digits(pat.free_digits);
    for (std::size_t i = pat.free_digits; i > 0; --i) {
      digits[i - 1] = rem % q_;
      rem /= q_;
    }
    AffineSubspace v;
    v.q_ = q_;
    v.n_ = n_;
    v.pivots_ = pat.pivots;
    v.basis_.assign(k_, FieldVector(n_, 0));
    v.offset_.assign(n_, 0);
    std::size_t d = 0;
    for (std::size_t i = 0; i < k_; ++i) {
      v.basis_[i][pat.pivots[i]] = 1;
      for (std::size_t c = pat.pivots[i] + 1; c < n_; ++c)
        if (!std::binary_search(pat.pivots.begin(), pat.pivots.end(), c)) v.basis_[i][c] = digits[d++];
    }
    for (std::size_t c = 0; c < n_; ++c)
      if (!std::binary_search(pat.pivots.begin(), pat.pivots.end(), c)) v.offset_[c] = digits[d++];
    return v;
  }

 private:
  struct Pattern {
    std::vector<std::size_t> pivots;
    std::uint64_t first;
    std::size_t free_digits;
  };

  std::size_t n_, k_;
  std::uint64_t q_;
  std::uint64_t count_ = 0;
  std::vector<Pattern> patterns_;
};

/// Deterministic given the seed: random offset and k random vectors,
/// redrawn until they have rank k, then canonicalized.
inline AffineSubspace random_subspace(std::size_t n, std::size_t k, const PrimeField& field,
                                      std::uint64_t seed) {
  if (k > n) throw std::invalid_argument("random_subspace: need k <= n");
  Rng rng(seed);
  const std::uint64_t q = field.modulus();
  auto draw = [&] {
    FieldVector v(n);
    for (auto& x : v) x = uniform_below(rng, q);
    return v;
  };
  FieldVector offset = draw();
  while (true) {
    std::vector<FieldVector> span(k);
    for (auto& v : span) v = draw();
    AffineSubspace v = canonicalize(field, offset, span);
    if (v.dim() == k) return v;
  }
}

// Text format: header "n,k,q", then the offset line, then k basis lines.
// Files may hold several blocks; blank lines and '#' comments are ignored.
inline void write_subspace(std::ostream& os, const AffineSubspace& v) {
  os << v.ambient_dim() << ',' << v.dim() << ',' << v.modulus() << '\n' << text::join(v.offset()) << '\n';
  for (const auto& b : v.basis()) os << text::join(b) << '\n';
}

inline std::vector<AffineSubspace> read_subspaces(std::istream& is) {
  std::vector<std::pair<std::string, std::size_t>> lines;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    auto t = text::trim(raw);
    if (t.empty() || t.front() == '#') continue;
    lines.emplace_back(std::string(t), lineno);
  }
  std::vector<AffineSubspace> out;
  std::size_t pos = 0;
  while (pos < lines.size()) {
    const auto header = text::parse_list(lines[pos].first, lines[pos].second);
    if (header.size() != 3) throw ParseError("subspace header must be 'n,k,q'", lines[pos].second);
    const std::size_t n = header[0], k = header[1];
    if (k > n) throw ParseError("subspace header has k > n", lines[pos].second);
    const PrimeField field(header[2]);
    if (pos + 1 + k >= lines.size())
      throw ParseError("truncated subspace block", lines[pos].second);
    auto row = [&](std::size_t idx) {
      auto v = text::parse_list(lines[idx].first, lines[idx].second);
      if (v.size() != n) throw ParseError("expected " + std::to_string(n) + " residues", lines[idx].second);
      for (auto r : v)
        if (r >= field.modulus()) throw ParseError("residue not below q", lines[idx].second);
      return v;
    };
    FieldVector offset = row(pos + 1);
    std::vector<FieldVector> span;
    for (std::size_t i = 0; i < k; ++i) span.push_back(row(pos + 2 + i));
    auto v = canonicalize(field, std::move(offset), std::move(span));
    if (v.dim() != k) throw ParseError("basis vectors are linearly dependent", lines[pos].second);
    out.push_back(std::move(v));
    pos += 2 + k;
  }
  return out;
}

}  // namespace affext
