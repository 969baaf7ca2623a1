#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "affext/errors.hpp"
#include "affext/extractor.hpp"
#include "affext/subspace.hpp"

namespace affext {

/// Absolute tolerance for every floating-point comparison against a bound.
inline constexpr double kTolerance = 1e-6;

/// Nonnegative exact fraction, always reduced.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Rational make(u128 num, u128 den) {
    if (den == 0) throw std::domain_error("zero denominator");
    u128 a = num, b = den;
    while (b != 0) {
      u128 t = a % b;
      a = b;
      b = t;
    }
    num /= a;
    den /= a;
    if (num > UINT64_MAX || den > UINT64_MAX) throw std::overflow_error("rational exceeds 64 bits");
    return {static_cast<std::uint64_t>(num), static_cast<std::uint64_t>(den)};
  }

  double to_double() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const { return std::to_string(num) + "/" + std::to_string(den); }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<u128>(a.num) * b.den < static_cast<u128>(b.num) * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
};

/// Encodes z in F_q^m as z_1 q^(m-1) + ... + z_m, so integer order is
/// lexicographic order.
inline std::uint64_t encode_vector(std::span<const Residue> z, std::uint64_t q) {
  std::uint64_t code = 0;
  for (Residue r : z) code = code * q + r;
  return code;
}

inline FieldVector decode_vector(std::uint64_t code, std::size_t m, std::uint64_t q) {
  FieldVector z(m);
  for (std::size_t i = m; i > 0; --i) {
    z[i - 1] = code % q;
    code /= q;
  }
  return z;
}

/// Exact tallies of an F_q^m-valued random variable.
struct OutputDistribution {
  std::uint64_t q = 0;
  std::size_t m = 0;
  std::vector<std::uint64_t> counts;  // indexed by encode_vector
  std::uint64_t total = 0;
};

inline OutputDistribution output_distribution(const Evaluator& eval, const AffineSubspace& v,
                                              const Budget& budget = {}) {
  const std::uint64_t q = eval.field().modulus();
  const std::size_t m = eval.output_length();
  const std::uint64_t outcomes = saturating_pow(q, m);
  require_budget("output_distribution outcomes", outcomes, budget.points);
  OutputDistribution dist{q, m, std::vector<std::uint64_t>(outcomes, 0), 0};
  FieldVector z(m);
  enumerate_points(
      v, eval.field(),
      [&](std::span<const Residue> x) {
        eval.evaluate(x, z);
        ++dist.counts[encode_vector(z, q)];
        ++dist.total;
      },
      budget);
  return dist;
}

inline OutputDistribution output_distribution(const ExtractorSpec& spec, const AffineSubspace& v,
                                              const Budget& budget = {}) {
  return output_distribution(Evaluator(spec), v, budget);
}

/// Half the L1 distance to uniform over all q^m outcomes, exactly:
/// sum_z |count_z * q^m - total| / (2 * total * q^m).
inline Rational statistical_distance(const OutputDistribution& dist) {
  if (dist.total == 0) throw std::invalid_argument("statistical_distance: empty distribution");
  const u128 outcomes = dist.counts.size();
  u128 num = 0;
  for (std::uint64_t c : dist.counts) {
    const u128 scaled = static_cast<u128>(c) * outcomes;
    num += scaled > dist.total ? scaled - dist.total : dist.total - scaled;
  }
  return Rational::make(num, 2 * static_cast<u128>(dist.total) * outcomes);
}

/// residue_counts[j] = number of samples with c.z = j (mod q).
struct CharacterSum {
  std::uint64_t q = 0;
  std::vector<std::uint64_t> residue_counts;
  std::uint64_t total = 0;

  friend bool operator==(const CharacterSum&, const CharacterSum&) = default;
};

/// cos/sin of 2*pi*j/q, j in [0, q).
class RootsOfUnity {
 public:
  explicit RootsOfUnity(std::uint64_t q) : re_(q), im_(q) {
    for (std::uint64_t j = 0; j < q; ++j) {
      const double angle = 2.0 * std::numbers::pi * (static_cast<double>(j) / static_cast<double>(q));
      re_[j] = std::cos(angle);
      im_[j] = std::sin(angle);
    }
  }

  /// |sum_j counts[j] * w^j| / total.
  double magnitude(std::span<const std::uint64_t> counts, std::uint64_t total) const {
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < counts.size(); ++j) {
      if (counts[j] == 0) continue;
      const double c = static_cast<double>(counts[j]);
      re += c * re_[j];
      im += c * im_[j];
    }
    return std::hypot(re, im) / static_cast<double>(total);
  }

 private:
  std::vector<double> re_, im_;
};

/// |E[w^(c.z)]| from exact residue counts; double precision only at the end.
inline double character_magnitude(const CharacterSum& cs) {
  if (cs.total == 0) throw std::invalid_argument("character_magnitude: empty sum");
  return RootsOfUnity(cs.q).magnitude(cs.residue_counts, cs.total);
}

/// Tally of c.z over a distribution.
inline CharacterSum character_sum(const OutputDistribution& dist, std::span<const Residue> c) {
  const PrimeField field(dist.q);
  CharacterSum cs{dist.q, std::vector<std::uint64_t>(dist.q, 0), dist.total};
  FieldVector z(dist.m);
  for (std::uint64_t code = 0; code < dist.counts.size(); ++code) {
    if (dist.counts[code] == 0) continue;
    std::uint64_t rest = code;
    for (std::size_t i = dist.m; i > 0; --i) {
      z[i - 1] = rest % dist.q;
      rest /= dist.q;
    }
    cs.residue_counts[field.dot(c, z)] += dist.counts[code];
  }
  return cs;
}

/// Tallies c . F(x) over x in V.
inline CharacterSum character_sum_via_output(const Evaluator& eval, const AffineSubspace& v,
                                             std::span<const Residue> c, const Budget& budget = {}) {
  const PrimeField& field = eval.field();
  CharacterSum cs{field.modulus(), std::vector<std::uint64_t>(field.modulus(), 0), 0};
  FieldVector z(eval.output_length());
  enumerate_points(
      v, field,
      [&](std::span<const Residue> x) {
        eval.evaluate(x, z);
        ++cs.residue_counts[field.dot(c, z)];
        ++cs.total;
      },
      budget);
  return cs;
}

/// Tallies b . x^d over x in V, with b = c^T A.
inline CharacterSum character_sum_via_b(const ExtractorSpec& spec, const Evaluator& eval,
                                        const AffineSubspace& v, std::span<const Residue> c,
                                        const Budget& budget = {}) {
  const PrimeField& field = eval.field();
  const FieldVector b = spec.A.left_multiply(c, field);
  CharacterSum cs{field.modulus(), std::vector<std::uint64_t>(field.modulus(), 0), 0};
  enumerate_points(
      v, field,
      [&](std::span<const Residue> x) {
        Residue acc = 0;
        for (std::size_t j = 0; j < x.size(); ++j) acc = field.add(acc, field.mul(b[j], eval.power(j, x[j])));
        ++cs.residue_counts[acc];
        ++cs.total;
      },
      budget);
  return cs;
}

/// Character sum of c over F(X_V), computed along both routes; a
/// disagreement is an internal error.
inline CharacterSum character_sum_subspace(const ExtractorSpec& spec, const AffineSubspace& v,
                                           std::span<const Residue> c, const Budget& budget = {}) {
  if (c.size() != spec.m) throw std::invalid_argument("character_sum_subspace: c must have length m");
  const Evaluator eval(spec);
  eval.field().require_canonical(c, "character vector");
  CharacterSum direct = character_sum_via_output(eval, v, c, budget);
  CharacterSum via_b = character_sum_via_b(spec, eval, v, c, budget);
  if (!(direct == via_b)) throw std::logic_error("character sum routes disagree");
  return direct;
}

/// Outcome of comparing a computed quantity against a bound. Informational
/// reports carry a quantity only and never gate.
struct BoundReport {
  std::string check;
  double quantity = 0.0;
  double bound = 0.0;
  bool satisfied = true;
  bool informational = false;
  std::optional<std::uint64_t> subspace_id;
  std::optional<std::uint64_t> c_encoded;
  std::string note;
};

inline BoundReport make_bound_report(std::string check, double quantity, double bound) {
  BoundReport r;
  r.check = std::move(check);
  r.quantity = quantity;
  r.bound = bound;
  r.satisfied = quantity <= bound + kTolerance;
  return r;
}

struct CharacterExtremum {
  double magnitude = 0.0;
  std::uint64_t c_encoded = 0;
};

/// Largest |E[chi_c(Z)]| over nonzero c; the first maximizer wins ties.
inline CharacterExtremum max_nontrivial_character(const OutputDistribution& dist,
                                                  const RootsOfUnity& roots,
                                                  const Budget& budget = {}) {
  const std::uint64_t outcomes = dist.counts.size();
  require_budget("character enumeration",
                 outcomes > UINT64_MAX / outcomes ? UINT64_MAX : outcomes * outcomes, budget.points);
  const std::uint64_t q = dist.q;
  const std::size_t m = dist.m;
  // Support points as flat digit rows.
  std::vector<std::uint64_t> weight, digits;
  for (std::uint64_t code = 0; code < outcomes; ++code) {
    if (dist.counts[code] == 0) continue;
    weight.push_back(dist.counts[code]);
    const std::size_t at = digits.size();
    digits.resize(at + m);
    for (std::uint64_t rest = code, i = m; i > 0; --i, rest /= q) digits[at + i - 1] = rest % q;
  }

  const bool narrow = static_cast<u128>(q - 1) * (q - 1) * m <= UINT64_MAX;
  CharacterExtremum best;
  std::vector<std::uint64_t> residues(q), c(m, 0);
  for (std::uint64_t code = 1; code < outcomes; ++code) {
    for (std::size_t i = m; i > 0 && ++c[i - 1] == q; --i) c[i - 1] = 0;
    std::fill(residues.begin(), residues.end(), 0);
    for (std::size_t s = 0; s < weight.size(); ++s) {
      std::size_t r;
      if (narrow) {
        std::uint64_t dot = 0;
        for (std::size_t i = 0; i < m; ++i) dot += c[i] * digits[s * m + i];
        r = static_cast<std::size_t>(dot % q);
      } else {
        u128 dot = 0;
        for (std::size_t i = 0; i < m; ++i) dot += static_cast<u128>(c[i]) * digits[s * m + i];
        r = static_cast<std::size_t>(dot % q);
      }
      residues[r] += weight[s];
    }
    const double mag = roots.magnitude(residues, dist.total);
    if (code == 1 || mag > best.magnitude) best = {mag, code};
  }
  return best;
}

/// Magnitudes |E[chi_c(Z)]| for every c in F_q^m, indexed by encode_vector.
inline std::vector<double> all_character_magnitudes(const OutputDistribution& dist) {
  const RootsOfUnity roots(dist.q);
  std::vector<double> out(dist.counts.size());
  for (std::uint64_t code = 0; code < out.size(); ++code) {
    const CharacterSum cs = character_sum(dist, decode_vector(code, dist.m, dist.q));
    out[code] = roots.magnitude(cs.residue_counts, cs.total);
  }
  return out;
}

/// Checks SD(Z, U) <= eps* q^(m/2) where eps* is the largest nontrivial
/// character magnitude of Z.
inline BoundReport xor_bound_check(const OutputDistribution& dist, const RootsOfUnity& roots,
                                   const Budget& budget = {}) {
  const double sd = statistical_distance(dist).to_double();
  if (dist.m == 0) return make_bound_report("xor", sd, 0.0);
  const CharacterExtremum ext = max_nontrivial_character(dist, roots, budget);
  const double scale = std::pow(static_cast<double>(dist.q), static_cast<double>(dist.m) / 2.0);
  BoundReport r = make_bound_report("xor", sd, ext.magnitude * scale);
  r.c_encoded = ext.c_encoded;
  r.note = "max nontrivial character magnitude " + text::format_double(ext.magnitude);
  return r;
}

inline BoundReport xor_bound_check(const OutputDistribution& dist, const Budget& budget = {}) {
  return xor_bound_check(dist, RootsOfUnity(dist.q), budget);
}

/// D = LCM of the pivot exponents and D_i = D / d_{j_i}.
struct PivotExponents {
  std::uint64_t D = 1;
  std::vector<std::uint64_t> Di;
};

inline PivotExponents pivot_exponents(const ExtractorSpec& spec, const Parametrization& p) {
  PivotExponents pe;
  std::vector<std::uint64_t> ds;
  for (auto j : p.pivots) ds.push_back(spec.d.d[j]);
  pe.D = detail::lcm_of(ds);
  for (auto dj : ds) pe.Di.push_back(pe.D / dj);
  return pe;
}

/// One non-pivot coordinate j lying after pivot i (0-based indices into the
/// pivot list) with its degree d_j * D_i, to be compared against D.
struct DegreeBound {
  std::size_t coordinate = 0;
  std::size_t pivot_index = 0;
  u128 degree = 0;
  std::uint64_t D = 1;

  bool holds() const noexcept { return degree < D; }
};

/// Degree bounds for every non-pivot coordinate that follows some pivot;
/// coordinates before the first pivot are constant and carry no bound.
inline std::vector<DegreeBound> nonpivot_degree_bounds(std::span<const std::uint64_t> d,
                                                       std::span<const std::size_t> pivots) {
  std::vector<std::uint64_t> ds;
  for (auto j : pivots) {
    if (j >= d.size()) throw std::invalid_argument("pivot index out of range");
    ds.push_back(d[j]);
  }
  const std::uint64_t D = detail::lcm_of(ds);
  std::vector<DegreeBound> out;
  for (std::size_t j = 0; j < d.size(); ++j) {
    if (std::find(pivots.begin(), pivots.end(), j) != pivots.end()) continue;
    const auto before = static_cast<std::size_t>(
        std::count_if(pivots.begin(), pivots.end(), [j](std::size_t p) { return p < j; }));
    if (before == 0) continue;
    const std::uint64_t Di = D / ds[before - 1];
    out.push_back({j, before - 1, static_cast<u128>(d[j]) * Di, D});
  }
  return out;
}

/// Compares the residue tallies of b . l(t)^d over t in F_q^k with those of
/// b . l(s_1^{D_1}, ..., s_k^{D_k})^d over s in F_q^k. Each s -> s^{D_i} is
/// a permutation of F_q because D_i is coprime to q-1, so the tallies must
/// agree exactly. quantity counts mismatched residue classes.
inline BoundReport change_of_vars_check(const ExtractorSpec& spec, const Evaluator& eval,
                                        const AffineSubspace& v, std::span<const Residue> c,
                                        const Budget& budget = {}) {
  const PrimeField& field = eval.field();
  const std::uint64_t q = field.modulus();
  const std::size_t k = v.dim(), n = v.ambient_dim();
  require_budget("change_of_vars_check", saturating_pow(q, k), budget.points);
  const Parametrization par = parametrize(v);
  const PivotExponents pe = pivot_exponents(spec, par);
  const FieldVector b = spec.A.left_multiply(c, field);

  BoundReport r;
  r.check = "change_of_vars";
  r.bound = 0.0;
  std::uint64_t problems = 0;
  // Each substitution must be invertible via s = t^(D_i^{-1} mod q-1).
  std::vector<FieldVector> substitute(k, FieldVector(q));
  for (std::size_t i = 0; i < k; ++i) {
    const std::uint64_t inverse_exp = detail::invmod(pe.Di[i] % (q - 1 == 0 ? 1 : q - 1), q - 1);
    for (Residue s = 0; s < q; ++s) substitute[i][s] = field.pow(s, pe.Di[i]);
    if (q > 2 && inverse_exp == 0) {
      ++problems;
      continue;
    }
    for (Residue s = 0; s < q; ++s)
      if (q > 2 && field.pow(substitute[i][s], inverse_exp) != s) {
        ++problems;
        break;
      }
  }

  auto tally = [&](bool substituted) {
    std::vector<std::uint64_t> counts(q, 0);
    FieldVector t(k, 0), s(k, 0), x(n);
    while (true) {
      for (std::size_t i = 0; i < k; ++i) t[i] = substituted ? substitute[i][s[i]] : s[i];
      par.apply(field, t, x);
      Residue acc = 0;
      for (std::size_t j = 0; j < n; ++j) acc = field.add(acc, field.mul(b[j], eval.power(j, x[j])));
      ++counts[acc];
      std::size_t i = k;
      while (i > 0 && ++s[i - 1] == q) s[--i] = 0;
      if (i == 0) break;
    }
    return counts;
  };
  const auto plain = tally(false);
  const auto changed = tally(true);
  for (std::uint64_t j = 0; j < q; ++j)
    if (plain[j] != changed[j]) ++problems;

  const std::uint64_t total = saturating_pow(q, k);
  const RootsOfUnity roots(q);
  const double m1 = roots.magnitude(plain, total), m2 = roots.magnitude(changed, total);
  if (std::abs(m1 - m2) > kTolerance) ++problems;
  r.quantity = static_cast<double>(problems);
  r.satisfied = problems == 0;
  r.c_encoded = encode_vector(c, q);
  r.note = "magnitudes " + text::format_double(m1) + " vs " + text::format_double(m2);
  return r;
}

inline BoundReport change_of_vars_check(const ExtractorSpec& spec, const AffineSubspace& v,
                                        std::span<const Residue> c, const Budget& budget = {}) {
  return change_of_vars_check(spec, Evaluator(spec), v, c, budget);
}

/// Pivot identity l~_{j_i}(s)^{d_{j_i}} = s_i^D pointwise (full grid within
/// the budget, otherwise 10^4 seeded points), and for every non-pivot j
/// after j_i the degree bound d_j * D_i < D. quantity counts violations.
inline BoundReport claim35_structure_check(const ExtractorSpec& spec, const AffineSubspace& v,
                                           const Budget& budget = {}, std::uint64_t seed = 0) {
  const PrimeField field = spec.field();
  const std::uint64_t q = field.modulus();
  const std::size_t k = v.dim(), n = v.ambient_dim();
  const Parametrization par = parametrize(v);
  const PivotExponents pe = pivot_exponents(spec, par);
  std::uint64_t violations = 0;

  if (!par.well_formed()) ++violations;

  // Exponent-level degree bound for non-pivot coordinates.
  for (const auto& b : nonpivot_degree_bounds(spec.d.d, par.pivots))
    if (!b.holds()) ++violations;

  if (k > 0) {
    FieldVector s(k, 0), t(k), x(n);
    auto check_point = [&] {
      for (std::size_t i = 0; i < k; ++i) t[i] = field.pow(s[i], pe.Di[i]);
      par.apply(field, t, x);
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t ji = par.pivots[i];
        if (field.pow(x[ji], spec.d.d[ji]) != field.pow(s[i], pe.D)) ++violations;
      }
    };
    const std::uint64_t grid = saturating_pow(q, k);
    if (grid <= budget.points) {
      while (true) {
        check_point();
        std::size_t i = k;
        while (i > 0 && ++s[i - 1] == q) s[--i] = 0;
        if (i == 0) break;
      }
    } else {
      Rng rng(seed);
      for (int sample = 0; sample < 10'000; ++sample) {
        for (auto& si : s) si = uniform_below(rng, q);
        check_point();
      }
    }
  }
  BoundReport r;
  r.check = "claim35";
  r.quantity = static_cast<double>(violations);
  r.bound = 0.0;
  r.satisfied = violations == 0;
  r.note = "D=" + std::to_string(pe.D);
  return r;
}

/// b = c^T A has at most m-1 zero coordinates when every m columns of A are
/// independent.
inline BoundReport zero_coordinate_bound(const CoefficientMatrix& a, const PrimeField& field,
                                         std::span<const Residue> c) {
  if (std::all_of(c.begin(), c.end(), [](Residue r) { return r == 0; }))
    throw std::invalid_argument("zero_coordinate_bound: c must be nonzero");
  const FieldVector b = a.left_multiply(c, field);
  const auto zeros = std::count(b.begin(), b.end(), Residue{0});
  BoundReport r = make_bound_report("zero_coordinate", static_cast<double>(zeros),
                                    static_cast<double>(a.rows()) - 1.0);
  r.satisfied = static_cast<std::size_t>(zeros) + 1 <= a.rows();
  r.c_encoded = encode_vector(c, field.modulus());
  return r;
}

/// As above, also recording how many pivot coordinates of b are nonzero.
inline BoundReport zero_coordinate_bound(const CoefficientMatrix& a, const PrimeField& field,
                                         std::span<const Residue> c, std::span<const std::size_t> pivots) {
  BoundReport r = zero_coordinate_bound(a, field, c);
  const FieldVector b = a.left_multiply(c, field);
  std::size_t nonzero = 0;
  for (auto j : pivots) nonzero += b[j] != 0;
  r.note = "nonzero pivot coordinates " + std::to_string(nonzero) + " of " + std::to_string(pivots.size());
  return r;
}

struct Monomial {
  std::vector<std::uint32_t> exponents;
  Residue coeff = 0;

  std::uint64_t degree() const {
    std::uint64_t d = 0;
    for (auto e : exponents) d += e;
    return d;
  }
};

/// b_1 s_1^Dg + ... + b_v s_v^Dg + g(s) with every b_i nonzero, deg g < Dg
/// and q not dividing Dg. The top form is then smooth: its partials
/// Dg * b_i * s_i^(Dg-1) vanish together only at the origin.
struct DiagonalPolynomial {
  std::uint64_t q = 0;
  std::size_t num_vars = 0;
  std::uint32_t degree = 1;
  FieldVector diagonal_coeffs;
  std::vector<Monomial> lower_terms;

  std::optional<std::string> violation() const {
    if (!is_prime(q)) return "q is not prime";
    if (diagonal_coeffs.size() != num_vars) return "need one diagonal coefficient per variable";
    if (degree == 0) return "degree must be positive";
    if (degree % q == 0) return "q divides the degree";
    for (auto b : diagonal_coeffs)
      if (b % q == 0) return "diagonal coefficient is zero";
    for (const auto& t : lower_terms) {
      if (t.exponents.size() != num_vars) return "lower term has wrong arity";
      if (t.degree() >= degree) return "lower term degree is not below the top degree";
    }
    return std::nullopt;
  }

  Residue evaluate(const PrimeField& field, std::span<const Residue> x) const {
    Residue acc = 0;
    for (std::size_t i = 0; i < num_vars; ++i)
      acc = field.add(acc, field.mul(diagonal_coeffs[i] % q, field.pow(x[i], degree)));
    for (const auto& t : lower_terms) {
      Residue term = t.coeff % q;
      for (std::size_t i = 0; i < num_vars; ++i) term = field.mul(term, field.pow(x[i], t.exponents[i]));
      acc = field.add(acc, term);
    }
    return acc;
  }

  std::string describe() const {
    std::string s;
    auto var = [](std::size_t i) { return std::string(1, static_cast<char>('x' + i)); };
    for (std::size_t i = 0; i < num_vars; ++i) {
      if (!s.empty()) s += " + ";
      if (diagonal_coeffs[i] != 1) s += std::to_string(diagonal_coeffs[i]) + "*";
      s += var(i) + "^" + std::to_string(degree);
    }
    for (const auto& t : lower_terms) {
      s += " + " + std::to_string(t.coeff);
      for (std::size_t i = 0; i < num_vars; ++i)
        if (t.exponents[i] != 0) s += "*" + var(i) + (t.exponents[i] > 1 ? "^" + std::to_string(t.exponents[i]) : "");
    }
    return s + " over F_" + std::to_string(q);
  }
};

/// Brute-force |sum_{x in F_q^v} w^(b f(x))| against (Dg-1)^v q^(v/2).
inline BoundReport deligne_bound_check(const DiagonalPolynomial& f, Residue b_scalar,
                                       const Budget& budget = {}) {
  if (auto bad = f.violation()) throw std::invalid_argument("deligne_bound_check: " + *bad);
  if (b_scalar % f.q == 0) throw std::invalid_argument("deligne_bound_check: b must be nonzero");
  const std::uint64_t points = saturating_pow(f.q, f.num_vars);
  require_budget("deligne_bound_check", points, budget.points);
  const PrimeField field(f.q);
  std::vector<std::uint64_t> counts(f.q, 0);
  FieldVector x(f.num_vars, 0);
  while (true) {
    ++counts[field.mul(b_scalar % f.q, f.evaluate(field, x))];
    std::size_t i = f.num_vars;
    while (i > 0 && ++x[i - 1] == f.q) x[--i] = 0;
    if (i == 0) break;
  }
  // magnitude() normalizes; undo it to get the raw sum.
  const double sum = RootsOfUnity(f.q).magnitude(counts, 1);
  const double bound = std::pow(static_cast<double>(f.degree) - 1.0, static_cast<double>(f.num_vars)) *
                       std::pow(static_cast<double>(f.q), static_cast<double>(f.num_vars) / 2.0);
  BoundReport r = make_bound_report("deligne", sum, bound);
  r.c_encoded = b_scalar;
  r.note = f.describe();
  return r;
}

struct DeligneCase {
  DiagonalPolynomial f;
  Residue b = 1;
};

/// Fixed battery of small diagonal polynomials, one or two variables,
/// degree at most 7, q at most 101.
inline std::vector<DeligneCase> deligne_battery() {
  std::vector<DeligneCase> cases;
  auto one = [&](std::uint64_t q, std::uint32_t deg, Residue b0, std::vector<Monomial> lower, Residue b = 1) {
    cases.push_back({DiagonalPolynomial{q, 1, deg, {b0}, std::move(lower)}, b});
  };
  auto two = [&](std::uint64_t q, std::uint32_t deg, Residue b0, Residue b1, std::vector<Monomial> lower,
                 Residue b = 1) {
    cases.push_back({DiagonalPolynomial{q, 2, deg, {b0, b1}, std::move(lower)}, b});
  };
  one(7, 3, 1, {});                        // cubic sum |1 + 6 cos(2 pi/7)|
  one(7, 1, 1, {});                        // linear: complete sum vanishes
  one(13, 1, 5, {{{0}, 3}}, 2);            // linear plus constant
  one(7, 2, 1, {});                        // quadratic Gauss sum, |.| = sqrt 7
  one(13, 3, 2, {{{1}, 1}});               // x^3 has 3 | 12: nontrivial
  one(31, 3, 1, {{{2}, 4}, {{1}, 7}}, 3);
  one(31, 5, 1, {{{1}, 1}});
  one(31, 6, 3, {{{3}, 2}});
  one(37, 4, 1, {});
  one(61, 6, 1, {{{1}, 5}});
  one(101, 5, 1, {});
  one(101, 4, 7, {{{2}, 1}}, 11);
  one(43, 7, 1, {{{3}, 2}, {{1}, 9}});
  two(13, 5, 1, 1, {{{1, 1}, 1}});         // x^5 + y^5 + xy
  two(7, 3, 1, 1, {});
  two(7, 2, 1, 3, {{{1, 0}, 2}}, 5);
  two(13, 3, 1, 2, {{{1, 1}, 4}});
  two(13, 4, 1, 1, {{{2, 1}, 1}});
  two(31, 3, 1, 1, {{{1, 1}, 1}, {{1, 0}, 2}});
  two(31, 6, 2, 5, {{{2, 2}, 1}});
  two(37, 4, 1, 1, {{{1, 2}, 3}});
  two(61, 5, 1, 1, {{{3, 1}, 2}}, 7);
  two(73, 7, 3, 1, {{{4, 2}, 1}});
  two(101, 2, 1, 1, {{{1, 0}, 1}});
  two(101, 6, 1, 1, {{{2, 3}, 1}});
  return cases;
}

}  // namespace affext
