#pragma once

// Frobenius classes in Kummer extensions Q(zeta_l, c^{1/l}) at primes
// p = 1 (mod l), the class C_{2k} of vectors (b, f) with f = lambda*b, and
// empirical density scans against exact class counts.
//
// The Frobenius is read off z_j = c_j^{(p-1)/l} mod p: with a generator
// zeta of the l-th roots of unity mod p, the class of Frob_p is the line
// through (log_zeta z_j)_j. Nothing in a degree-l extension of F_p is ever
// built.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "powerlocal/arith.hpp"
#include "powerlocal/errors.hpp"
#include "powerlocal/lattice.hpp"
#include "powerlocal/modular.hpp"
#include "powerlocal/parallel.hpp"
#include "powerlocal/powermap.hpp"
#include "powerlocal/prime_cache.hpp"
#include "powerlocal/ratfact.hpp"

namespace powerlocal {

/// Frob_p in Gal(Q(zeta_n)/Q) = (Z/nZ)^x, i.e. p mod n.
inline u64 cyclotomic_frobenius(u64 p, u64 n) {
  if (n < 1) throw DomainError("bad_modulus", "n must be positive");
  if (p % n == 0 || std::gcd(p, n) != 1) {
    throw DomainError("ramified", std::to_string(p) + " ramifies in Q(zeta_" + std::to_string(n) + ")");
  }
  return p % n;
}

struct FrobeniusSample {
  u64 p = 0;
  u64 ell = 0;
  std::vector<u64> z;  // c_j^{(p-1)/ell} mod p
  std::vector<u64> b;  // logs of z, scaled so the first nonzero entry is 1
};

/// Scales v (entries mod ell) so its first nonzero coordinate is 1.
inline std::vector<u64> projective_normalize(std::vector<u64> v, u64 ell) {
  auto lead = std::find_if(v.begin(), v.end(), [](u64 x) { return x != 0; });
  if (lead == v.end()) return v;
  const u64 inv = inverse_mod(*lead, ell);
  for (auto& x : v) x = mul_mod(x, inv, ell);
  return v;
}

namespace detail {

inline void check_frobenius_preconditions(u64 p, u64 ell) {
  require_odd_prime(ell);
  require_prime(p, "p");
  if (p == ell) throw DomainError("p_equals_ell", "p must differ from ell");
  if (p % ell != 1) {
    throw DomainError("p_not_1_mod_ell", std::to_string(p) + " is not 1 modulo " + std::to_string(ell));
  }
}

inline FrobeniusSample frobenius_with_root(u64 p, u64 ell, std::span<const FactoredRational> c, u64 zeta) {
  FrobeniusSample s{p, ell, {}, {}};
  const u64 e = (p - 1) / ell;
  std::vector<u64> powers(ell);  // zeta^i
  powers[0] = 1;
  for (u64 i = 1; i < ell; ++i) powers[i] = mul_mod(powers[i - 1], zeta, p);
  std::vector<u64> logs;
  for (const auto& cj : c) {
    if (cj.ord(p) != 0) {
      throw DomainError("not_unit", cj.to_string() + " is not a " + std::to_string(p) + "-adic unit");
    }
    const u64 z = pow_mod(reduce_mod_p(cj, p), e, p);
    s.z.push_back(z);
    auto it = std::find(powers.begin(), powers.end(), z);
    logs.push_back(static_cast<u64>(it - powers.begin()));
  }
  s.b = projective_normalize(std::move(logs), ell);
  return s;
}

}  // namespace detail

/// Frobenius sample with zeta = g^{(p-1)/ell} for the smallest primitive root g.
inline FrobeniusSample frobenius_vector(u64 p, u64 ell, std::span<const FactoredRational> c) {
  detail::check_frobenius_preconditions(p, ell);
  const u64 zeta = pow_mod(primitive_root(p), (p - 1) / ell, p);
  return detail::frobenius_with_root(p, ell, c, zeta);
}

/// Same, logs taken to an explicitly chosen generator of mu_ell.
inline FrobeniusSample frobenius_vector(u64 p, u64 ell, std::span<const FactoredRational> c, u64 mu_generator) {
  detail::check_frobenius_preconditions(p, ell);
  if (mu_generator % p == 0 || mu_generator % p == 1 || pow_mod(mu_generator, ell, p) != 1) {
    throw DomainError("not_generator", std::to_string(mu_generator) + " does not generate mu_" +
                                           std::to_string(ell) + " mod " + std::to_string(p));
  }
  return detail::frobenius_with_root(p, ell, c, mu_generator % p);
}

/// (b, f) with f = lambda * b for some lambda mod ell; v = (b_1..b_k, f_1..f_k).
inline bool in_c2k(std::span<const u64> v, u64 ell) {
  if (v.size() % 2 != 0 || v.empty()) {
    throw DomainError("bad_length", "C_2k membership needs an even, nonzero number of coordinates");
  }
  const std::size_t k = v.size() / 2;
  auto lead = std::find_if(v.begin(), v.begin() + k, [&](u64 x) { return x % ell != 0; });
  if (lead == v.begin() + k) {
    return std::all_of(v.begin() + k, v.end(), [&](u64 x) { return x % ell == 0; });
  }
  const std::size_t i = static_cast<std::size_t>(lead - v.begin());
  const u64 lambda = mul_mod(v[k + i] % ell, inverse_mod(v[i] % ell, ell), ell);
  for (std::size_t j = 0; j < k; ++j) {
    if (v[k + j] % ell != mul_mod(lambda, v[j] % ell, ell)) return false;
  }
  return true;
}

inline bool in_c4(const FrobeniusSample& s) {
  if (s.b.size() != 4) throw DomainError("bad_length", "C_4 membership needs a 4-coordinate sample");
  return in_c2k(s.b, s.ell);
}

/// (a, v) in (Z/lZ)^x semidirect (Z/lZ)^m with (a1,v1)(a2,v2) = (a1 a2, v2 + a2 v1).
struct KummerElement {
  u64 a = 1;
  std::vector<u64> v;
  bool operator==(const KummerElement&) const = default;
};

inline KummerElement compose(const KummerElement& x, const KummerElement& y, u64 ell) {
  KummerElement out{mul_mod(x.a, y.a, ell), y.v};
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = (out.v[i] + mul_mod(y.a, x.v[i], ell)) % ell;
  return out;
}

inline KummerElement invert(const KummerElement& x, u64 ell) {
  const u64 ai = inverse_mod(x.a, ell);
  KummerElement out{ai, x.v};
  for (auto& c : out.v) c = (ell - mul_mod(ai, c, ell)) % ell;
  return out;
}

/// C_{2k} inside the Galois image (Z/lZ)^x semidirect W, W = full space or
/// the span of `image_basis`.
struct ClassSpec {
  u64 ell = 3;
  std::size_t k = 2;
  std::optional<std::vector<ModVector>> image_basis;  // nullopt: W = (Z/lZ)^{2k}

  static ClassSpec full(u64 ell, std::size_t k = 2) { return {ell, k, std::nullopt}; }
  static ClassSpec from_kummer(const KummerDegree& kd) {
    if (kd.m % 2 != 0) throw DomainError("bad_length", "tuple length must be even");
    if (kd.d == kd.m) return full(kd.ell, kd.m / 2);
    return {kd.ell, kd.m / 2, kd.image};
  }
};

struct ClassRatio {
  BigInt size_c;        // |C_2k|
  BigInt fiber;         // |W|, the a = 1 part
  BigInt group;         // (ell - 1)|W|
  double conditional_density = 0.0;  // |C_2k| / |W|
  double group_density = 0.0;        // |C_2k| / |G|
  double class_bound = 0.0;          // 2 / (ell (ell - 1))
  bool bound_hypothesis = false;     // first 2k-1 coordinates of W span everything
  bool within_class_bound = false;
};

inline constexpr u64 kDefaultEnumerationBound = 13;

/// Exact |C_2k| against the group order. The full case is closed form
/// (|C_2k| = l^{2k-1}... specialised: l^3 - l + 1 for k = 2); a proper image
/// is enumerated, which needs ell <= enumeration_bound.
inline ClassRatio class_ratio(const ClassSpec& spec, u64 enumeration_bound = kDefaultEnumerationBound) {
  detail::require_odd_prime(spec.ell);
  const u64 ell = spec.ell;
  const std::size_t k = spec.k;
  ClassRatio out;
  const BigInt L = ell;
  if (!spec.image_basis) {
    // b = 0 forces f = 0; each b != 0 admits ell multiples.
    const BigInt lk = boost::multiprecision::pow(L, static_cast<unsigned>(k));
    out.size_c = 1 + (lk - 1) * L;
    out.fiber = lk * lk;
    out.bound_hypothesis = true;
  } else {
    if (ell > enumeration_bound) {
      throw DomainError("enumeration_bound", "ell = " + std::to_string(ell) + " exceeds the enumeration bound " +
                                                 std::to_string(enumeration_bound));
    }
    const auto& basis = *spec.image_basis;
    const std::size_t d = basis.size();
    std::vector<u64> coeff(d, 0);
    std::vector<u64> v(2 * k);
    u64 hits = 0, total = 0;
    while (true) {
      std::fill(v.begin(), v.end(), 0);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < 2 * k; ++j) v[j] = (v[j] + coeff[i] * basis[i][j]) % ell;
      ++total;
      if (in_c2k(v, ell)) ++hits;
      std::size_t i = 0;
      while (i < d && ++coeff[i] == ell) coeff[i++] = 0;
      if (i == d) break;
    }
    out.size_c = hits;
    out.fiber = total;
    // Projection of W onto the first 2k - 1 coordinates.
    IntMatrix proj;
    for (const auto& row : basis) proj.emplace_back(row.begin(), row.begin() + static_cast<long>(2 * k - 1));
    out.bound_hypothesis = rref_mod(proj, 2 * k - 1, ell).second.size() == 2 * k - 1;
  }
  out.group = out.fiber * (ell - 1);
  out.conditional_density = static_cast<double>(out.size_c) / static_cast<double>(out.fiber);
  out.group_density = static_cast<double>(out.size_c) / static_cast<double>(out.group);
  out.class_bound = 2.0 / (static_cast<double>(ell) * static_cast<double>(ell - 1));
  out.within_class_bound = out.size_c * ell * (ell - 1) <= 2 * out.group;
  return out;
}

enum class DensityStatistic { C2k, Split };

struct DensityRow {
  u64 p = 0;
  bool skipped = false;
  bool hit = false;
  std::vector<u64> z, b;
};

struct DensityScan {
  u64 ell = 0;
  u64 limit = 0;
  DensityStatistic statistic = DensityStatistic::C2k;
  std::vector<FactoredRational> tuple;
  KummerDegree kummer;
  u64 counted = 0;  // p = 1 (mod ell), p <= limit, not skipped
  u64 skipped = 0;  // p divides some num/den of the tuple
  u64 hits = 0;
  double observed = 0.0;
  double expected = 0.0;
  double deviation = 0.0;
  std::optional<ClassRatio> ratio;  // C2k statistic only
  std::vector<DensityRow> rows;     // filled when requested
};

/// Fraction of p = 1 (mod ell) up to x whose Frobenius lies in C_2k (or
/// splits completely), against the exact expectation for the actual image.
inline DensityScan scan_density(u64 ell, std::span<const FactoredRational> tuple, u64 x, const PrimeCache& cache,
                                unsigned workers = 1, DensityStatistic stat = DensityStatistic::C2k,
                                bool keep_rows = false) {
  detail::require_odd_prime(ell);
  if (tuple.empty()) throw DomainError("bad_length", "the tuple is empty");
  if (stat == DensityStatistic::C2k && tuple.size() % 2 != 0) {
    throw DomainError("bad_length", "C_2k scans need an even-length tuple");
  }
  const auto primes = cache.primes_up_to(x);
  DensityScan out;
  out.ell = ell;
  out.limit = x;
  out.statistic = stat;
  out.tuple.assign(tuple.begin(), tuple.end());
  out.kummer = kummer_degree(tuple, ell);
  if (stat == DensityStatistic::C2k) {
    out.ratio = class_ratio(ClassSpec::from_kummer(out.kummer));
    out.expected = out.ratio->conditional_density;
  } else {
    out.expected = 1.0 / static_cast<double>(out.kummer.degree);
  }
  std::vector<u64> fiber;
  for (u64 p : primes)
    if (p % ell == 1) fiber.push_back(p);
  const auto rows = parallel_map<DensityRow>(std::span<const u64>(fiber), workers, [&](u64 p) {
    DensityRow row{p, false, false, {}, {}};
    for (const auto& c : tuple) {
      if (c.ord(p) != 0) {
        row.skipped = true;
        return row;
      }
    }
    const auto s = frobenius_vector(p, ell, tuple);
    row.hit = stat == DensityStatistic::C2k
                  ? in_c2k(s.b, ell)
                  : std::all_of(s.z.begin(), s.z.end(), [](u64 z) { return z == 1; });
    if (keep_rows) {
      row.z = s.z;
      row.b = s.b;
    }
    return row;
  });
  for (const auto& row : rows) {
    if (row.skipped) {
      ++out.skipped;
      continue;
    }
    ++out.counted;
    if (row.hit) ++out.hits;
  }
  out.observed = out.counted ? static_cast<double>(out.hits) / static_cast<double>(out.counted) : 0.0;
  out.deviation = std::abs(out.observed - out.expected);
  if (keep_rows) out.rows = rows;
  return out;
}

/// Sum over primes p <= x of 1/(p-1)^2.
inline double heuristic_sum(u64 x, const PrimeCache& cache) {
  double s = 0.0;
  for (u64 p : cache.primes_up_to(x)) {
    const double d = static_cast<double>(p - 1);
    s += 1.0 / (d * d);
  }
  return s;
}

struct HeuristicScan {
  u64 limit = 0;
  std::vector<u64> witnesses;
  u64 count = 0;    // primes with f(n) mod p in Omega_n(p)
  u64 counted = 0;  // primes examined
  u64 skipped = 0;  // p divides some n_i or num/den of f(n_i)
  u64 pi_x = 0;
  double ratio = 0.0;  // count / pi(x)
  double heuristic_sum = 0.0;
  std::vector<u64> members;
};

/// Counts p <= x for which some k solves f(n_i) = n_i^k (mod p) for all i,
/// by discrete logs to a primitive root and the joint congruence solver.
inline HeuristicScan heuristic_scan(const MultiplicativeMap& f, std::span<const u64> witnesses, u64 x,
                                    const PrimeCache& cache, unsigned workers = 1) {
  const auto primes = cache.primes_up_to(x);
  HeuristicScan out;
  out.limit = x;
  out.witnesses.assign(witnesses.begin(), witnesses.end());
  std::vector<FactoredRational> n, fn;
  for (u64 w : witnesses) {
    n.push_back(factor_unsigned(w));
    fn.push_back(f(n.back()));
  }
  // 0 = skipped, 1 = examined non-member, 2 = member
  const auto status = parallel_map<char>(primes, workers, [&](u64 p) -> char {
    for (std::size_t i = 0; i < n.size(); ++i)
      if (n[i].ord(p) != 0 || fn[i].ord(p) != 0) return 0;
    if (p == 2) return 2;  // trivial group
    CyclicGroup group(p);
    std::vector<u64> a, b;
    for (std::size_t i = 0; i < n.size(); ++i) {
      a.push_back(group.log(reduce_mod_p(n[i], p)));
      b.push_back(group.log(reduce_mod_p(fn[i], p)));
    }
    return solve_power_congruences(a, b, p - 1) ? 2 : 1;
  });
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (status[i] == 0) {
      ++out.skipped;
      continue;
    }
    ++out.counted;
    if (status[i] == 2) {
      ++out.count;
      out.members.push_back(primes[i]);
    }
  }
  out.pi_x = primes.size();
  out.ratio = out.pi_x ? static_cast<double>(out.count) / static_cast<double>(out.pi_x) : 0.0;
  out.heuristic_sum = heuristic_sum(x, cache);
  return out;
}

}  // namespace powerlocal
