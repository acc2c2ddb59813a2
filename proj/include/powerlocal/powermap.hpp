#pragma once

// Completely multiplicative functions on Q^x and the primes at which they
// act as power maps.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "powerlocal/arith.hpp"
#include "powerlocal/errors.hpp"
#include "powerlocal/modular.hpp"
#include "powerlocal/parallel.hpp"
#include "powerlocal/prime_cache.hpp"
#include "powerlocal/ratfact.hpp"

namespace powerlocal {

enum class MapKind { GlobalPower, Table };

/// f on Q^x given by f(-1), finitely many prime overrides and the rule
/// q -> q^k on every other prime. Evaluation goes through the factorization,
/// so f(1) = 1 and f(xy) = f(x) f(y) hold by construction.
class MultiplicativeMap {
 public:
  static MultiplicativeMap global_power(i64 k) {
    MultiplicativeMap f;
    f.default_exponent_ = k;
    f.sign_value_ = (k % 2 == 0) ? 1 : -1;
    return f;
  }

  /// `sign_value` defaults to (-1)^k, i.e. f(-1) agrees with the default rule.
  static MultiplicativeMap table(std::map<u64, FactoredRational> overrides, i64 default_exponent,
                                 std::optional<int> sign_value = std::nullopt) {
    MultiplicativeMap f;
    f.default_exponent_ = default_exponent;
    f.sign_value_ = sign_value.value_or((default_exponent % 2 == 0) ? 1 : -1);
    if (f.sign_value_ != 1 && f.sign_value_ != -1) {
      throw DomainError("bad_sign", "sign_value must be +1 or -1");
    }
    for (auto& [q, v] : overrides) {
      if (!is_prime(q)) throw DomainError("not_prime", "override key " + std::to_string(q) + " is not prime");
    }
    f.overrides_ = std::move(overrides);
    f.kind_ = MapKind::Table;
    return f;
  }

  MapKind kind() const noexcept { return kind_; }
  int sign_value() const noexcept { return sign_value_; }
  i64 default_exponent() const noexcept { return default_exponent_; }
  const std::map<u64, FactoredRational>& overrides() const noexcept { return overrides_; }

  FactoredRational at_prime(u64 q) const {
    if (auto it = overrides_.find(q); it != overrides_.end()) return it->second;
    return FactoredRational::prime_power(q, default_exponent_);
  }

  FactoredRational operator()(const FactoredRational& x) const {
    FactoredRational out = x.sign() < 0 && sign_value_ < 0 ? FactoredRational::minus_one()
                                                           : FactoredRational();
    for (auto [q, e] : x.exponents()) out = out * at_prime(q).pow(e);
    return out;
  }

  FactoredRational operator()(u64 n) const { return (*this)(factor_unsigned(n)); }

 private:
  MapKind kind_ = MapKind::GlobalPower;
  int sign_value_ = 1;
  i64 default_exponent_ = 1;
  std::map<u64, FactoredRational> overrides_;
};

inline FactoredRational evaluate(const MultiplicativeMap& f, const FactoredRational& x) { return f(x); }

enum class Membership { Yes, No, Unknown };

inline const char* to_string(Membership m) {
  switch (m) {
    case Membership::Yes: return "yes";
    case Membership::No: return "no";
    default: return "unknown";
  }
}

struct DecisionMode {
  enum class Kind { Exact, Empirical };
  Kind kind = Kind::Exact;
  u64 bound = 0;  // empirical only

  static DecisionMode exact() { return {}; }
  static DecisionMode empirical(u64 bound) { return {Kind::Empirical, bound}; }
  bool operator==(const DecisionMode&) const = default;
};

struct LocalVerdict {
  u64 p = 0;
  Membership member = Membership::Unknown;
  std::optional<u64> k_p;  // in Z/(p-1)Z, present iff member == Yes
  DecisionMode mode;
};

namespace detail {

inline u64 exponent_mod(i64 k, u64 n) { return mod_reduce(k, n); }

// f(alpha) = alpha^k (mod p) for alpha = q prime, checked on the factored value.
inline bool matches_power_at(const FactoredRational& value, u64 q, u64 k, u64 p) {
  if (value.ord(p) != 0) return false;
  return reduce_mod_p(value, p) == pow_mod(q % p, k, p);
}

inline LocalVerdict exact_verdict(const MultiplicativeMap& f, u64 p) {
  LocalVerdict v{p, Membership::No, std::nullopt, DecisionMode::exact()};
  if (p == 2) {
    // Z/1Z: membership means odd primes go to 2-adic units.
    for (const auto& [q, value] : f.overrides()) {
      if (q != 2 && value.ord(2) != 0) return v;
    }
    v.member = Membership::Yes;
    v.k_p = 0;
    return v;
  }
  // Non-overridden primes meet every class mod p, so the default rule pins k_p.
  const u64 k = exponent_mod(f.default_exponent(), p - 1);
  for (const auto& [q, value] : f.overrides()) {
    if (q == p) continue;
    if (!matches_power_at(value, q, k, p)) return v;
  }
  const u64 minus_one_power = (k % 2 == 0) ? 1 : p - 1;
  const u64 sign = f.sign_value() > 0 ? 1 : p - 1;
  if (sign != minus_one_power) return v;
  v.member = Membership::Yes;
  v.k_p = k;
  return v;
}

inline LocalVerdict empirical_verdict(const MultiplicativeMap& f, u64 p, u64 bound,
                                      std::span<const u64> small_primes) {
  LocalVerdict v{p, Membership::No, std::nullopt, DecisionMode::empirical(bound)};
  bool checked_any = false;
  u64 k = 0;
  if (p != 2) {
    CyclicGroup group(p);
    const u64 g = group.generator();
    const FactoredRational fg = f(g);
    if (fg.ord(p) != 0) return v;
    k = group.log(reduce_mod_p(fg, p));
    const u64 minus_one_power = (k % 2 == 0) ? 1 : p - 1;
    if ((f.sign_value() > 0 ? 1 : p - 1) != minus_one_power) return v;
  }
  for (u64 q : small_primes) {
    if (q > bound) break;
    if (q == p) continue;
    checked_any = true;
    const FactoredRational fq = f.at_prime(q);
    if (p == 2) {
      if (fq.ord(2) != 0) return v;
    } else if (!matches_power_at(fq, q, k, p)) {
      return v;
    }
  }
  if (!checked_any) {
    v.member = Membership::Unknown;
    return v;
  }
  v.member = Membership::Yes;
  v.k_p = k;
  return v;
}

}  // namespace detail

/// Decides whether f induces x -> x^{k_p} on (Z/pZ)^x. Exact mode reads the
/// answer off the model; empirical mode derives k_p at a primitive root and
/// checks it on -1 and on every prime q <= bound.
inline LocalVerdict local_exponent(const MultiplicativeMap& f, u64 p, DecisionMode mode) {
  detail::require_prime(p, "p");
  if (mode.kind == DecisionMode::Kind::Exact) return detail::exact_verdict(f, p);
  const auto small = detail::simple_sieve(mode.bound);
  return detail::empirical_verdict(f, p, mode.bound, small);
}

/// An integer-valued function on N, evaluated exactly.
using RawSequence = std::function<BigInt(u64)>;

/// Empirical S_f test for an arbitrary integer sequence: k_p from the value
/// at a primitive root, verified on every n <= bound prime to p.
inline LocalVerdict local_exponent_empirical(const RawSequence& f, u64 p, u64 bound) {
  detail::require_prime(p, "p");
  LocalVerdict v{p, Membership::No, std::nullopt, DecisionMode::empirical(bound)};
  auto residue = [p](const BigInt& x) {
    BigInt r = x % p;
    if (r < 0) r += p;
    return static_cast<u64>(r);
  };
  u64 k = 0;
  if (p != 2) {
    CyclicGroup group(p);
    const u64 fg = residue(f(group.generator()));
    if (fg == 0) return v;
    k = group.log(fg);
  }
  bool checked_any = false;
  for (u64 n = 1; n <= bound; ++n) {
    if (n % p == 0) continue;
    checked_any = true;
    if (residue(f(n)) != pow_mod(n % p, k, p)) return v;
  }
  v.member = checked_any ? Membership::Yes : Membership::Unknown;
  if (checked_any) v.k_p = k;
  return v;
}

struct SfScan {
  u64 limit = 0;
  DecisionMode mode;
  std::vector<LocalVerdict> verdicts;  // one per prime <= limit, ascending

  std::vector<u64> members() const {
    std::vector<u64> out;
    for (const auto& v : verdicts)
      if (v.member == Membership::Yes) out.push_back(v.p);
    return out;
  }
  u64 count() const { return members().size(); }
  u64 unknown() const {
    return static_cast<u64>(std::count_if(verdicts.begin(), verdicts.end(),
                                          [](const auto& v) { return v.member == Membership::Unknown; }));
  }
  u64 pi() const { return verdicts.size(); }
  double density() const { return verdicts.empty() ? 0.0 : static_cast<double>(count()) / verdicts.size(); }
};

/// S_f(x) with each k_p.
inline SfScan scan_sf(const MultiplicativeMap& f, u64 x, DecisionMode mode, const PrimeCache& cache,
                      unsigned workers = 1) {
  const auto primes = cache.primes_up_to(x);
  std::vector<u64> small;
  if (mode.kind == DecisionMode::Kind::Empirical) small = detail::simple_sieve(mode.bound);
  SfScan scan{x, mode, {}};
  scan.verdicts = parallel_map<LocalVerdict>(primes, workers, [&](u64 p) {
    return mode.kind == DecisionMode::Kind::Exact ? detail::exact_verdict(f, p)
                                                  : detail::empirical_verdict(f, p, mode.bound, small);
  });
  return scan;
}

/// nu_f by majority parity of k_p over odd members; ties go to 0 (even).
inline int vote_nu_f(std::span<const LocalVerdict> verdicts) {
  long even = 0, odd = 0;
  for (const auto& v : verdicts) {
    if (v.member != Membership::Yes || v.p == 2 || !v.k_p) continue;
    (*v.k_p % 2 == 0 ? even : odd)++;
  }
  return odd > even ? 1 : 0;
}

/// f restricted to N as an exact integer sequence. Evaluating at an n where
/// f(n) is not an integer throws DomainError("non_integral").
inline RawSequence restrict_to_naturals(const MultiplicativeMap& f) {
  return [f](u64 n) -> BigInt {
    const FactoredRational v = f(n);
    if (!v.is_integer()) {
      throw DomainError("non_integral", "f(" + std::to_string(n) + ") = " + v.to_fraction_string() +
                                            " is not an integer");
    }
    return v.sign() < 0 ? BigInt(-v.numerator()) : v.numerator();
  };
}

struct ShiftQuasiResult {
  bool applicable = true;  // false when some needed value is not an integer
  bool shift_ok = false;   // f(n + p) = f(n) (mod p) for all n <= bound
  bool quasi_ok = false;   // f(qn) = f(q) f(n) for primes q <= bound, n <= bound/q, q not dividing n
};

/// Values f(1..count) (index 0 unused), for repeated checks over one range.
inline std::vector<BigInt> tabulate(const RawSequence& f, u64 count) {
  std::vector<BigInt> values(count + 1);
  for (u64 n = 1; n <= count; ++n) values[n] = f(n);
  return values;
}

namespace detail {

inline bool shift_holds(const std::vector<BigInt>& values, u64 p, u64 bound) {
  for (u64 n = 1; n <= bound; ++n) {
    BigInt diff = values[n + p] - values[n];
    if (diff % p != 0) return false;
  }
  return true;
}

inline bool quasi_holds(const std::vector<BigInt>& values, u64 bound) {
  for (u64 q : simple_sieve(bound)) {
    for (u64 n = 1; n <= bound / q; ++n) {
      if (n % q == 0) continue;
      if (values[q * n] != values[q] * values[n]) return false;
    }
  }
  return true;
}

}  // namespace detail

inline ShiftQuasiResult shift_and_quasi_check(const RawSequence& f, u64 p, u64 bound) {
  detail::require_prime(p, "p");
  ShiftQuasiResult r;
  std::vector<BigInt> values;
  try {
    values = tabulate(f, bound + p);
  } catch (const DomainError& e) {
    if (e.code() != "non_integral") throw;
    r.applicable = false;
    return r;
  }
  r.shift_ok = detail::shift_holds(values, p, bound);
  r.quasi_ok = detail::quasi_holds(values, bound);
  return r;
}

struct TfScan {
  u64 limit = 0;
  u64 bound = 0;
  bool applicable = true;
  std::vector<u64> tf;          // primes p <= limit passing the shift check up to `bound`
  std::vector<u64> sf;          // exact S_f(limit)
  std::vector<u64> tf_minus_sf;
  bool quasi_ok = false;
};

/// Empirical T_f(x) next to exact S_f(x).
inline TfScan scan_tf(const MultiplicativeMap& f, u64 x, u64 bound, const PrimeCache& cache,
                      unsigned workers = 1) {
  TfScan out;
  out.limit = x;
  out.bound = bound;
  const auto primes = cache.primes_up_to(x);
  for (u64 p : scan_sf(f, x, DecisionMode::exact(), cache, workers).members()) out.sf.push_back(p);
  std::vector<BigInt> values;
  try {
    values = tabulate(restrict_to_naturals(f), bound + x);
  } catch (const DomainError& e) {
    if (e.code() != "non_integral") throw;
    out.applicable = false;
    return out;
  }
  out.quasi_ok = detail::quasi_holds(values, bound);
  const auto flags = parallel_map<char>(primes, workers, [&](u64 p) {
    return static_cast<char>(detail::shift_holds(values, p, bound));
  });
  for (std::size_t i = 0; i < primes.size(); ++i)
    if (flags[i]) out.tf.push_back(primes[i]);
  std::set_difference(out.tf.begin(), out.tf.end(), out.sf.begin(), out.sf.end(),
                      std::back_inserter(out.tf_minus_sf));
  return out;
}

/// Values of a function N -> Q on the primes: overrides as fractions plus a
/// default exponent. No sign; extend_to_q supplies one.
struct PrimeValues {
  std::map<u64, std::pair<i64, i64>> overrides;  // q -> (num, den)
  i64 default_exponent = 1;
};

/// The completely multiplicative extension to Q with f(-1) = (-1)^{nu_f}.
inline MultiplicativeMap extend_to_q(const PrimeValues& values, int nu_f) {
  if (nu_f != 0 && nu_f != 1) throw DomainError("bad_nu", "nu_f must be 0 or 1");
  std::map<u64, FactoredRational> overrides;
  for (auto [q, frac] : values.overrides) {
    if (frac.first == 0) {
      throw DomainError("zero_value", "f(" + std::to_string(q) + ") = 0 has no extension to Q^x");
    }
    overrides.emplace(q, factor(frac.first, frac.second));
  }
  return MultiplicativeMap::table(std::move(overrides), values.default_exponent, nu_f == 0 ? 1 : -1);
}

/// value in n^Z or -n^Z, for n > 1.
inline bool in_signed_power_class(const FactoredRational& n, const FactoredRational& value) {
  if (n.exponents().empty()) return value.exponents().empty();
  std::optional<i64> j;
  for (auto [q, e] : value.exponents())
    if (n.ord(q) == 0) return false;
  for (auto [q, e] : n.exponents()) {
    const i64 fe = value.ord(q);
    if (fe % e != 0) return false;
    if (!j) j = fe / e;
    else if (*j != fe / e) return false;
  }
  return true;
}

/// L square-free witnesses n > 1 with f(n) outside n^Z and -n^Z. Each step
/// looks past the previous witness: first a single prime q with
/// f(q) not a signed power of q, otherwise a product q1*q2 of primes whose
/// power exponents differ (smallest product first).
inline std::vector<u64> find_witnesses(const MultiplicativeMap& f, std::size_t count, u64 search_limit) {
  std::vector<u64> out;
  const auto primes = detail::simple_sieve(search_limit);
  // k_q when f(q) = +-q^{k_q}, else nullopt.
  std::vector<std::optional<i64>> power_exp(primes.size());
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const auto fq = f.at_prime(primes[i]);
    const auto q = FactoredRational::prime_power(primes[i], 1);
    if (in_signed_power_class(q, fq)) power_exp[i] = fq.ord(primes[i]);
  }
  u64 threshold = 1;
  while (out.size() < count) {
    std::optional<u64> next;
    std::size_t first = std::upper_bound(primes.begin(), primes.end(), threshold) - primes.begin();
    for (std::size_t i = first; i < primes.size(); ++i) {
      if (!power_exp[i]) {
        next = primes[i];
        break;
      }
    }
    if (!next) {
      // Products may use primes below the threshold; only the product must exceed it.
      for (std::size_t i = 0; i < primes.size(); ++i) {
        if (primes[i] * primes[i] > search_limit || (next && primes[i] * primes[i] > *next)) break;
        for (std::size_t j = i + 1; j < primes.size(); ++j) {
          const u64 prod = primes[i] * primes[j];
          if (prod > search_limit || (next && prod >= *next)) break;
          if (prod <= threshold) continue;
          if (*power_exp[i] != *power_exp[j]) {
            next = prod;
            break;
          }
        }
      }
    }
    if (!next) {
      throw DomainError("exhausted", "found " + std::to_string(out.size()) + " of " +
                                         std::to_string(count) + " witnesses below " +
                                         std::to_string(search_limit));
    }
    out.push_back(*next);
    threshold = *next;
  }
  return out;
}

/// n -> the CRT representative in [1, M] (M = product of S) of the residues
/// n^{k_p} mod p; classes with residue 0 everywhere map to M itself.
class PrescribedFunction {
 public:
  explicit PrescribedFunction(std::map<u64, u64> exponents) : exponents_(std::move(exponents)) {
    if (exponents_.empty()) throw DomainError("empty_set", "the prescribed prime set is empty");
    for (auto [p, k] : exponents_) {
      if (p == 2 || !is_prime(p)) {
        throw DomainError("not_odd_prime", std::to_string(p) + " is not an odd prime");
      }
      if (k > p - 2) {
        throw DomainError("bad_exponent", "k_" + std::to_string(p) + " must lie in [0, p-2]");
      }
      if (modulus_ > ~u64{0} / p) throw DomainError("overflow", "CRT modulus exceeds 64 bits");
      modulus_ *= p;
    }
  }

  u64 modulus() const noexcept { return modulus_; }
  const std::map<u64, u64>& exponents() const noexcept { return exponents_; }

  u64 operator()(u64 n) const {
    u64 x = 0, mod = 1;
    for (auto [p, k] : exponents_) {
      const u64 r = (n % p == 0) ? 0 : pow_mod(n % p, k, p);
      const u64 t = mul_mod(mod_reduce(static_cast<i128>(r) - static_cast<i128>(x % p), p),
                            inverse_mod(mod % p, p), p);
      x += mod * t;
      mod *= p;
    }
    return x == 0 ? modulus_ : x;
  }

  RawSequence as_sequence() const {
    return [self = *this](u64 n) { return BigInt(self(n)); };
  }

 private:
  std::map<u64, u64> exponents_;
  u64 modulus_ = 1;
};

inline PrescribedFunction construct_prescribed(std::map<u64, u64> exponents) {
  return PrescribedFunction(std::move(exponents));
}

}  // namespace powerlocal
