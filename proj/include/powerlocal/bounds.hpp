#pragma once

// Explicit evaluators: cyclotomic discriminants, the Kummer discriminant
// divisor bound, the effective Chebotarev applicability test, the Y/Z
// schedule, Mertens and Chebyshev products, and the main counting bound.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "powerlocal/arith.hpp"
#include "powerlocal/errors.hpp"
#include "powerlocal/modular.hpp"
#include "powerlocal/prime_cache.hpp"
#include "powerlocal/ratfact.hpp"

namespace powerlocal {

/// Constants the theory leaves ineffective. Every report echoes them.
struct BoundConfig {
  double M = std::log(4.0);
  double c1 = 1.0;
  double c2 = 1.0;
  double implied_constant = 1.0;

  void validate() const {
    if (!(M > 0 && c1 > 0 && c2 > 0 && implied_constant > 0)) {
      throw DomainError("bad_config", "M, c1, c2 and the implied constant must be positive");
    }
  }
};

inline u64 euler_phi(u64 n) {
  if (n == 0) throw DomainError("bad_modulus", "phi(0) is undefined");
  u64 phi = n;
  for (auto [p, e] : factor_u64(n)) phi = phi / p * (p - 1);
  return phi;
}

inline constexpr u64 kExactDiscriminantLimit = 10000;

/// Discriminant of Q(zeta_n): (-1)^{phi/2} n^phi / prod_{p | n} p^{phi/(p-1)}.
inline BigInt cyclotomic_discriminant(u64 n) {
  if (n == 0) throw DomainError("bad_modulus", "n must be at least 1");
  if (n > kExactDiscriminantLimit) {
    throw DomainError("too_large", "exact discriminants are limited to n <= " + std::to_string(kExactDiscriminantLimit) +
                                       "; use the log form");
  }
  if (n <= 2) return 1;
  const u64 phi = euler_phi(n);
  BigInt num = boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(phi));
  for (auto [p, e] : factor_u64(n)) num /= boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(phi / (p - 1)));
  return (phi / 2) % 2 ? BigInt(-num) : num;
}

/// log |d| for Q(zeta_n), any n.
inline double cyclotomic_log_discriminant(u64 n) {
  if (n == 0) throw DomainError("bad_modulus", "n must be at least 1");
  if (n <= 2) return 0.0;
  const double phi = static_cast<double>(euler_phi(n));
  double s = phi * std::log(static_cast<double>(n));
  for (auto [p, e] : factor_u64(n)) s -= phi / static_cast<double>(p - 1) * std::log(static_cast<double>(p));
  return s;
}

/// max{log|d|, |d|^{1/deg}} from log|d|.
inline double max_term(double log_disc, double degree) {
  if (!(degree >= 1)) throw DomainError("bad_degree", "degree must be at least 1");
  return std::max(log_disc, std::exp(log_disc / degree));
}

/// Log of the divisor bound for the discriminant of Q(zeta_l, c_1^{1/l}, ..., c_d^{1/l}):
/// (l-1)^2 l^{d-1} (sum log(num c_i * den c_i) + (d+1) log l). With d = 0 this
/// is log |d(Q(zeta_l))| = (l-2) log l.
inline double kummer_disc_log_bound(u64 ell, std::span<const FactoredRational> c) {
  detail::require_odd_prime(ell);
  const double L = static_cast<double>(ell);
  const std::size_t d = c.size();
  if (d == 0) return cyclotomic_log_discriminant(ell);
  double s = static_cast<double>(d + 1) * std::log(L);
  for (const auto& ci : c) s += ci.log_num_den();
  return (L - 1) * (L - 1) * std::pow(L, static_cast<double>(d - 1)) * s;
}

/// sqrt(log x / deg) >= c2 * max_term.
inline bool chebotarev_condition(double x, double degree, double max_term_value, const BoundConfig& cfg = {}) {
  if (!(x >= 2)) throw DomainError("bad_x", "x must be at least 2");
  if (!(degree >= 1)) throw DomainError("bad_degree", "degree must be at least 1");
  return std::sqrt(std::log(x) / degree) >= cfg.c2 * max_term_value;
}

struct Schedule {
  double x = 0.0;
  double L2 = 0.0, L3 = 0.0, L4 = 0.0;  // iterated logs of x
  double Y = 0.0;
  double Z = 0.0;
  double cap = 0.0;  // (log x / (6 c2 loglog x)^2)^{1/15}
  bool z_within_cap = false;
  bool y_exceeds_z = false;
};

/// Smallest x for which logloglog x > 0, i.e. e^{e^e}.
inline double schedule_min_x() { return std::exp(std::exp(std::exp(1.0))); }

/// Y = logloglog x / (loglogloglog x)^2, Z = loglog x / (3M + 1).
inline Schedule yz_schedule(double x, const BoundConfig& cfg = {}) {
  cfg.validate();
  const double min_x = schedule_min_x();
  if (!(x > min_x)) {
    throw DomainError("schedule_domain",
                      "loglogloglog x is undefined or zero; need x > e^(e^e) ~ " + std::to_string(min_x));
  }
  Schedule s;
  s.x = x;
  s.L2 = std::log(std::log(x));
  s.L3 = std::log(s.L2);
  s.L4 = std::log(s.L3);
  s.Y = s.L3 / (s.L4 * s.L4);
  s.Z = s.L2 / (3 * cfg.M + 1);
  s.cap = std::pow(std::log(x) / std::pow(6 * cfg.c2 * s.L2, 2), 1.0 / 15.0);
  s.z_within_cap = s.Z <= s.cap;
  s.y_exceeds_z = s.Y > s.Z;
  return s;
}

/// prod over odd primes Y <= l < Z of (1 - 1/(l-1)).
inline double mertens_product(double Y, double Z, const PrimeCache& cache) {
  if (!(Y >= 3)) throw DomainError("bad_range", "Y must be at least 3");
  if (Z <= Y) return 1.0;
  const u64 hi = static_cast<u64>(std::ceil(Z));
  cache.require(hi);
  double prod = 1.0;
  for (u64 l : cache.primes_up_to(hi)) {
    const double dl = static_cast<double>(l);
    if (dl < Y || dl >= Z) continue;
    prod *= 1.0 - 1.0 / (dl - 1.0);
  }
  return prod;
}

struct ChebyshevCheck {
  double Z = 0.0;
  double log_product = 0.0;  // sum of log l over primes l <= Z
  double bound = 0.0;        // M Z
  bool holds = false;
  std::optional<u64> first_failure;  // range checks only
};

inline ChebyshevCheck chebyshev_check(double Z, const PrimeCache& cache, const BoundConfig& cfg = {}) {
  if (!(Z >= 2)) throw DomainError("bad_range", "Z must be at least 2");
  const u64 hi = static_cast<u64>(std::floor(Z));
  ChebyshevCheck out;
  out.Z = Z;
  for (u64 l : cache.primes_up_to(hi)) out.log_product += std::log(static_cast<double>(l));
  out.bound = cfg.M * Z;
  out.holds = out.log_product <= out.bound;
  return out;
}

/// The inequality for every Z in [2, limit]. theta is a step function that
/// jumps only at primes, so checking Z = each prime suffices.
inline ChebyshevCheck chebyshev_check_range(u64 limit, const PrimeCache& cache, const BoundConfig& cfg = {}) {
  if (limit < 2) throw DomainError("bad_range", "limit must be at least 2");
  ChebyshevCheck out;
  out.Z = static_cast<double>(limit);
  out.holds = true;
  double theta = 0.0;
  for (u64 l : cache.primes_up_to(limit)) {
    theta += std::log(static_cast<double>(l));
    if (theta > cfg.M * static_cast<double>(l) && !out.first_failure) {
      out.holds = false;
      out.first_failure = l;
    }
  }
  out.log_product = theta;
  out.bound = cfg.M * out.Z;
  return out;
}

/// loglogloglog x / logloglog x as a function of log x, so huge x stay in
/// range. Decreasing once logloglog x > e; increasing before that.
inline double iterated_log_ratio(double log_x) {
  const double L3 = std::log(std::log(log_x));
  if (!(L3 > 1)) throw DomainError("schedule_domain", "logloglog x must exceed 1");
  return std::log(L3) / L3;
}

struct MainBound {
  Schedule schedule;
  u64 pi_x = 0;
  double b_f = 0.0;
  double ratio = 0.0;      // loglogloglog x / logloglog x
  double main_term = 0.0;  // ratio * pi(x) * implied constant
  double total = 0.0;      // main_term + b_f
  std::optional<double> log_ratio_term;  // log Y / log Z * pi(x); needs Y, Z > 1
  std::optional<double> tail_term;       // pi(x) / (Y log Y) + b_f; needs Y > 1
};

inline MainBound main_bound(double x, double b_f, u64 pi_x, const BoundConfig& cfg = {}) {
  MainBound out;
  out.schedule = yz_schedule(x, cfg);
  out.pi_x = pi_x;
  out.b_f = b_f;
  const double pi = static_cast<double>(pi_x);
  out.ratio = out.schedule.L4 / out.schedule.L3;
  out.main_term = out.ratio * pi * cfg.implied_constant;
  out.total = out.main_term + b_f;
  const double Y = out.schedule.Y, Z = out.schedule.Z;
  if (Y > 1 && Z > 1) out.log_ratio_term = std::log(Y) / std::log(Z) * pi;
  if (Y > 1) out.tail_term = pi / (Y * std::log(Y)) + b_f;
  return out;
}

}  // namespace powerlocal
