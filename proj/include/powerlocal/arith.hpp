#pragma once

// Word-size modular arithmetic: products through 128-bit intermediates,
// deterministic Miller-Rabin for 64-bit inputs, and trial-division
// factoring with a primality check on the cofactor.

#include <cstdint>
#include <map>
#include <numeric>
#include <string>

#include "powerlocal/errors.hpp"

namespace powerlocal {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline constexpr u64 kDefaultTrialBound = u64{1} << 20;

constexpr u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

constexpr u64 pow_mod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

/// Reduces a signed value into [0, m).
constexpr u64 mod_reduce(i128 a, u64 m) {
  i128 r = a % static_cast<i128>(m);
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

/// Inverse of a modulo m. Throws DomainError("not_invertible") when
/// gcd(a, m) != 1.
inline u64 inverse_mod(u64 a, u64 m) {
  i128 old_r = a % m, r = m;
  i128 old_s = 1, s = 0;
  while (r != 0) {
    i128 q = old_r / r;
    i128 tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) {
    if (m == 1) return 0;
    throw DomainError("not_invertible", std::to_string(a) + " is not invertible modulo " +
                                           std::to_string(m));
  }
  return mod_reduce(old_s, m);
}

/// Deterministic for all 64-bit n (the first twelve primes are a complete
/// witness set below 3.3e24).
constexpr bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Prime factorization of n >= 1. Trial division runs up to `trial_bound`;
/// a remaining cofactor is accepted only if it is provably prime, otherwise
/// DomainError("unfactorable") is thrown.
inline std::map<u64, int> factor_u64(u64 n, u64 trial_bound = kDefaultTrialBound) {
  if (n == 0) throw DomainError("zero_rational", "0 has no factored form");
  std::map<u64, int> out;
  while ((n & 1) == 0) {
    ++out[2];
    n >>= 1;
  }
  u64 d = 3;
  for (; d <= trial_bound && static_cast<u128>(d) * d <= n; d += 2) {
    while (n % d == 0) {
      ++out[d];
      n /= d;
    }
  }
  if (n > 1) {
    if (static_cast<u128>(d) * d > n || is_prime(n)) {
      ++out[n];
    } else {
      throw DomainError("unfactorable", "cofactor " + std::to_string(n) +
                                            " is composite with no factor below the trial bound " +
                                            std::to_string(trial_bound));
    }
  }
  return out;
}

}  // namespace powerlocal
