#pragma once

// Primitive roots, discrete logarithms, l-th power residue classes and the
// joint linear-congruence solver used for power-map membership tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "powerlocal/arith.hpp"
#include "powerlocal/errors.hpp"
#include "powerlocal/ratfact.hpp"

namespace powerlocal {

namespace detail {

inline void require_prime(u64 p, const char* what) {
  if (!is_prime(p)) {
    throw DomainError("not_prime", std::string(what) + " = " + std::to_string(p) + " is not prime");
  }
}

inline void require_odd_prime(u64 ell) {
  if (ell == 2 || !is_prime(ell)) {
    throw DomainError("ell_not_odd_prime", "ell = " + std::to_string(ell) + " must be an odd prime");
  }
}

// Solves gamma^x = h inside the subgroup of prime order q generated by gamma.
inline std::optional<u64> log_prime_order(u64 gamma, u64 h, u64 q, u64 p) {
  if (q <= 64) {
    u64 cur = 1;
    for (u64 x = 0; x < q; ++x) {
      if (cur == h) return x;
      cur = mul_mod(cur, gamma, p);
    }
    return std::nullopt;
  }
  const u64 m = static_cast<u64>(std::ceil(std::sqrt(static_cast<double>(q))));
  std::unordered_map<u64, u64> baby;
  baby.reserve(static_cast<std::size_t>(m) * 2);
  u64 cur = 1;
  for (u64 j = 0; j < m; ++j) {
    baby.emplace(cur, j);
    cur = mul_mod(cur, gamma, p);
  }
  const u64 giant = inverse_mod(pow_mod(gamma, m, p), p);
  u64 y = h;
  for (u64 i = 0; i <= m; ++i) {
    if (auto it = baby.find(y); it != baby.end()) return (i * m + it->second) % q;
    y = mul_mod(y, giant, p);
  }
  return std::nullopt;
}

}  // namespace detail

/// The multiplicative group mod a prime p together with a generator and the
/// factorization of its order. Building one costs a factorization of p - 1;
/// scans build one per prime and reuse it for every logarithm.
class CyclicGroup {
 public:
  explicit CyclicGroup(u64 p) : p_(p) {
    detail::require_prime(p, "p");
    for (auto [q, e] : factor_u64(p - 1)) factors_.emplace_back(q, e);
    generator_ = find_generator();
  }

  CyclicGroup(u64 p, u64 generator) : p_(p) {
    detail::require_prime(p, "p");
    for (auto [q, e] : factor_u64(p - 1)) factors_.emplace_back(q, e);
    if (!is_generator(generator)) {
      throw DomainError("not_generator",
                        std::to_string(generator) + " does not generate (Z/" + std::to_string(p) + ")^x");
    }
    generator_ = generator % p;
  }

  u64 modulus() const noexcept { return p_; }
  u64 order() const noexcept { return p_ - 1; }
  u64 generator() const noexcept { return generator_; }
  const std::vector<std::pair<u64, int>>& order_factors() const noexcept { return factors_; }

  bool is_generator(u64 g) const {
    g %= p_;
    if (g == 0) return false;
    if (p_ == 2) return g == 1;
    for (auto [q, e] : factors_) {
      if (pow_mod(g, (p_ - 1) / q, p_) == 1) return false;
    }
    return true;
  }

  /// x in [0, p-2] with generator^x = h (mod p), by Pohlig-Hellman with
  /// baby-step/giant-step on each prime of p - 1.
  u64 log(u64 h) const {
    h %= p_;
    if (h == 0) {
      throw DomainError("not_unit", "0 has no discrete logarithm modulo " + std::to_string(p_));
    }
    const u64 n = p_ - 1;
    if (n == 1) return 0;
    u64 x = 0, mod = 1;
    for (auto [q, e] : factors_) {
      u64 qe = 1;
      for (int i = 0; i < e; ++i) qe *= q;
      const u64 g_q = pow_mod(generator_, n / qe, p_);
      const u64 h_q = pow_mod(h, n / qe, p_);
      const u64 gamma = pow_mod(g_q, qe / q, p_);
      const u64 g_q_inv = inverse_mod(g_q, p_);
      u64 digits = 0, qk = 1;
      for (int k = 0; k < e; ++k) {
        u64 t = mul_mod(pow_mod(g_q_inv, digits, p_), h_q, p_);
        t = pow_mod(t, qe / qk / q, p_);
        auto d = detail::log_prime_order(gamma, t, q, p_);
        if (!d) throw DomainError("no_log", "discrete logarithm does not exist");
        digits += *d * qk;
        qk *= q;
      }
      // CRT: x = digits (mod qe) merged into x (mod mod).
      const u64 inv = inverse_mod(mod % qe, qe);
      const u64 diff = mod_reduce(static_cast<i128>(digits) - static_cast<i128>(x % qe), qe);
      x += mod * mul_mod(diff, inv, qe);
      mod *= qe;
    }
    return x % n;
  }

 private:
  u64 find_generator() const {
    if (p_ == 2) return 1;
    for (u64 g = 2; g < p_; ++g) {
      if (is_generator(g)) return g;
    }
    throw DomainError("no_generator", "no generator found");  // unreachable for prime p
  }

  u64 p_;
  u64 generator_ = 1;
  std::vector<std::pair<u64, int>> factors_;
};

/// Smallest generator of (Z/pZ)^x; 1 for p = 2.
inline u64 primitive_root(u64 p) { return CyclicGroup(p).generator(); }

/// x in [0, p-2] with g^x = h (mod p). g must generate (Z/pZ)^x.
inline u64 discrete_log(u64 g, u64 h, u64 p) {
  if (h % p == 0) {
    throw DomainError("not_unit", "h is divisible by p; no discrete logarithm");
  }
  return CyclicGroup(p, g).log(h);
}

struct PowerClass {
  u64 z = 1;                       // c^((p-1)/ell) mod p, an ell-th root of unity
  bool splits_completely = true;   // z == 1
};

/// The l-th power class of c at a prime p = 1 (mod l).
inline PowerClass ell_power_class(const FactoredRational& c, u64 ell, u64 p) {
  detail::require_odd_prime(ell);
  detail::require_prime(p, "p");
  if (p == ell) throw DomainError("p_equals_ell", "p must differ from ell");
  if (p % ell != 1) {
    throw DomainError("p_not_1_mod_ell",
                      std::to_string(p) + " is not 1 modulo " + std::to_string(ell));
  }
  const u64 z = pow_mod(reduce_mod_p(c, p), (p - 1) / ell, p);
  return {z, z == 1};
}

/// Smallest k in [0, m-1] with k*a_i = b_i (mod m) for every i, or nullopt.
/// Each congruence is solved through gcd(a_i, m) and the solution classes
/// are intersected by a non-coprime CRT merge.
inline std::optional<u64> solve_power_congruences(std::span<const u64> a, std::span<const u64> b,
                                                  u64 m) {
  if (a.size() != b.size()) {
    throw DomainError("length_mismatch", "coefficient and target sequences differ in length");
  }
  if (m == 0) throw DomainError("bad_modulus", "modulus must be at least 1");
  u64 r = 0, mod = 1;  // current solution set: k = r (mod mod)
  for (std::size_t i = 0; i < a.size(); ++i) {
    const u64 ai = a[i] % m, bi = b[i] % m;
    const u64 g = std::gcd(ai, m);  // gcd(0, m) = m
    if (bi % g != 0) return std::nullopt;
    const u64 mi = m / g;
    const u64 ri = mi == 1 ? 0 : mul_mod((bi / g) % mi, inverse_mod((ai / g) % mi, mi), mi);
    // merge k = r (mod mod) with k = ri (mod mi)
    const u64 g2 = std::gcd(mod, mi);
    const i128 diff = static_cast<i128>(ri) - static_cast<i128>(r);
    if (diff % static_cast<i128>(g2) != 0) return std::nullopt;
    const u64 lcm = mod / g2 * mi;
    const u64 step_mod = mi / g2;
    u64 t = 0;
    if (step_mod > 1) {
      t = mul_mod(mod_reduce(diff / static_cast<i128>(g2), step_mod),
                  inverse_mod((mod / g2) % step_mod, step_mod), step_mod);
    }
    r = static_cast<u64>((static_cast<u128>(r) + static_cast<u128>(mod) * t) % lcm);
    mod = lcm;
  }
  return r % mod;
}

}  // namespace powerlocal
