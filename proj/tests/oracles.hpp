#pragma once

// Slow, obviously-correct reference implementations. None of them call into
// the library except for plain data types.

#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using Big = boost::multiprecision::cpp_int;

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<u64> primes_up_to(u64 n) {
  std::vector<u64> out;
  for (u64 k = 2; k <= n; ++k)
    if (is_prime(k)) out.push_back(k);
  return out;
}

inline u64 pow_mod(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  b %= m;
  for (u64 i = 0; i < e; ++i) r = static_cast<u64>((static_cast<unsigned __int128>(r) * b) % m);
  return r;
}

/// Multiplicative order by iteration.
inline u64 order(u64 g, u64 p) {
  u64 x = g % p, k = 1;
  while (x != 1) {
    x = x * (g % p) % p;
    ++k;
  }
  return k;
}

inline u64 primitive_root(u64 p) {
  if (p == 2) return 1;
  for (u64 g = 2;; ++g)
    if (order(g, p) == p - 1) return g;
}

inline std::optional<u64> dlog(u64 g, u64 h, u64 p) {
  u64 x = 1;
  for (u64 k = 0; k + 1 < p || k == 0; ++k) {
    if (x == h % p) return k;
    x = x * g % p;
  }
  return std::nullopt;
}

/// Smallest k in [0, m) with k a_i = b_i (mod m) for all i.
inline std::optional<u64> solve(const std::vector<u64>& a, const std::vector<u64>& b, u64 m) {
  for (u64 k = 0; k < m; ++k) {
    bool ok = true;
    for (std::size_t i = 0; i < a.size() && ok; ++i) ok = (k * a[i]) % m == b[i] % m;
    if (ok) return k;
  }
  return std::nullopt;
}

/// A rational as an unreduced pair, evaluated mod p by division.
struct Frac {
  Big num = 1, den = 1;
};

inline u64 frac_mod(const Frac& f, u64 p) {
  Big n = f.num % p, d = f.den % p;
  if (n < 0) n += p;
  if (d < 0) d += p;
  const u64 dn = static_cast<u64>(d);
  u64 inv = 0;
  for (u64 i = 1; i < p; ++i)
    if (dn * i % p == 1) inv = i;
  return static_cast<u64>(n) * inv % p;
}

inline Frac frac_pow(const Frac& f, i64 e) {
  Frac out;
  const Frac base = e >= 0 ? f : Frac{f.den, f.num};
  for (i64 i = 0; i < (e >= 0 ? e : -e); ++i) {
    out.num *= base.num;
    out.den *= base.den;
  }
  return out;
}

/// Exact rational number (signed). Used to test multiplicative relations.
inline bool frac_is_unit_magnitude(const Frac& f) {
  using boost::multiprecision::abs;
  return abs(f.num) == abs(f.den);
}

/// All v in (Z/l)^m with sum_j v_j e_{ij} = 0 (mod l) for every row i.
inline u64 count_mod_kernel(const std::vector<std::vector<i64>>& e, std::size_t m, u64 ell) {
  std::vector<u64> v(m, 0);
  u64 count = 0;
  while (true) {
    bool ok = true;
    for (const auto& row : e) {
      i64 s = 0;
      for (std::size_t j = 0; j < m; ++j) s += row[j] * static_cast<i64>(v[j]);
      if (((s % static_cast<i64>(ell)) + static_cast<i64>(ell)) % static_cast<i64>(ell) != 0) ok = false;
    }
    if (ok) ++count;
    std::size_t j = 0;
    while (j < m && ++v[j] == ell) v[j++] = 0;
    if (j == m) break;
  }
  return count;
}

/// |{(b, f) in (Z/l)^2k : f = lambda b for some lambda}| by full enumeration.
inline u64 count_c2k(u64 ell, std::size_t k) {
  const std::size_t n = 2 * k;
  std::vector<u64> v(n, 0);
  u64 count = 0;
  while (true) {
    bool hit = false;
    for (u64 lam = 0; lam < ell && !hit; ++lam) {
      bool ok = true;
      for (std::size_t j = 0; j < k; ++j) ok = ok && v[k + j] == lam * v[j] % ell;
      hit = ok;
    }
    if (hit) ++count;
    std::size_t j = 0;
    while (j < n && ++v[j] == ell) v[j++] = 0;
    if (j == n) break;
  }
  return count;
}

/// Integer polynomials, lowest degree first.
using Poly = std::vector<Big>;

inline Poly poly_divide_exact(Poly a, const Poly& b) {
  Poly q(a.size() - b.size() + 1, 0);
  for (std::size_t i = q.size(); i-- > 0;) {
    q[i] = a[i + b.size() - 1] / b.back();
    for (std::size_t j = 0; j < b.size(); ++j) a[i + j] -= q[i] * b[j];
  }
  return q;
}

inline Poly cyclotomic_poly(u64 n) {
  Poly p(n + 1, 0);
  p[0] = -1;
  p[n] = 1;
  for (u64 d = 1; d < n; ++d)
    if (n % d == 0) p = poly_divide_exact(p, cyclotomic_poly(d));
  return p;
}

inline Big det(std::vector<std::vector<Big>> a) {
  // Fraction-free Bareiss.
  const std::size_t n = a.size();
  Big prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

/// disc(P) = (-1)^{n(n-1)/2} Res(P, P') for monic P, via the Sylvester matrix.
inline Big discriminant(const Poly& p) {
  const std::size_t n = p.size() - 1;
  if (n == 1) return 1;
  Poly dp(n);
  for (std::size_t i = 1; i <= n; ++i) dp[i - 1] = p[i] * static_cast<i64>(i);
  const std::size_t m = n - 1, size = n + m;
  std::vector<std::vector<Big>> s(size, std::vector<Big>(size, 0));
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t i = 0; i <= n; ++i) s[r][r + i] = p[n - i];
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t i = 0; i <= m; ++i) s[m + r][r + i] = dp[m - i];
  Big res = det(s);
  return (n * (n - 1) / 2) % 2 ? Big(-res) : res;
}

inline u64 phi(u64 n) {
  u64 c = 0;
  for (u64 k = 1; k <= n; ++k)
    if (std::gcd(k, n) == 1) ++c;
  return c;
}

}  // namespace oracle
