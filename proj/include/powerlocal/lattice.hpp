#pragma once

// Multiplicative relations among tuples of rationals, via the integer matrix
// of prime exponents.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "powerlocal/arith.hpp"
#include "powerlocal/errors.hpp"
#include "powerlocal/modular.hpp"
#include "powerlocal/powermap.hpp"
#include "powerlocal/ratfact.hpp"

namespace powerlocal {

using IntMatrix = std::vector<std::vector<i64>>;
using BigMatrix = std::vector<std::vector<BigInt>>;
using ModVector = std::vector<u64>;

/// E_c: rows indexed by the support primes, column j the exponent vector of c_j.
struct ExponentLattice {
  std::vector<u64> support;
  IntMatrix matrix;   // support.size() x m
  std::size_t m = 0;

  std::size_t r() const noexcept { return support.size(); }
};

inline ExponentLattice build_lattice(std::span<const FactoredRational> c) {
  ExponentLattice L;
  L.m = c.size();
  std::set<u64> primes;
  for (const auto& x : c)
    for (auto [p, e] : x.exponents()) primes.insert(p);
  L.support.assign(primes.begin(), primes.end());
  L.matrix.assign(L.support.size(), std::vector<i64>(L.m, 0));
  for (std::size_t i = 0; i < L.support.size(); ++i)
    for (std::size_t j = 0; j < L.m; ++j) L.matrix[i][j] = c[j].ord(L.support[i]);
  return L;
}

namespace detail {

inline BigMatrix to_big(const IntMatrix& a) {
  BigMatrix out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i].assign(a[i].begin(), a[i].end());
  return out;
}

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Unimodular row reduction of rows[first..] over the leading `cols` columns
// into row-echelon form with positive pivots. Entries above each pivot are
// reduced into [0, pivot) when `reduce_above` is set. Returns the rank.
inline std::size_t echelon(BigMatrix& rows, std::size_t cols, bool reduce_above) {
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < cols && pivot_row < rows.size(); ++col) {
    while (true) {
      std::optional<std::size_t> best;
      for (std::size_t i = pivot_row; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        if (!best || abs(rows[i][col]) < abs(rows[*best][col])) best = i;
      }
      if (!best) break;
      std::swap(rows[pivot_row], rows[*best]);
      bool done = true;
      for (std::size_t i = pivot_row + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        const BigInt q = floor_div(rows[i][col], rows[pivot_row][col]);
        for (std::size_t k = 0; k < rows[i].size(); ++k) rows[i][k] -= q * rows[pivot_row][k];
        if (rows[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[pivot_row][col] == 0) continue;
    if (rows[pivot_row][col] < 0)
      for (auto& v : rows[pivot_row]) v = -v;
    if (reduce_above) {
      for (std::size_t i = 0; i < pivot_row; ++i) {
        const BigInt q = floor_div(rows[i][col], rows[pivot_row][col]);
        if (q != 0)
          for (std::size_t k = 0; k < rows[i].size(); ++k) rows[i][k] -= q * rows[pivot_row][k];
      }
    }
    ++pivot_row;
  }
  return pivot_row;
}

inline BigInt bareiss_det(BigMatrix a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  int sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && a[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

inline u64 binomial_capped(std::size_t n, std::size_t k, u64 cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  u128 v = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    v = v * (n - k + i) / i;
    if (v > cap) return cap + 1;
  }
  return static_cast<u64>(v);
}

}  // namespace detail

/// gcd of all maximal (m x m) minors of an r x m matrix with r >= m, via the
/// determinantal divisor: unimodular row operations leave the gcd fixed and
/// reduce it to the product of the echelon pivots. 0 when rank < m.
inline BigInt maximal_minor_gcd(const IntMatrix& e, std::size_t m) {
  if (e.size() < m) return 0;
  BigMatrix rows = detail::to_big(e);
  if (detail::echelon(rows, m, false) < m) return 0;
  BigInt g = 1;
  for (std::size_t i = 0; i < m; ++i) g *= rows[i][i];
  return abs(g);
}

/// Every m x m minor, rows chosen in lexicographic order. Requires r >= m.
inline std::vector<BigInt> maximal_minors(const IntMatrix& e, std::size_t m) {
  std::vector<BigInt> out;
  const std::size_t r = e.size();
  if (r < m) return out;
  std::vector<std::size_t> pick(m);
  for (std::size_t i = 0; i < m; ++i) pick[i] = i;
  while (true) {
    BigMatrix sub(m);
    for (std::size_t i = 0; i < m; ++i) sub[i].assign(e[pick[i]].begin(), e[pick[i]].end());
    out.push_back(detail::bareiss_det(std::move(sub)));
    std::size_t i = m;
    while (i > 0 && pick[i - 1] == r - m + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < m; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

struct RelationReport {
  std::vector<std::vector<i64>> kernel_basis;  // Z-basis of M_c, Hermite normal form
  std::optional<std::vector<BigInt>> minors;   // Delta_c, when r >= m and within the cap
  std::optional<BigInt> delta;                 // 2 * gcd(Delta_c), when Delta_c != 0
};

inline constexpr u64 kMinorEnumerationCap = 100000;

/// M_c = ker E_c over Z together with Delta_c and delta(c).
inline RelationReport relations(const ExponentLattice& L, u64 minor_cap = kMinorEnumerationCap) {
  RelationReport rep;
  const std::size_t m = L.m, r = L.r();
  // [E^T | I]; rows whose E^T part vanishes after reduction span the kernel.
  BigMatrix rows(m, std::vector<BigInt>(r + m, 0));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < r; ++i) rows[j][i] = L.matrix[i][j];
    rows[j][r + j] = 1;
  }
  const std::size_t rank = detail::echelon(rows, r, false);
  BigMatrix kernel;
  for (std::size_t j = rank; j < m; ++j) kernel.emplace_back(rows[j].begin() + r, rows[j].end());
  detail::echelon(kernel, m, true);
  for (const auto& v : kernel) {
    std::vector<i64> row;
    for (const auto& x : v) {
      if (x > std::numeric_limits<i64>::max() || x < std::numeric_limits<i64>::min()) {
        throw DomainError("overflow", "kernel entry exceeds 64 bits");
      }
      row.push_back(static_cast<i64>(x));
    }
    rep.kernel_basis.push_back(std::move(row));
  }
  if (r >= m && m > 0) {
    if (detail::binomial_capped(r, m, minor_cap) <= minor_cap) {
      rep.minors = maximal_minors(L.matrix, m);
      BigInt g = 0;
      for (const auto& x : *rep.minors) g = gcd(g, abs(x));
      if (g != 0) rep.delta = 2 * g;
    } else {
      BigInt g = maximal_minor_gcd(L.matrix, m);
      if (g != 0) rep.delta = 2 * g;
    }
  }
  return rep;
}

/// Row-reduced echelon form mod ell; returns (rref, pivot columns).
inline std::pair<std::vector<ModVector>, std::vector<std::size_t>> rref_mod(const IntMatrix& e, std::size_t cols,
                                                                             u64 ell) {
  std::vector<ModVector> a;
  for (const auto& row : e) {
    ModVector v(cols);
    for (std::size_t j = 0; j < cols; ++j) v[j] = mod_reduce(row[j], ell);
    a.push_back(std::move(v));
  }
  std::vector<std::size_t> pivots;
  std::size_t pr = 0;
  for (std::size_t col = 0; col < cols && pr < a.size(); ++col) {
    std::size_t i = pr;
    while (i < a.size() && a[i][col] == 0) ++i;
    if (i == a.size()) continue;
    std::swap(a[pr], a[i]);
    const u64 inv = inverse_mod(a[pr][col], ell);
    for (auto& x : a[pr]) x = mul_mod(x, inv, ell);
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (k == pr || a[k][col] == 0) continue;
      const u64 f = a[k][col];
      for (std::size_t j = 0; j < cols; ++j) a[k][j] = (a[k][j] + ell - mul_mod(f, a[pr][j], ell)) % ell;
    }
    pivots.push_back(col);
    ++pr;
  }
  a.resize(pr);
  return {a, pivots};
}

struct KummerDegree {
  u64 ell = 0;
  std::size_t m = 0;
  std::size_t dim_v = 0;               // dim V_c(ell)
  std::size_t d = 0;                   // m - dim_v = dim of the Galois image
  BigInt degree = 1;                   // ell^d
  std::vector<ModVector> relations;    // basis of V_c(ell)
  std::vector<ModVector> image;        // basis of the annihilator of V_c(ell)
};

/// [Q(zeta_l, c^{1/l}) : Q(zeta_l)] for an odd prime l. Signs are ignored
/// because -1 is an l-th power.
inline KummerDegree kummer_degree(std::span<const FactoredRational> c, u64 ell) {
  if (ell == 2) throw DomainError("ell_not_odd_prime", "ell = 2 is not supported");
  detail::require_odd_prime(ell);
  const ExponentLattice L = build_lattice(c);
  KummerDegree out;
  out.ell = ell;
  out.m = L.m;
  auto [rref, pivots] = rref_mod(L.matrix, L.m, ell);
  out.image = rref;
  out.d = pivots.size();
  out.dim_v = L.m - out.d;
  std::vector<bool> is_pivot(L.m, false);
  for (auto p : pivots) is_pivot[p] = true;
  for (std::size_t free = 0; free < L.m; ++free) {
    if (is_pivot[free]) continue;
    ModVector v(L.m, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = (ell - rref[i][free]) % ell;
    out.relations.push_back(std::move(v));
  }
  out.degree = boost::multiprecision::pow(BigInt(ell), static_cast<unsigned>(out.d));
  return out;
}

struct FInvariants {
  std::vector<FactoredRational> tuple;  // (n1, n2, f(n1))
  bool in_n_f = false;                  // M_c = {0}
  std::optional<BigInt> delta;          // delta_{f,n}
  BigInt b;                             // b_{f,n}
};

inline FInvariants f_invariants(const MultiplicativeMap& f, u64 n1, u64 n2) {
  if (n1 < 2 || n2 < 2) throw DomainError("bad_argument", "n1 and n2 must be at least 2");
  FInvariants out;
  const FactoredRational a = factor_unsigned(n1), b = factor_unsigned(n2);
  const FactoredRational fa = f(a), fb = f(b);
  out.tuple = {a, b, fa};
  const RelationReport rep = relations(build_lattice(out.tuple));
  out.in_n_f = rep.kernel_basis.empty();
  out.delta = rep.delta;
  out.b = BigInt(n1) * n2 * fa.num_den() * fb.num_den();
  return out;
}

struct AfSearch {
  std::optional<std::pair<u64, u64>> best;  // minimizing pair, if N_f meets the search box
  double log_a_f = 0.0;                     // log a_f over the box (0 when empty, a_f = 1)
  u64 pairs_in_n_f = 0;
};

/// a_f = min max{delta, e^b} restricted to 2 <= n1, n2 <= limit, in log form.
inline AfSearch a_f_search(const MultiplicativeMap& f, u64 limit) {
  AfSearch out;
  for (u64 n1 = 2; n1 <= limit; ++n1) {
    for (u64 n2 = 2; n2 <= limit; ++n2) {
      const FInvariants inv = f_invariants(f, n1, n2);
      if (!inv.in_n_f) continue;
      ++out.pairs_in_n_f;
      const double log_delta = std::log(static_cast<double>(*inv.delta));
      const double value = std::max(log_delta, static_cast<double>(inv.b));
      if (!out.best || value < out.log_a_f) {
        out.best = {n1, n2};
        out.log_a_f = value;
      }
    }
  }
  return out;
}

}  // namespace powerlocal
