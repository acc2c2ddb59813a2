#pragma once

// Nonzero rationals held in fully factored form.

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <string_view>

#include "powerlocal/arith.hpp"
#include "powerlocal/errors.hpp"

namespace powerlocal {

using BigInt = boost::multiprecision::cpp_int;

/// sign * prod p^e over a finite set of primes. Every stored exponent is
/// nonzero and every key is prime, so the value is never 0 and the
/// recomposed numerator and denominator are coprime.
class FactoredRational {
 public:
  using ExponentMap = std::map<u64, i64>;

  /// The value 1.
  FactoredRational() = default;

  /// Validating constructor: keys must be prime, sign must be +1 or -1.
  /// Zero exponents are dropped.
  FactoredRational(int sign, ExponentMap exponents) : sign_(sign) {
    if (sign != 1 && sign != -1) {
      throw DomainError("bad_sign", "sign must be +1 or -1");
    }
    for (auto [p, e] : exponents) {
      if (!is_prime(p)) {
        throw DomainError("not_prime", "exponent key " + std::to_string(p) + " is not prime");
      }
      if (e != 0) exponents_.emplace(p, e);
    }
  }

  static FactoredRational prime_power(u64 p, i64 e) { return FactoredRational(1, {{p, e}}); }
  static FactoredRational minus_one() { return FactoredRational(-1, {}); }

  int sign() const noexcept { return sign_; }
  const ExponentMap& exponents() const noexcept { return exponents_; }

  i64 ord(u64 p) const {
    auto it = exponents_.find(p);
    return it == exponents_.end() ? 0 : it->second;
  }

  bool is_one() const noexcept { return sign_ == 1 && exponents_.empty(); }
  bool is_integer() const noexcept {
    for (auto [p, e] : exponents_)
      if (e < 0) return false;
    return true;
  }
  /// Number of distinct primes dividing numerator or denominator.
  std::size_t prime_count() const noexcept { return exponents_.size(); }

  BigInt numerator() const { return recompose(+1); }
  BigInt denominator() const { return recompose(-1); }
  /// num * den as an exact integer.
  BigInt num_den() const { return numerator() * denominator(); }
  /// log(num * den), without forming the product.
  double log_num_den() const {
    double s = 0.0;
    for (auto [p, e] : exponents_) s += static_cast<double>(e < 0 ? -e : e) * std::log(static_cast<double>(p));
    return s;
  }

  FactoredRational operator*(const FactoredRational& other) const {
    FactoredRational out;
    out.sign_ = sign_ * other.sign_;
    out.exponents_ = exponents_;
    for (auto [p, e] : other.exponents_) {
      auto& slot = out.exponents_[p];
      slot += e;
      if (slot == 0) out.exponents_.erase(p);
    }
    return out;
  }

  FactoredRational inverse() const {
    FactoredRational out = *this;
    for (auto& [p, e] : out.exponents_) e = -e;
    return out;
  }

  FactoredRational pow(i64 k) const {
    FactoredRational out;
    if (k == 0) return out;
    out.sign_ = (sign_ == -1 && (k % 2 != 0)) ? -1 : 1;
    for (auto [p, e] : exponents_) out.exponents_.emplace(p, e * k);
    return out;
  }

  bool operator==(const FactoredRational&) const = default;

  /// "+2^3 * 3^-1", "-1", "+1".
  std::string to_string() const {
    std::string s = sign_ < 0 ? "-" : "+";
    if (exponents_.empty()) return s + "1";
    bool first = true;
    for (auto [p, e] : exponents_) {
      if (!first) s += " * ";
      first = false;
      s += std::to_string(p);
      if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
  }

  /// "num/den" in lowest terms, or just "num" for integers.
  std::string to_fraction_string() const {
    std::string s = sign_ < 0 ? "-" : "";
    s += numerator().str();
    BigInt d = denominator();
    if (d != 1) s += "/" + d.str();
    return s;
  }

 private:
  BigInt recompose(int which) const {
    BigInt v = 1;
    for (auto [p, e] : exponents_) {
      if ((which > 0 && e > 0) || (which < 0 && e < 0)) {
        BigInt pp = p;
        v *= boost::multiprecision::pow(pp, static_cast<unsigned>(e < 0 ? -e : e));
      }
    }
    return v;
  }

  int sign_ = 1;
  ExponentMap exponents_;
};

namespace detail {
inline u64 magnitude(i64 v) {
  return v < 0 ? static_cast<u64>(-(v + 1)) + 1 : static_cast<u64>(v);
}
}  // namespace detail

/// Factors numerator/denominator into lowest terms.
inline FactoredRational factor(i64 numerator, i64 denominator = 1,
                               u64 trial_bound = kDefaultTrialBound) {
  if (numerator == 0 || denominator == 0) {
    throw DomainError("zero_rational", "0 has no factored form");
  }
  int sign = ((numerator < 0) != (denominator < 0)) ? -1 : 1;
  FactoredRational::ExponentMap exps;
  for (auto [p, e] : factor_u64(detail::magnitude(numerator), trial_bound)) exps[p] += e;
  for (auto [p, e] : factor_u64(detail::magnitude(denominator), trial_bound)) exps[p] -= e;
  return FactoredRational(sign, std::move(exps));
}

inline FactoredRational factor_unsigned(u64 n, u64 trial_bound = kDefaultTrialBound) {
  FactoredRational::ExponentMap exps;
  for (auto [p, e] : factor_u64(n, trial_bound)) exps[p] = e;
  return FactoredRational(1, std::move(exps));
}

/// Parses "a", "-a", "a/b" with 64-bit a, b.
inline FactoredRational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  auto parse_int = [&](std::string_view s) -> i64 {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    i64 v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw DomainError("bad_rational", "cannot parse integer '" + std::string(s) + "'");
    }
    return v;
  };
  text = trim(text);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return factor(parse_int(text), 1);
  return factor(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

inline i64 ord_p(const FactoredRational& x, u64 p) { return x.ord(p); }

/// The unit residue of x modulo p, in [1, p-1] (or 1 when p = 2).
/// Requires ord_p(x) = 0.
inline u64 reduce_mod_p(const FactoredRational& x, u64 p) {
  if (x.ord(p) != 0) {
    throw DomainError("not_unit", x.to_string() + " is not a " + std::to_string(p) + "-adic unit");
  }
  u64 num = 1 % p, den = 1 % p;
  for (auto [q, e] : x.exponents()) {
    if (e > 0) {
      num = mul_mod(num, pow_mod(q % p, static_cast<u64>(e), p), p);
    } else {
      den = mul_mod(den, pow_mod(q % p, static_cast<u64>(-e), p), p);
    }
  }
  u64 r = mul_mod(num, inverse_mod(den, p), p);
  if (x.sign() < 0) r = (p - r) % p;
  return p == 2 ? 1 : r;
}

}  // namespace powerlocal
