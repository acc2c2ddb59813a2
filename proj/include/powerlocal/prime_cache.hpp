#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "powerlocal/arith.hpp"
#include "powerlocal/errors.hpp"

namespace powerlocal {

namespace detail {

inline std::vector<u64> simple_sieve(u64 limit) {
  std::vector<u64> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

inline u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Calls visit(p) for every prime p <= limit in ascending order.
template <class Visit>
void segmented_sieve(u64 limit, Visit&& visit) {
  if (limit < 2) return;
  constexpr u64 kSegment = u64{1} << 18;
  const auto base = simple_sieve(isqrt(limit));
  std::vector<unsigned char> mark(kSegment);
  for (u64 low = 0; low <= limit; low += kSegment) {
    const u64 high = std::min(limit, low + kSegment - 1);
    std::fill(mark.begin(), mark.end(), 1);
    for (u64 p : base) {
      u64 start = std::max(p * p, (low + p - 1) / p * p);
      for (u64 j = start; j <= high; j += p) mark[j - low] = 0;
    }
    for (u64 n = std::max<u64>(low, 2); n <= high; ++n) {
      if (mark[n - low]) visit(n);
    }
    if (high == limit) break;
  }
}

}  // namespace detail

/// pi(x) by segmented sieving, without storing the primes.
inline u64 count_primes(u64 x) {
  u64 count = 0;
  detail::segmented_sieve(x, [&](u64) { ++count; });
  return count;
}

/// Every prime up to `limit`, ascending. Immutable once built, so a single
/// cache can be shared by scan workers.
class PrimeCache {
 public:
  PrimeCache() = default;

  explicit PrimeCache(u64 limit) : limit_(limit) {
    if (limit >= 1000) {
      primes_.reserve(static_cast<std::size_t>(1.15 * limit / std::log(static_cast<double>(limit))));
    }
    detail::segmented_sieve(limit, [&](u64 p) { primes_.push_back(p); });
  }

  u64 limit() const noexcept { return limit_; }
  std::span<const u64> primes() const noexcept { return primes_; }
  bool covers(u64 x) const noexcept { return x <= limit_; }

  void require(u64 x) const {
    if (!covers(x)) {
      throw DomainError("cache_too_small", "prime cache limit " + std::to_string(limit_) +
                                               " does not cover " + std::to_string(x));
    }
  }

  /// Primes p <= x. Requires covers(x).
  std::span<const u64> primes_up_to(u64 x) const {
    require(x);
    auto end = std::upper_bound(primes_.begin(), primes_.end(), x);
    return {primes_.data(), static_cast<std::size_t>(end - primes_.begin())};
  }

  u64 pi(u64 x) const { return primes_up_to(x).size(); }

  /// Writes the "PRIMECACHE v1 <limit>" format.
  void save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cache_io", "cannot write prime cache " + path.string());
    std::string buf = "PRIMECACHE v1 " + std::to_string(limit_) + "\n";
    char tmp[24];
    for (u64 p : primes_) {
      auto [ptr, ec] = std::to_chars(tmp, tmp + sizeof tmp, p);
      buf.append(tmp, ptr);
      buf.push_back('\n');
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }

  static PrimeCache load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cache_io", "cannot read prime cache " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const std::string magic = "PRIMECACHE v1 ";
    auto bad = [&](const std::string& why) {
      return DomainError("cache_format", "malformed prime cache " + path.string() + ": " + why);
    };
    if (text.compare(0, magic.size(), magic) != 0) throw bad("missing header");
    PrimeCache cache;
    const char* p = text.data() + magic.size();
    const char* end = text.data() + text.size();
    auto [q, ec] = std::from_chars(p, end, cache.limit_);
    if (ec != std::errc() || q == end || *q != '\n') throw bad("bad limit");
    p = q + 1;
    u64 prev = 0;
    while (p < end) {
      u64 v = 0;
      auto [r, ec2] = std::from_chars(p, end, v);
      if (ec2 != std::errc() || (r != end && *r != '\n')) throw bad("bad entry");
      if (v <= prev || v > cache.limit_) throw bad("entries must ascend within the limit");
      cache.primes_.push_back(v);
      prev = v;
      p = (r == end) ? r : r + 1;
    }
    // Spot-check the count against a fresh sieve for small limits and the
    // endpoints for large ones.
    if (cache.limit_ <= 100000) {
      if (PrimeCache(cache.limit_).primes_ != cache.primes_) throw bad("content mismatch");
    } else if (cache.primes_.empty() || cache.primes_.front() != 2 || !is_prime(cache.primes_.back())) {
      throw bad("content mismatch");
    }
    return cache;
  }

  /// Loads `path` if it covers `limit`, otherwise sieves and rewrites it.
  static PrimeCache load_or_build(const std::filesystem::path& path, u64 limit) {
    if (std::filesystem::exists(path)) {
      PrimeCache cache = load(path);
      if (cache.covers(limit)) return cache;
    }
    PrimeCache cache(limit);
    cache.save(path);
    return cache;
  }

 private:
  u64 limit_ = 0;
  std::vector<u64> primes_;
};

}  // namespace powerlocal
