#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace forwardcf {

/// 64-bit finalizer from SplitMix64.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a over the bytes of a name; stable across platforms and runs.
constexpr std::uint64_t hash_name(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t combine_seed(std::uint64_t seed, std::uint64_t value);

/// Counter-based substream keyed by (seed, unit, tag). Two streams with
/// different keys never share state, so redrawing one noise for one unit
/// leaves every other draw untouched. Satisfies UniformRandomBitGenerator.
class Stream {
 public:
  using result_type = std::uint64_t;

  Stream(std::uint64_t seed, std::uint64_t unit, std::string_view tag);
  explicit Stream(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return mix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

  /// Uniform on the open interval (0, 1).
  double uniform();
  double standard_normal();
  double normal(double mean, double sd) { return mean + sd * standard_normal(); }
  bool bernoulli(double p) { return uniform() < p; }
  std::size_t index(std::size_t count);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace forwardcf
