#include "forwardcf/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace forwardcf {

std::uint64_t combine_seed(std::uint64_t seed, std::uint64_t value) {
  return mix64(seed ^ (mix64(value) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

Stream::Stream(std::uint64_t seed, std::uint64_t unit, std::string_view tag)
    : key_(combine_seed(combine_seed(mix64(seed), unit), hash_name(tag))) {}

double Stream::uniform() {
  // 53 random bits, shifted off zero.
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

// Box-Muller without caching: every call consumes exactly two words.
double Stream::standard_normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Stream::index(std::size_t count) {
  if (count == 0) throw std::invalid_argument("index: empty range");
  // Reject the tail so every index is equally likely.
  const std::uint64_t limit = max() - max() % count;
  std::uint64_t r;
  do {
    r = (*this)();
  } while (r >= limit);
  return static_cast<std::size_t>(r % count);
}

}  // namespace forwardcf
