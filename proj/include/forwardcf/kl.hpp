#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace forwardcf {

class KlError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct KlEstimate {
  double value = 0.0;  // nats; may be negative
  std::size_t k = 0;
  std::size_t n = 0;  // |p|
  std::size_t m = 0;  // |q|
};

inline constexpr std::size_t kDefaultNeighbors = 10;

/// rho_k(i): distance from p[i] to its k-th nearest neighbour in p without
/// p[i] itself. Returned in the order of p.
std::vector<double> knn_distances_within(std::span<const double> p, std::size_t k);

/// nu_k(i): distance from p[i] to its k-th nearest neighbour in q. One q point
/// equal to p[i], if any, is treated as p[i]'s own copy and skipped.
std::vector<double> knn_distances_across(std::span<const double> p, std::span<const double> q,
                                         std::size_t k);

/// One-dimensional k-nearest-neighbour estimate of KL(p || q):
///   D = (1/n) sum_i log(nu_k(i) / rho_k(i)) + log(m / (n - 1)).
/// Zero distances are replaced by 1e-9 times the smallest positive gap in the
/// pooled sample. Requires n, m > k >= 1.
KlEstimate knn_kl(std::span<const double> p, std::span<const double> q,
                  std::size_t k = kDefaultNeighbors);

}  // namespace forwardcf
