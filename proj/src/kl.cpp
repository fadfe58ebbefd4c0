#include "forwardcf/kl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace forwardcf {

namespace {

void check_sizes(std::size_t n, std::size_t m, std::size_t k) {
  if (k < 1) throw KlError("knn_kl: k must be >= 1");
  if (n <= k || m <= k) {
    throw KlError("knn_kl: both samples need more than k = " + std::to_string(k) +
                  " points (got " + std::to_string(n) + " and " + std::to_string(m) + ")");
  }
}

std::vector<std::size_t> sorted_order(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  return idx;
}

// k-th smallest |x - sorted[j]| over j < left_start or j >= right_start,
// scanning outwards from the gap between them.
double kth_outward(const std::vector<double>& sorted, double x, std::size_t left_start,
                   std::size_t right_start, std::size_t k) {
  std::size_t l = left_start;
  std::size_t r = right_start;
  double d = 0.0;
  for (std::size_t step = 0; step < k; ++step) {
    const bool has_l = l > 0;
    const bool has_r = r < sorted.size();
    const double dl = has_l ? std::abs(x - sorted[l - 1]) : 0.0;
    const double dr = has_r ? std::abs(x - sorted[r]) : 0.0;
    if (has_l && (!has_r || dl <= dr)) {
      d = dl;
      --l;
    } else {
      d = dr;
      ++r;
    }
  }
  return d;
}

}  // namespace

std::vector<double> knn_distances_within(std::span<const double> p, std::size_t k) {
  if (k < 1 || p.size() <= k) throw KlError("knn_distances_within: need more than k points");
  const auto order = sorted_order(p);
  std::vector<double> sorted(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) sorted[i] = p[order[i]];
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    out[order[i]] = kth_outward(sorted, sorted[i], i, i + 1, k);
  }
  return out;
}

std::vector<double> knn_distances_across(std::span<const double> p, std::span<const double> q,
                                         std::size_t k) {
  if (k < 1 || q.size() <= k) throw KlError("knn_distances_across: need more than k points in q");
  std::vector<double> qs(q.begin(), q.end());
  std::sort(qs.begin(), qs.end());
  const auto order = sorted_order(p);
  std::vector<double> out(p.size());
  std::size_t pos = 0;
  for (std::size_t idx : order) {
    const double x = p[idx];
    while (pos < qs.size() && qs[pos] < x) ++pos;
    const bool self = pos < qs.size() && qs[pos] == x;
    out[idx] = kth_outward(qs, x, pos, self ? pos + 1 : pos, k);
  }
  return out;
}

KlEstimate knn_kl(std::span<const double> p, std::span<const double> q, std::size_t k) {
  const std::size_t n = p.size();
  const std::size_t m = q.size();
  check_sizes(n, m, k);
  for (double v : p) {
    if (!std::isfinite(v)) throw KlError("knn_kl: non-finite value in p");
  }
  for (double v : q) {
    if (!std::isfinite(v)) throw KlError("knn_kl: non-finite value in q");
  }

  const auto rho = knn_distances_within(p, k);
  const auto nu = knn_distances_across(p, q, k);

  double floor = 0.0;
  if (std::any_of(rho.begin(), rho.end(), [](double d) { return d == 0.0; }) ||
      std::any_of(nu.begin(), nu.end(), [](double d) { return d == 0.0; })) {
    std::vector<double> pooled(p.begin(), p.end());
    pooled.insert(pooled.end(), q.begin(), q.end());
    std::sort(pooled.begin(), pooled.end());
    double gap = 0.0;
    for (std::size_t i = 1; i < pooled.size(); ++i) {
      const double g = pooled[i] - pooled[i - 1];
      if (g > 0 && (gap == 0.0 || g < gap)) gap = g;
    }
    floor = (gap > 0 ? gap : 1.0) * 1e-9;
  }

  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double num = nu[i] > 0 ? nu[i] : floor;
    const double den = rho[i] > 0 ? rho[i] : floor;
    acc += std::log(num / den);
  }
  const double value =
      acc / static_cast<double>(n) + std::log(static_cast<double>(m) / static_cast<double>(n - 1));
  return KlEstimate{value, k, n, m};
}

}  // namespace forwardcf
