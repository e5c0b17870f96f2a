#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace heatrecon {

template <class R>
struct GaussRule {
  std::vector<R> nodes;    // on [-1, 1], ascending
  std::vector<R> weights;
};

// Gauss-Legendre rule of order m, computed once per (type, m) by Newton iteration.
template <class R>
const GaussRule<R>& gauss_legendre(int m);

// Gauss-Jacobi rule on [0, 1] for the weight (1 - u)^a, a >= 0.
GaussRule<double> gauss_jacobi_unit(int m, double a);

// Deterministic tree summation; result depends only on the order of the input.
template <class T>
T pairwise_sum(std::span<const T> v) {
  const std::size_t n = v.size();
  if (n == 0) return T(0);
  if (n <= 8) {
    T s = v[0];
    for (std::size_t i = 1; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v.subspan(0, h)) + pairwise_sum(v.subspan(h));
}

template <class T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(std::span<const T>(v));
}

// Composite rule: `panels` equal panels on [a, b], each with m Gauss points.
template <class R>
void composite_gauss(const R& a, const R& b, int panels, int m, std::vector<R>& x,
                     std::vector<R>& w);

// Panels capped so that rate * width <= kappa.
int panels_for_rate(double length, double rate, double kappa, int min_panels = 1);

// Gauss order per panel for a relative truncation of 10^-digits on panels
// whose complex phase changes by at most kappa.
int gauss_order_for_digits(double digits, double kappa);

// Thread count from HEATRECON_THREADS, else hardware concurrency.
int worker_count();

// Runs body(i) for i in [0, n); each index is processed exactly once.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace heatrecon
