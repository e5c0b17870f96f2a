#include "heatrecon/quadrature.hpp"

#include "heatrecon/precision.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace heatrecon {

namespace {

template <class R>
GaussRule<R> build_rule(int m) {
  using std::abs;
  using std::cos;
  GaussRule<R> rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  const R pi = pi_v<R>();
  const R eps = std::numeric_limits<R>::epsilon();
  for (int i = 0; i < (m + 1) / 2; ++i) {
    // Tricomi initial guess, refined by Newton on P_m.
    R x = cos(pi * (R(i) + R(0.75)) / (R(m) + R(0.5)));
    R dp = 0;
    for (int it = 0; it < 100; ++it) {
      R p0 = 1, p1 = x;
      for (int k = 2; k <= m; ++k) {
        R p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (m == 1) p0 = 1;
      dp = R(m) * (x * p1 - p0) / (x * x - 1);
      const R dx = p1 / dp;
      x -= dx;
      if (abs(dx) <= 4 * eps) break;
    }
    {
      R p0 = 1, p1 = x;
      for (int k = 2; k <= m; ++k) {
        R p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (m == 1) p0 = 1;
      dp = R(m) * (x * p1 - p0) / (x * x - 1);
    }
    const R w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[m - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[m - 1 - i] = w;
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0;
  return rule;
}

}  // namespace

template <class R>
const GaussRule<R>& gauss_legendre(int m) {
  if (m < 1) throw std::invalid_argument("Gauss order must be positive");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule<R>>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[m];
  if (!slot) slot = std::make_unique<GaussRule<R>>(build_rule<R>(m));
  return *slot;
}

template <class R>
void composite_gauss(const R& a, const R& b, int panels, int m, std::vector<R>& x,
                     std::vector<R>& w) {
  const GaussRule<R>& g = gauss_legendre<R>(m);
  x.clear();
  w.clear();
  x.reserve(static_cast<std::size_t>(panels) * m);
  w.reserve(static_cast<std::size_t>(panels) * m);
  const R h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const R lo = a + h * p;
    const R half = h / 2;
    const R mid = lo + half;
    for (int k = 0; k < m; ++k) {
      x.push_back(mid + half * g.nodes[k]);
      w.push_back(half * g.weights[k]);
    }
  }
}

int panels_for_rate(double length, double rate, double kappa, int min_panels) {
  if (!(length > 0.0)) return min_panels;
  const double p = std::ceil(length * rate / kappa);
  if (!std::isfinite(p) || p > 5e7) throw std::runtime_error("panel count out of range");
  return std::max(min_panels, static_cast<int>(p));
}

int gauss_order_for_digits(double digits, double kappa) {
  // Truncation model for e^{i kappa x/2} on [-1,1]: (kappa/2)^{2m} / (2m)!.
  const double half = kappa / 2.0;
  for (int m = 4; m < 400; ++m) {
    const double log10_err = 2 * m * std::log10(half) - std::lgamma(2.0 * m + 1.0) / std::log(10.0);
    if (log10_err < -digits) return m;
  }
  return 400;
}

int worker_count() {
  if (const char* s = std::getenv("HEATRECON_THREADS")) {
    const int v = std::atoi(s);
    if (v > 0) return v;
  }
  const unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 1 : static_cast<int>(h);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const int workers = static_cast<int>(std::min<std::size_t>(worker_count(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    constexpr std::size_t chunk = 64;
    for (;;) {
      const std::size_t lo = next.fetch_add(chunk);
      if (lo >= n) return;
      const std::size_t hi = std::min(n, lo + chunk);
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int k = 1; k < workers; ++k) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

GaussRule<double> gauss_jacobi_unit(int m, double a) {
  if (m < 1) throw std::invalid_argument("Gauss-Jacobi order must be positive");
  if (!(a >= 0.0)) throw std::invalid_argument("Gauss-Jacobi exponent must be nonnegative");
  // Golub-Welsch on [-1, 1] for (1 - x)^a, then u = (1 + x) / 2.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    const double s = 2.0 * k + a;
    J(k, k) = k == 0 ? -a / (a + 2.0) : -a * a / (s * (s + 2.0));
    if (k + 1 < m) {
      const double kk = k + 1.0;
      const double s1 = 2.0 * kk + a;
      const double b2 = 4.0 * kk * (kk + a) * kk * (kk + a) / (s1 * s1 * (s1 + 1.0) * (s1 - 1.0));
      J(k, k + 1) = J(k + 1, k) = std::sqrt(b2);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mu0 = std::pow(2.0, a + 1.0) / (a + 1.0);
  GaussRule<double> r;
  r.nodes.resize(m);
  r.weights.resize(m);
  const double scale = std::pow(2.0, -a - 1.0);
  for (int i = 0; i < m; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    r.nodes[i] = 0.5 * (1.0 + es.eigenvalues()(i));
    r.weights[i] = mu0 * v0 * v0 * scale;
  }
  return r;
}

template const GaussRule<double>& gauss_legendre<double>(int);
template const GaussRule<Extended50>& gauss_legendre<Extended50>(int);
template const GaussRule<Extended100>& gauss_legendre<Extended100>(int);
template void composite_gauss<double>(const double&, const double&, int, int,
                                      std::vector<double>&, std::vector<double>&);
template void composite_gauss<Extended50>(const Extended50&, const Extended50&, int, int,
                                          std::vector<Extended50>&, std::vector<Extended50>&);
template void composite_gauss<Extended100>(const Extended100&, const Extended100&, int, int,
                                           std::vector<Extended100>&, std::vector<Extended100>&);

}  // namespace heatrecon
