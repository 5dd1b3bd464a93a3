#include "irscoex/orderstats.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace irscoex::orderstats {

namespace {

void require_positive(int n, const char* who) {
  if (n < 1) throw std::invalid_argument(std::string(who) + ": count must be >= 1");
}

// P(max <= x) = (1 - exp(-x^2))^n for unit-variance Rayleigh magnitudes;
// the mean is the integral of the upper tail.
double tail_integral(int n) {
  boost::math::quadrature::exp_sinh<double> quad;
  auto tail = [n](double x) {
    const double e = std::exp(-x * x);
    if (e >= 1.0) return 1.0;  // x == 0
    return -std::expm1(static_cast<double>(n) * std::log1p(-e));
  };
  return quad.integrate(tail, 1e-13);
}

}  // namespace

double mean_max_abs(int n) {
  require_positive(n, "mean_max_abs");
  static std::mutex mu;
  static std::unordered_map<int, double> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  const double value = tail_integral(n);
  std::lock_guard lock(mu);
  return cache.emplace(n, value).first->second;
}

double mean_max_sq(int n) {
  require_positive(n, "mean_max_sq");
  double h = 0;
  for (int i = 1; i <= n; ++i) h += 1.0 / i;
  return h;
}

double coherence_ratio(int l) {
  require_positive(l, "coherence_ratio");
  const double f = mean_max_abs(l);
  return f * f / mean_max_sq(l);
}

double mean_max_abs_sum(int n) {
  require_positive(n, "mean_max_abs_sum");
  const double half_sqrt_pi = 0.88622692545275801365;
  double sum = 0, binom = 1;  // binom = C(n-1, i)
  for (int i = 0; i < n; ++i) {
    const double term = binom / std::sqrt(static_cast<double>(i + 1) * (i + 1) * (i + 1));
    sum += (i % 2 == 0) ? term : -term;
    binom = binom * (n - 1 - i) / (i + 1);
  }
  return n * half_sqrt_pi * sum;
}

double mean_max_sq_sum(int n) {
  require_positive(n, "mean_max_sq_sum");
  double sum = 0, binom = 1;
  for (int i = 0; i < n; ++i) {
    const double term = binom / (static_cast<double>(i + 1) * (i + 1));
    sum += (i % 2 == 0) ? term : -term;
    binom = binom * (n - 1 - i) / (i + 1);
  }
  return n * sum;
}

double event_pmf(const AlignModel& e, int m) {
  if (e.num_oob_irs < 0) throw std::invalid_argument("event_pmf: num_oob_irs must be >= 0");
  if (e.align_prob < 0 || e.align_prob > 1)
    throw std::invalid_argument("event_pmf: align_prob must lie in [0, 1]");
  if (m < 0 || m > e.num_oob_irs)
    throw std::invalid_argument("event_pmf: m outside 0 .. num_oob_irs");
  double binom = 1;
  for (int i = 0; i < m; ++i) binom = binom * (e.num_oob_irs - i) / (i + 1);
  return binom * std::pow(e.align_prob, m) * std::pow(1 - e.align_prob, e.num_oob_irs - m);
}

}  // namespace irscoex::orderstats
