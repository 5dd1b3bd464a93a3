#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "irscoex/orderstats.hpp"
#include "irscoex/rng.hpp"

using namespace irscoex;
namespace os = irscoex::orderstats;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// independent oracle for E[max of n Rayleigh magnitudes]: substitute
// u = exp(-x^2) in the survival-function integral and evaluate the resulting
// endpoint-singular integral with tanh_sinh in 50-digit arithmetic
double mean_max_abs_oracle(int n) {
  using big = boost::multiprecision::cpp_bin_float_50;
  boost::math::quadrature::tanh_sinh<big> integrator;
  const auto f = [n](const big& u) -> big {
    using boost::multiprecision::log;
    using boost::multiprecision::pow;
    using boost::multiprecision::sqrt;
    const big one(1);
    return (one - pow(one - u, n)) / (2 * u * sqrt(-log(u)));
  };
  return static_cast<double>(integrator.integrate(f, big(0), big(1)));
}

}  // namespace

TEST_CASE("mean max magnitude: closed small-n values") {
  // n = 1 is the plain Rayleigh mean sqrt(pi)/2
  CHECK(os::mean_max_abs(1) == doctest::Approx(std::sqrt(kPi) / 2).epsilon(1e-13));
  // alternating-sum form stays stable for small n and must agree
  for (int n = 1; n <= 20; ++n)
    CHECK(os::mean_max_abs(n) == doctest::Approx(os::mean_max_abs_sum(n)).epsilon(1e-10));
}

TEST_CASE("mean max magnitude: high-precision quadrature oracle") {
  for (int n : {2, 10, 16, 64, 256, 1024})
    CHECK(os::mean_max_abs(n) == doctest::Approx(mean_max_abs_oracle(n)).epsilon(5e-13));
}

TEST_CASE("mean max power equals harmonic numbers exactly") {
  using boost::multiprecision::cpp_rational;
  cpp_rational h = 0;
  for (int n = 1; n <= 64; ++n) {
    h += cpp_rational(1, n);
    CHECK(os::mean_max_sq(n) == doctest::Approx(static_cast<double>(h)).epsilon(1e-12));
  }
  for (int n = 1; n <= 12; ++n)
    CHECK(os::mean_max_sq_sum(n) == doctest::Approx(os::mean_max_sq(n)).epsilon(1e-10));
}

TEST_CASE("monotonicity and coherence ratio bounds") {
  CHECK(os::coherence_ratio(1) == doctest::Approx(kPi / 4).epsilon(1e-12));
  double prev_f = 0, prev_g = 0, prev_psi = 1;
  for (int n = 1; n <= 128; ++n) {
    const double f = os::mean_max_abs(n), g = os::mean_max_sq(n), psi = os::coherence_ratio(n);
    CHECK(f > prev_f);
    CHECK(g > prev_g);
    CHECK(psi > 0);
    CHECK(psi < 1);  // strict by Jensen on the max
    if (n > 1) CHECK(psi > prev_psi);
    prev_f = f;
    prev_g = g;
    prev_psi = psi;
  }
}

TEST_CASE("cached evaluations are stable") {
  CHECK(os::mean_max_abs(37) == os::mean_max_abs(37));
  CHECK(os::coherence_ratio(37) == os::coherence_ratio(37));
}

TEST_CASE("alignment-count pmf") {
  const os::AlignModel e{3, 5.0 / 64.0};
  double sum = 0;
  for (int m = 0; m <= 3; ++m) sum += os::event_pmf(e, m);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));

  const double p = e.align_prob;
  CHECK(os::event_pmf(e, 2) == doctest::Approx(3 * p * p * (1 - p)).epsilon(1e-14));

  CHECK(os::event_pmf({4, 0.0}, 0) == doctest::Approx(1.0));
  CHECK(os::event_pmf({4, 1.0}, 4) == doctest::Approx(1.0));

  CHECK_THROWS_AS(os::event_pmf({-1, 0.5}, 0), std::invalid_argument);
  CHECK_THROWS_AS(os::event_pmf({3, 1.5}, 0), std::invalid_argument);
  CHECK_THROWS_AS(os::event_pmf({3, 0.5}, 4), std::invalid_argument);
  CHECK_THROWS_AS(os::event_pmf({3, 0.5}, -1), std::invalid_argument);
}

TEST_CASE("monte carlo agreement for the max of 10 draws") {
  const int reps = 200000, n = 10;
  auto g = make_stream(11, 0, 0);
  double s_abs = 0, s2_abs = 0, s_sq = 0, s2_sq = 0;
  for (int r = 0; r < reps; ++r) {
    double best_sq = 0;
    for (int i = 0; i < n; ++i) best_sq = std::max(best_sq, std::norm(complex_normal(g)));
    const double best_abs = std::sqrt(best_sq);
    s_abs += best_abs;
    s2_abs += best_abs * best_abs;
    s_sq += best_sq;
    s2_sq += best_sq * best_sq;
  }
  const auto mean_se = [reps](double s, double s2) {
    const double m = s / reps;
    return std::pair{m, std::sqrt((s2 / reps - m * m) / reps)};
  };
  const auto [m_abs, se_abs] = mean_se(s_abs, s2_abs);
  const auto [m_sq, se_sq] = mean_se(s_sq, s2_sq);
  CHECK(std::abs(m_abs - os::mean_max_abs(n)) < 4 * se_abs);
  CHECK(std::abs(m_sq - os::mean_max_sq(n)) < 4 * se_sq);
}
