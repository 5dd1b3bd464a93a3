#pragma once

// Order statistics of i.i.d. unit-variance circularly-symmetric complex
// Gaussian draws: the expected maximum magnitude f(n), the expected maximum
// squared magnitude g(n), and the coherence ratio psi(l) = f(l)^2 / g(l) that
// caps the coherent-combining gain. Plus the binomial alignment-count model
// for many rival reflectors.

namespace irscoex::orderstats {

// E[max of n i.i.d. Rayleigh(sigma^2 = 1) magnitudes]. Evaluated by adaptive
// quadrature of 1 - (1 - exp(-x^2))^n over [0, inf); the literal alternating
// binomial sum cancels catastrophically past n ~ 25. Cached per n.
double mean_max_abs(int n);

// E[max of n i.i.d. unit-mean exponential powers] = n-th harmonic number.
double mean_max_sq(int n);

// mean_max_abs(l)^2 / mean_max_sq(l), strictly inside (0, 1) by Jensen.
double coherence_ratio(int l);

// Literal alternating-sum forms, kept only as small-n cross-checks.
double mean_max_abs_sum(int n);
double mean_max_sq_sum(int n);

// Number of rival reflectors and the chance each one independently points at
// one of a given UE's resolvable paths.
struct AlignModel {
  int num_oob_irs = 0;      // M - 1
  double align_prob = 0.0;  // L / N
};

// Pr(exactly m rivals align): binomial pmf over m = 0 .. num_oob_irs.
double event_pmf(const AlignModel& e, int m);

}  // namespace irscoex::orderstats
