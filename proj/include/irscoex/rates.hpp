#pragma once

#include <vector>

#include "irscoex/irs.hpp"

// Closed-form ergodic spectral efficiencies at the Jensen level: per-event
// conditional rates, per-UE and per-operator ergodic rates under the three
// cooperation schemes, the out-of-band gain expressions with their SNR
// limits, and the M-operator generalizations. Everything here is linear
// (no dB) and works at the log2(1 + snr E|h|^2) level of approximation;
// truth-testing against sample averages lives in the sim module.

namespace irscoex::rates {

// one UE's budget as seen from its serving operator
struct UeBudget {
  int n_in = 1, n_oob = 1;          // element counts: own and rival reflector
  int l_in = 1, l_oob = 1;          // resolvable path counts on each
  double beta_in = 1, beta_oob = 1; // cascade losses (linear)
};

void validate(const UeBudget& b);  // throws std::invalid_argument

// Jensen-level pieces of E|h|^2 (no snr):
double inband_power(const UeBudget& b);  // (n_in^2 / l_in) g(l_in)^2 beta_in
double oob_power(const UeBudget& b);     // (n_oob^2 / l_oob) beta_oob
double cross_power(const UeBudget& b);   // (pi n_in n_oob / (2 sqrt(l_in l_oob))) f(l_in)^2 sqrt(beta_in beta_oob)

struct SePair {
  double k = 0, q = 0;  // bits/s/Hz for operator X's and Y's scheduled UE
};

// two-operator budget: UE-k served by X (reflector 1), UE-q by Y (reflector 2)
struct LinkBudget {
  double snr = 1;
  UeBudget k;  // k.n_in = N1, k.n_oob = N2
  UeBudget q;  // q.n_in = N2, q.n_oob = N1
};

double pr_event(const LinkBudget& b, EventLabel ev);

// conditional Jensen SEs for one event under one scheme; slot_owner picks the
// time-share branch (0 = X, 1 = Y). The joint scheme under event A has no
// closed form (the optimized phase sits inside the expectation) and throws.
SePair event_conditional_se(const LinkBudget& b, EventLabel ev, const SchemePolicy& p, int slot_owner);

// zeta-blended event-A pair under time sharing
SePair event_a_timeshare_se(const LinkBudget& b, double zeta);

// per-UE ergodic SE: alignment-probability mixture of in-band-only,
// incoherent, and (when co) coherent branches; zeta_own is the slot fraction
// owned by this UE's operator
double ue_ergodic_se(double snr, const UeBudget& b, double zeta_own, bool co);

// in-band-only baseline (rival reflector absent)
double ue_baseline_se(double snr, const UeBudget& b);

// per-operator ergodic sum-SE under round-robin over per-UE budgets. The
// joint scheme returns each side's upper bound (time share at zeta 1 for X
// and 0 for Y); exact joint-opt values come from the simulator.
SePair two_mo_sum_se(double snr, const std::vector<UeBudget>& x_ues,
                     const std::vector<UeBudget>& y_ues, const SchemePolicy& p);

// operator X's ergodic gain from the rival reflector's reflections
double oob_se_gain(double snr, const std::vector<UeBudget>& x_ues, bool co);
double oob_se_gain_low_snr(double snr, const std::vector<UeBudget>& x_ues, bool co);
double oob_se_gain_high_snr(const std::vector<UeBudget>& x_ues, bool co);

// cap on the cooperation part of the gain: mean of (l_oob/n_oob) *
// log2(1 + psi(l_in) pi/4) over UEs; valid at high snr
double coop_gain_bound(const std::vector<UeBudget>& x_ues);

// M operators sharing a common element count, path count, and cascade loss
struct MultiMoBudget {
  int m_ops = 2;
  int n = 1;
  int l = 1;
  double beta = 1;
  double snr = 1;
  double zeta1 = 1;  // slot fraction owned by operator 1
  bool co = true;
};

void validate(const MultiMoBudget& b);

// operator 1's per-UE ergodic SE: binomial mixture over the number of
// simultaneously aligned rival reflectors
double multi_mo_rate(const MultiMoBudget& b);
double multi_mo_baseline(const MultiMoBudget& b);

// same rate conditioned on every rival reflector being aligned
double multi_mo_conditioned_rate(const MultiMoBudget& b);

struct MultiMoGains {
  double oob_gain = 0;    // high-snr SE gain of having the rival reflectors
  double coop_bound = 0;  // cap on the cooperative part of that gain
};
MultiMoGains multi_mo_gains(const MultiMoBudget& b);

}  // namespace irscoex::rates
