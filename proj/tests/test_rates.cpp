#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "irscoex/orderstats.hpp"
#include "irscoex/rates.hpp"
#include "irscoex/rng.hpp"

using namespace irscoex;
using namespace irscoex::rates;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

LinkBudget sample_link() {
  LinkBudget b;
  b.snr = 1e9;
  b.k = {16, 32, 2, 3, 2e-9, 5e-10};
  b.q = {32, 16, 4, 2, 1e-9, 3e-9};
  return b;
}

UeBudget random_budget(std::mt19937_64& g) {
  UeBudget b;
  b.n_in = 4 << static_cast<int>(uniform_below(g, 6));
  b.n_oob = 4 << static_cast<int>(uniform_below(g, 6));
  b.l_in = 1 + static_cast<int>(uniform_below(g, std::min(b.n_in, 12)));
  b.l_oob = 1 + static_cast<int>(uniform_below(g, std::min(b.n_oob, 12)));
  b.beta_in = std::pow(10.0, -4 + 2 * uniform01(g));
  b.beta_oob = std::pow(10.0, -4 + 2 * uniform01(g));
  return b;
}

}  // namespace

TEST_CASE("budget validation") {
  UeBudget b{16, 8, 2, 3, 1e-6, 1e-6};
  CHECK_NOTHROW(validate(b));
  b.l_in = 17;
  CHECK_THROWS_AS(validate(b), std::invalid_argument);
  b = {16, 8, 2, 9, 1e-6, 1e-6};
  CHECK_THROWS_AS(validate(b), std::invalid_argument);
  b = {0, 8, 1, 1, 1e-6, 1e-6};
  CHECK_THROWS_AS(validate(b), std::invalid_argument);
  b = {16, 8, 2, 3, 0.0, 1e-6};
  CHECK_THROWS_AS(validate(b), std::invalid_argument);
}

TEST_CASE("power blocks against hand-evaluated single-path forms") {
  const UeBudget b{8, 4, 1, 1, 1e-4, 9e-4};
  CHECK(inband_power(b) == doctest::Approx(64 * 1e-4).epsilon(1e-13));
  CHECK(oob_power(b) == doctest::Approx(16 * 9e-4).epsilon(1e-13));
  // cross block at single paths: (pi/2) n_in n_oob f(1)^2 sqrt(beta product),
  // with f(1)^2 = pi/4
  CHECK(cross_power(b) == doctest::Approx(kPi / 2 * 32 * (kPi / 4) * 3e-4).epsilon(1e-13));

  const UeBudget c{16, 32, 3, 5, 2e-5, 7e-6};
  namespace os = orderstats;
  CHECK(inband_power(c) ==
        doctest::Approx(256.0 / 3 * os::mean_max_sq(3) * os::mean_max_sq(3) * 2e-5));
  CHECK(oob_power(c) == doctest::Approx(1024.0 / 5 * 7e-6));
  const double fa = os::mean_max_abs(3);
  CHECK(cross_power(c) ==
        doctest::Approx(kPi * 16 * 32 / (2 * std::sqrt(15.0)) * fa * fa * std::sqrt(2e-5 * 7e-6)));
}

TEST_CASE("event probabilities form the product distribution") {
  const LinkBudget b = sample_link();
  const double px = static_cast<double>(b.q.l_oob) / b.q.n_oob;  // reflector X at user q
  const double py = static_cast<double>(b.k.l_oob) / b.k.n_oob;  // reflector Y at user k
  CHECK(pr_event(b, EventLabel::A) == doctest::Approx(px * py).epsilon(1e-14));
  CHECK(pr_event(b, EventLabel::B) == doctest::Approx(px * (1 - py)).epsilon(1e-14));
  CHECK(pr_event(b, EventLabel::C) == doctest::Approx((1 - px) * py).epsilon(1e-14));
  double sum = 0;
  for (EventLabel ev : {EventLabel::A, EventLabel::B, EventLabel::C, EventLabel::D})
    sum += pr_event(b, ev);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("conditional rates per event and scheme") {
  const LinkBudget b = sample_link();
  const SchemePolicy nco{SchemeKind::no_coop, 0.5, 0.5, 0.5};
  const SchemePolicy ts{SchemeKind::time_share, 0.5, 0.5, 0.5};
  const SchemePolicy jo{SchemeKind::joint_opt, 0.5, 0.5, 0.5};

  // event D: no reflector aligns, every scheme reduces to the in-band terms
  const SePair d = event_conditional_se(b, EventLabel::D, nco, 0);
  CHECK(d.k == doctest::Approx(std::log2(1 + b.snr * inband_power(b.k))).epsilon(1e-13));
  CHECK(d.q == doctest::Approx(std::log2(1 + b.snr * inband_power(b.q))).epsilon(1e-13));
  for (const auto& p : {ts, jo})
    for (int owner : {0, 1}) {
      const SePair other = event_conditional_se(b, EventLabel::D, p, owner);
      CHECK(other.k == doctest::Approx(d.k));
      CHECK(other.q == doctest::Approx(d.q));
    }

  // event B: only user q sees a matched rival; user k stays in-band only
  const SePair b_nco = event_conditional_se(b, EventLabel::B, nco, 0);
  const SePair b_ts1 = event_conditional_se(b, EventLabel::B, ts, 1);
  CHECK(b_nco.k == doctest::Approx(d.k));
  CHECK(b_ts1.k == doctest::Approx(d.k));
  CHECK(b_nco.q == doctest::Approx(std::log2(1 + b.snr * (inband_power(b.q) + oob_power(b.q)))));
  CHECK(b_ts1.q == doctest::Approx(std::log2(
                       1 + b.snr * (inband_power(b.q) + oob_power(b.q) + cross_power(b.q)))));

  // event A under time sharing: the owner's user gets the cross term
  const SePair a0 = event_conditional_se(b, EventLabel::A, ts, 0);
  const SePair a1 = event_conditional_se(b, EventLabel::A, ts, 1);
  CHECK(a0.k == doctest::Approx(std::log2(
                    1 + b.snr * (inband_power(b.k) + oob_power(b.k) + cross_power(b.k)))));
  CHECK(a0.q == doctest::Approx(std::log2(1 + b.snr * (inband_power(b.q) + oob_power(b.q)))));
  CHECK(a1.k == doctest::Approx(std::log2(1 + b.snr * (inband_power(b.k) + oob_power(b.k)))));

  // the optimized joint phase sits inside the expectation: no closed form
  CHECK_THROWS_AS(event_conditional_se(b, EventLabel::A, jo, 0), std::invalid_argument);

  // zeta blend of the two ownership branches
  const SePair mix = event_a_timeshare_se(b, 0.37);
  CHECK(mix.k == doctest::Approx(0.37 * a0.k + 0.63 * a1.k).epsilon(1e-12));
  CHECK(mix.q == doctest::Approx(0.37 * a0.q + 0.63 * a1.q).epsilon(1e-12));
}

TEST_CASE("per-user ergodic rate assembles the alignment mixture") {
  const UeBudget b{16, 32, 2, 3, 2e-9, 5e-10};
  const double snr = 1e9, zeta = 0.42;
  const double p = 3.0 / 32;
  const double a = inband_power(b), bb = oob_power(b), x = cross_power(b);
  const double expect = (1 - p) * std::log2(1 + snr * a) +
                        p * (zeta * std::log2(1 + snr * (a + bb + x)) +
                             (1 - zeta) * std::log2(1 + snr * (a + bb)));
  CHECK(ue_ergodic_se(snr, b, zeta, true) == doctest::Approx(expect).epsilon(1e-13));
  const double expect_nc =
      (1 - p) * std::log2(1 + snr * a) + p * std::log2(1 + snr * (a + bb));
  CHECK(ue_ergodic_se(snr, b, zeta, false) == doctest::Approx(expect_nc).epsilon(1e-13));
  CHECK(ue_baseline_se(snr, b) == doctest::Approx(std::log2(1 + snr * a)).epsilon(1e-13));

  // affine in the owned slot fraction
  const double r0 = ue_ergodic_se(snr, b, 0, true), r1 = ue_ergodic_se(snr, b, 1, true);
  for (double z : {0.1, 0.5, 0.9})
    CHECK(ue_ergodic_se(snr, b, z, true) == doctest::Approx(z * r1 + (1 - z) * r0).epsilon(1e-12));
  CHECK(r1 > r0);

  // a vanishing rival cascade recovers the baseline
  UeBudget far = b;
  far.beta_oob = 1e-30;
  CHECK(ue_ergodic_se(snr, far, 1, true) ==
        doctest::Approx(ue_baseline_se(snr, far)).epsilon(1e-9));
}

TEST_CASE("rival gain fades as its reflector grows") {
  UeBudget b{16, 64, 2, 4, 2e-9, 2e-9};
  const double snr = 1e9;
  double prev = 1e9;
  for (int n2 : {64, 256, 1024, 4096}) {
    b.n_oob = n2;
    const double diff = ue_ergodic_se(snr, b, 1, true) - ue_baseline_se(snr, b);
    CHECK(diff > 0);
    CHECK(diff < prev);
    prev = diff;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("oob gain expression and its snr limits") {
  auto g = make_stream(31, 0, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const std::vector<UeBudget> ues = {random_budget(g), random_budget(g)};
    for (bool co : {false, true}) {
      // identity: gain is the ergodic rate minus the baseline at full ownership
      double direct = 0;
      for (const auto& b : ues)
        direct += (ue_ergodic_se(1e8, b, 1, co) - ue_baseline_se(1e8, b)) / ues.size();
      CHECK(oob_se_gain(1e8, ues, co) == doctest::Approx(direct).epsilon(1e-11));
      CHECK(oob_se_gain(1e8, ues, co) >= 0);

      CHECK(oob_se_gain_low_snr(1e-6, ues, co) ==
            doctest::Approx(oob_se_gain(1e-6, ues, co)).epsilon(0.01));
      CHECK(oob_se_gain_high_snr(ues, co) ==
            doctest::Approx(oob_se_gain(1e8, ues, co)).epsilon(0.05));
    }
    // the cooperative part of the gain stays under its bound at high snr
    const double coop = oob_se_gain(1e8, ues, true) - oob_se_gain(1e8, ues, false);
    CHECK(coop <= coop_gain_bound(ues) + 1e-12);
  }
}

TEST_CASE("two-operator scheme summaries") {
  const std::vector<UeBudget> x = {{16, 32, 2, 3, 2e-9, 5e-10}, {16, 32, 1, 4, 1e-9, 1e-9}};
  const std::vector<UeBudget> y = {{32, 16, 4, 2, 1e-9, 3e-9}};
  const double snr = 1e9;

  const SePair nco = two_mo_sum_se(snr, x, y, {SchemeKind::no_coop, 0.5, 0.5, 0.5});
  double mean_x = 0;
  for (const auto& b : x) mean_x += ue_ergodic_se(snr, b, 0, false) / x.size();
  CHECK(nco.k == doctest::Approx(mean_x).epsilon(1e-13));

  const SePair ts = two_mo_sum_se(snr, x, y, {SchemeKind::time_share, 0.5, 0.5, 0.3});
  CHECK(ts.k == doctest::Approx((ue_ergodic_se(snr, x[0], 0.3, true) +
                                 ue_ergodic_se(snr, x[1], 0.3, true)) /
                                2));
  CHECK(ts.q == doctest::Approx(ue_ergodic_se(snr, y[0], 0.7, true)));

  const SePair jo = two_mo_sum_se(snr, x, y, {SchemeKind::joint_opt, 0.5, 0.5, 0.5});
  CHECK(jo.k >= ts.k);  // per-side upper bounds
  CHECK(jo.q >= ts.q);
}

TEST_CASE("many-operator rate: reductions and orderings") {
  // at two operators the shared-parameter rate matches the two-operator form
  for (int n : {16, 64})
    for (int l : {1, 4})
      for (double zeta : {0.0, 0.5, 1.0})
        for (bool co : {false, true}) {
          const MultiMoBudget mb{2, n, l, 3e-9, 1e9, zeta, co};
          const UeBudget ub{n, n, l, l, 3e-9, 3e-9};
          CHECK(multi_mo_rate(mb) ==
                doctest::Approx(ue_ergodic_se(1e9, ub, zeta, co)).epsilon(1e-9));
          CHECK(multi_mo_baseline(mb) == doctest::Approx(ue_baseline_se(1e9, ub)).epsilon(1e-12));
        }

  // full alignment probability collapses the mixture onto the conditioned rate
  const MultiMoBudget full{3, 8, 8, 1e-8, 1e8, 0.6, true};
  CHECK(multi_mo_conditioned_rate(full) == doctest::Approx(multi_mo_rate(full)).epsilon(1e-12));

  // more rivals can only add reflected power
  double prev = 0;
  for (int m = 2; m <= 5; ++m) {
    const MultiMoBudget mb{m, 64, 4, 1e-8, 1e8, 1.0, true};
    const double r = multi_mo_rate(mb);
    if (m > 2) CHECK(r >= prev);
    CHECK(r >= multi_mo_baseline(mb));
    prev = r;
  }

  const MultiMoBudget c1{4, 64, 4, 1e-8, 1e8, 1.0, true};
  MultiMoBudget c0 = c1;
  c0.zeta1 = 0.0;
  CHECK(multi_mo_conditioned_rate(c1) >= multi_mo_conditioned_rate(c0));

  const MultiMoGains gains = multi_mo_gains(c1);
  CHECK(gains.oob_gain >= 0);
  CHECK(gains.coop_bound >= 0);

  MultiMoBudget bad = c1;
  bad.l = 100;
  CHECK_THROWS_AS(rates::validate(bad), std::invalid_argument);
  bad = c1;
  bad.m_ops = 1;
  CHECK_THROWS_AS(rates::validate(bad), std::invalid_argument);
}
