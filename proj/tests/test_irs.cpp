#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "irscoex/irs.hpp"
#include "irscoex/rng.hpp"

using namespace irscoex;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

ChannelTerms random_terms(std::mt19937_64& g) {
  ChannelTerms t;
  t.snr = std::pow(10.0, -6 + 14 * uniform01(g));
  t.in_k = std::pow(10.0, -4 + 4 * uniform01(g));
  t.oob_k = t.in_k * (0.05 + 0.95 * uniform01(g));
  t.in_q = std::pow(10.0, -4 + 4 * uniform01(g));
  t.oob_q = t.in_q * (0.05 + 0.95 * uniform01(g));
  t.phi_a = -kPi + 2 * kPi * uniform01(g);
  t.phi_b = -kPi + 2 * kPi * uniform01(g);
  return t;
}

}  // namespace

TEST_CASE("phase wrapping") {
  CHECK(wrap_pm_pi(0.1) == doctest::Approx(0.1));
  CHECK(wrap_pm_pi(kPi) == doctest::Approx(-kPi));
  CHECK(wrap_pm_pi(3 * kPi) == doctest::Approx(-kPi));
  CHECK(wrap_pm_pi(-kPi) == doctest::Approx(-kPi));
  for (double x : {-1e6, -17.3, -2 * kPi, 5.5, 123.456, 1e6}) {
    const double w = wrap_pm_pi(x);
    CHECK(w >= -kPi);
    CHECK(w < kPi);
    CHECK(std::abs(std::remainder(w - x, 2 * kPi)) < 1e-6);
  }
}

TEST_CASE("event classification truth table") {
  CHECK(classify_event(true, true) == EventLabel::A);
  CHECK(classify_event(true, false) == EventLabel::B);
  CHECK(classify_event(false, true) == EventLabel::C);
  CHECK(classify_event(false, false) == EventLabel::D);
}

TEST_CASE("in-band steering cancels the dominant path's hop phases") {
  auto g = make_stream(21, 0, 0);
  const UeChannel ue = sample_ue_channel(g, 0, {16, 8}, {3, 2}, {1e-6, 1e-6});
  const IrsSetting s = configure_inband(ue, 0, 0.7);
  CHECK(s.irs_id == 0);
  CHECK(s.aligned_angle_index == ue.paths[0][ue.dominant_path].angle_index);
  CHECK(s.overall_phase == doctest::Approx(0.7));

  // with the rival steered away, the scalar channel sits at the overall phase
  std::vector<IrsSetting> set = {s, {1, -1, 0.0, 0.0}};
  int free_idx = 0;
  while (free_idx == ue.paths[1][0].angle_index || free_idx == ue.paths[1][1].angle_index)
    ++free_idx;
  set[1].aligned_angle_index = free_idx;
  const std::complex<double> h = scalar_channel(ue, set);
  CHECK(std::arg(h) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("alignment detection reports the matched path and its residual phase") {
  auto g = make_stream(22, 0, 0);
  const UeChannel ue = sample_ue_channel(g, 0, {16, 8}, {3, 2}, {1e-6, 4e-6});

  std::vector<IrsSetting> set(2);
  set[0] = configure_inband(ue, 0, 0.0);
  set[1] = {1, ue.paths[1][1].angle_index, 1.234, 0.0};

  const AlignmentOutcome out = detect_alignment(ue, set);
  REQUIRE(out.matched_path.size() == 2);
  CHECK(out.matched_path[0] == -1);  // the in-band reflector is never a rival
  CHECK(out.matched_path[1] == 1);
  CHECK(out.aligned_count == 1);

  // the oob term's phase is overall_phase + the reported offset; isolate it
  // by steering the own reflector at an angle outside the ue's path set
  std::vector<IrsSetting> solo = set;
  solo[1].overall_phase = 0.4;
  const auto is_own_path = [&](int idx) {
    for (const auto& p : ue.paths[0])
      if (p.angle_index == idx) return true;
    return false;
  };
  int own_free = 0;
  while (is_own_path(own_free)) ++own_free;
  solo[0].aligned_angle_index = own_free;
  const std::complex<double> oob = scalar_channel(ue, solo);
  CHECK(wrap_pm_pi(std::arg(oob) - solo[1].overall_phase) ==
        doctest::Approx(out.phase_offset[1]).epsilon(1e-9));

  // steer the rival at a non-path angle: nothing matches
  int free_idx = 0;
  while (free_idx == ue.paths[1][0].angle_index || free_idx == ue.paths[1][1].angle_index)
    ++free_idx;
  set[1].aligned_angle_index = free_idx;
  const AlignmentOutcome none = detect_alignment(ue, set);
  CHECK(none.matched_path[1] == -1);
  CHECK(none.aligned_count == 0);
}

TEST_CASE("weighted sum objective evaluates the closed form") {
  ChannelTerms t;
  t.snr = 2.0;
  t.in_k = 1.5;
  t.oob_k = 0.5;
  t.in_q = 0.8;
  t.oob_q = 0.2;
  t.phi_a = 0.3;
  t.phi_b = -1.1;
  const double phi = 0.9;
  const double pk = t.x() + t.v() * std::cos(phi + t.phi_a);
  const double pq = t.y() + t.z() * std::cos(phi - t.phi_b);
  CHECK(weighted_sum_se(t, 0.25, 0.75, phi) ==
        doctest::Approx(0.25 * std::log2(pk) + 0.75 * std::log2(pq)).epsilon(1e-13));
  // x of the substitution is exactly 1 + snr |h_k|^2 at the coherent point
  CHECK(t.x() + t.v() ==
        doctest::Approx(1 + t.snr * (t.in_k + t.oob_k) * (t.in_k + t.oob_k)).epsilon(1e-13));
}

TEST_CASE("per-user envelopes peak at their coherent phases") {
  auto g = make_stream(23, 0, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const ChannelTerms t = random_terms(g);
    const double peak_k = weighted_sum_se(t, 1, 0, wrap_pm_pi(-t.phi_a));
    const double peak_q = weighted_sum_se(t, 0, 1, wrap_pm_pi(t.phi_b));
    for (int i = 0; i < 256; ++i) {
      const double phi = -kPi + 2 * kPi * i / 256;
      CHECK(weighted_sum_se(t, 1, 0, phi) <= peak_k + 1e-12);
      CHECK(weighted_sum_se(t, 0, 1, phi) <= peak_q + 1e-12);
    }
  }
}

TEST_CASE("newton step: degenerate weights return the coherent endpoint") {
  auto g = make_stream(24, 0, 0);
  for (int rep = 0; rep < 50; ++rep) {
    ChannelTerms t = random_terms(g);
    CHECK(newton_phase(t, 1, 0) == doctest::Approx(wrap_pm_pi(-t.phi_a)).epsilon(1e-12));
    CHECK(newton_phase(t, 0, 1) == doctest::Approx(wrap_pm_pi(t.phi_b)).epsilon(1e-12));
    // both users coherent at the same phase: already stationary
    t.phi_b = wrap_pm_pi(-t.phi_a);
    CHECK(newton_phase(t, 0.5, 0.5) == doctest::Approx(wrap_pm_pi(-t.phi_a)).epsilon(1e-10));
  }
}

TEST_CASE("newton step never loses to its endpoints and nearly matches grid search") {
  auto g = make_stream(25, 0, 0);
  const int reps = 1000;
  int close = 0;
  for (int rep = 0; rep < reps; ++rep) {
    const ChannelTerms t = random_terms(g);
    const double w_k = 0.05 + 0.9 * uniform01(g), w_q = 1 - w_k;
    const double phi = newton_phase(t, w_k, w_q);
    CHECK(phi >= -kPi);
    CHECK(phi < kPi);
    const double got = weighted_sum_se(t, w_k, w_q, phi);
    const double end_k = weighted_sum_se(t, w_k, w_q, wrap_pm_pi(-t.phi_a));
    const double end_q = weighted_sum_se(t, w_k, w_q, wrap_pm_pi(t.phi_b));
    CHECK(got >= std::max(end_k, end_q) - 1e-12);
    const double best = weighted_sum_se(t, w_k, w_q, grid_phase(t, w_k, w_q, 10000));
    if (best - got <= 0.01 * std::abs(best)) ++close;
  }
  CHECK(close >= 950);
}

TEST_CASE("grid search: single-bump exactness and argument checking") {
  ChannelTerms t;
  t.snr = 10;
  t.in_k = 2;
  t.oob_k = 1;
  t.in_q = 1;
  t.oob_q = 0;  // z = 0: the objective depends on phi only through user k
  t.phi_a = 0.77;
  const double phi = grid_phase(t, 0.5, 0.5, 100000);
  CHECK(std::abs(wrap_pm_pi(phi + t.phi_a)) < 2 * kPi / 100000 + 1e-12);
  CHECK(grid_phase(t, 0.5, 0.5, 1) == doctest::Approx(-kPi));
  CHECK_THROWS_AS(grid_phase(t, 0.5, 0.5, 0), std::invalid_argument);
}

TEST_CASE("scheme phase choices") {
  auto g = make_stream(26, 0, 0);
  const ChannelTerms t = random_terms(g);
  const SchemePolicy nco{SchemeKind::no_coop, 0.5, 0.5, 0.5};
  const SchemePolicy ts{SchemeKind::time_share, 0.5, 0.5, 0.5};
  const SchemePolicy jo{SchemeKind::joint_opt, 0.7, 0.3, 0.5};

  for (EventLabel ev : {EventLabel::A, EventLabel::B, EventLabel::C, EventLabel::D})
    CHECK(choose_overall_phases(nco, t, ev, 0) == std::pair{0.0, 0.0});

  // owners boost their own user whenever that user's rival reflector aligns
  const auto cos_k = [&](std::pair<double, double> p) {
    return std::cos(p.second - p.first + t.phi_a);
  };
  const auto cos_q = [&](std::pair<double, double> p) {
    return std::cos(p.first - p.second + t.phi_b);
  };
  CHECK(cos_k(choose_overall_phases(ts, t, EventLabel::A, 0)) == doctest::Approx(1.0));
  CHECK(cos_k(choose_overall_phases(ts, t, EventLabel::C, 0)) == doctest::Approx(1.0));
  CHECK(cos_q(choose_overall_phases(ts, t, EventLabel::A, 1)) == doctest::Approx(1.0));
  CHECK(cos_q(choose_overall_phases(ts, t, EventLabel::B, 1)) == doctest::Approx(1.0));
  CHECK(choose_overall_phases(ts, t, EventLabel::B, 0) == std::pair{0.0, 0.0});
  CHECK(choose_overall_phases(ts, t, EventLabel::C, 1) == std::pair{0.0, 0.0});
  CHECK(choose_overall_phases(ts, t, EventLabel::D, 0) == std::pair{0.0, 0.0});

  // joint scheme: single-sided events boost the one user that can gain
  CHECK(cos_q(choose_overall_phases(jo, t, EventLabel::B, 0)) == doctest::Approx(1.0));
  CHECK(cos_k(choose_overall_phases(jo, t, EventLabel::C, 0)) == doctest::Approx(1.0));
  CHECK(choose_overall_phases(jo, t, EventLabel::D, 0) == std::pair{0.0, 0.0});
  const auto [p1, p2] = choose_overall_phases(jo, t, EventLabel::A, 0);
  CHECK(p1 == 0.0);
  CHECK(p2 == doctest::Approx(newton_phase(t, 0.7, 0.3)));
}
