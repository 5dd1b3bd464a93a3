#include "irscoex/rates.hpp"

#include <cmath>
#include <stdexcept>

#include "irscoex/orderstats.hpp"

namespace irscoex::rates {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLn2 = 0.69314718055994530942;

using orderstats::event_pmf;
using orderstats::mean_max_abs;
using orderstats::mean_max_sq;

double lg1p(double x) { return std::log2(1.0 + x); }

double mean_over(const std::vector<UeBudget>& ues, auto&& per_ue) {
  if (ues.empty()) throw std::invalid_argument("rates: at least one UE budget required");
  double sum = 0;
  for (const auto& b : ues) {
    validate(b);
    sum += per_ue(b);
  }
  return sum / static_cast<double>(ues.size());
}

}  // namespace

void validate(const UeBudget& b) {
  if (b.n_in < 1 || b.n_oob < 1) throw std::invalid_argument("UeBudget: element counts must be >= 1");
  if (b.l_in < 1 || b.l_in > b.n_in) throw std::invalid_argument("UeBudget: need 1 <= l_in <= n_in");
  if (b.l_oob < 1 || b.l_oob > b.n_oob)
    throw std::invalid_argument("UeBudget: need 1 <= l_oob <= n_oob");
  if (!(b.beta_in > 0) || !(b.beta_oob > 0) || !std::isfinite(b.beta_in) || !std::isfinite(b.beta_oob))
    throw std::invalid_argument("UeBudget: path losses must be positive and finite");
}

double inband_power(const UeBudget& b) {
  const double g = mean_max_sq(b.l_in);
  return static_cast<double>(b.n_in) * b.n_in / b.l_in * g * g * b.beta_in;
}

double oob_power(const UeBudget& b) {
  return static_cast<double>(b.n_oob) * b.n_oob / b.l_oob * b.beta_oob;
}

double cross_power(const UeBudget& b) {
  const double f = mean_max_abs(b.l_in);
  return kPi * b.n_in * b.n_oob / (2.0 * std::sqrt(static_cast<double>(b.l_in) * b.l_oob)) * f * f *
         std::sqrt(b.beta_in * b.beta_oob);
}

double pr_event(const LinkBudget& b, EventLabel ev) {
  // rival reflector X points at one of UE-q's paths with prob l/n on its grid
  const double px = static_cast<double>(b.q.l_oob) / b.q.n_oob;
  const double py = static_cast<double>(b.k.l_oob) / b.k.n_oob;
  switch (ev) {
    case EventLabel::A: return px * py;
    case EventLabel::B: return px * (1 - py);
    case EventLabel::C: return (1 - px) * py;
    case EventLabel::D: return (1 - px) * (1 - py);
  }
  throw std::invalid_argument("pr_event: unknown event");
}

SePair event_conditional_se(const LinkBudget& b, EventLabel ev, const SchemePolicy& p, int slot_owner) {
  validate(b.k);
  validate(b.q);
  if (!(b.snr > 0) || !std::isfinite(b.snr))
    throw std::invalid_argument("LinkBudget: snr must be positive and finite");
  if (slot_owner != 0 && slot_owner != 1)
    throw std::invalid_argument("event_conditional_se: slot_owner must be 0 or 1");

  const double s = b.snr;
  const double ak = inband_power(b.k), bk = oob_power(b.k), xk = cross_power(b.k);
  const double aq = inband_power(b.q), bq = oob_power(b.q), xq = cross_power(b.q);

  const bool k_aligned = ev == EventLabel::A || ev == EventLabel::C;
  const bool q_aligned = ev == EventLabel::A || ev == EventLabel::B;

  bool k_coherent = false, q_coherent = false;
  switch (p.kind) {
    case SchemeKind::no_coop:
      break;
    case SchemeKind::time_share:
      k_coherent = k_aligned && slot_owner == 0;
      q_coherent = q_aligned && slot_owner == 1;
      break;
    case SchemeKind::joint_opt:
      if (ev == EventLabel::A)
        throw std::invalid_argument(
            "event_conditional_se: joint_opt under event A has no closed form");
      k_coherent = k_aligned;
      q_coherent = q_aligned;
      break;
  }

  SePair out;
  out.k = lg1p(s * (ak + (k_aligned ? bk + (k_coherent ? xk : 0.0) : 0.0)));
  out.q = lg1p(s * (aq + (q_aligned ? bq + (q_coherent ? xq : 0.0) : 0.0)));
  return out;
}

SePair event_a_timeshare_se(const LinkBudget& b, double zeta) {
  if (zeta < 0 || zeta > 1) throw std::invalid_argument("event_a_timeshare_se: zeta outside [0, 1]");
  SchemePolicy ts{SchemeKind::time_share, 0.5, 0.5, zeta};
  const SePair own_x = event_conditional_se(b, EventLabel::A, ts, 0);
  const SePair own_y = event_conditional_se(b, EventLabel::A, ts, 1);
  return {zeta * own_x.k + (1 - zeta) * own_y.k, zeta * own_x.q + (1 - zeta) * own_y.q};
}

double ue_ergodic_se(double snr, const UeBudget& b, double zeta_own, bool co) {
  validate(b);
  if (!(snr > 0) || !std::isfinite(snr))
    throw std::invalid_argument("ue_ergodic_se: snr must be positive and finite");
  if (zeta_own < 0 || zeta_own > 1)
    throw std::invalid_argument("ue_ergodic_se: zeta_own outside [0, 1]");
  const double p_align = static_cast<double>(b.l_oob) / b.n_oob;
  const double a = inband_power(b), bb = oob_power(b), x = cross_power(b);
  const double coherent = lg1p(snr * (a + bb + (co ? x : 0.0)));
  const double incoherent = lg1p(snr * (a + bb));
  return (1 - p_align) * lg1p(snr * a) + p_align * (zeta_own * coherent + (1 - zeta_own) * incoherent);
}

double ue_baseline_se(double snr, const UeBudget& b) {
  validate(b);
  return lg1p(snr * inband_power(b));
}

SePair two_mo_sum_se(double snr, const std::vector<UeBudget>& x_ues,
                     const std::vector<UeBudget>& y_ues, const SchemePolicy& p) {
  double zeta_x, zeta_y;
  bool co = true;
  switch (p.kind) {
    case SchemeKind::time_share:
      zeta_x = p.zeta;
      zeta_y = 1 - p.zeta;
      break;
    case SchemeKind::joint_opt:  // per-operator upper bounds
      zeta_x = 1;
      zeta_y = 1;
      break;
    case SchemeKind::no_coop:
      zeta_x = 0;
      zeta_y = 0;
      co = false;
      break;
    default:
      throw std::invalid_argument("two_mo_sum_se: unknown scheme");
  }
  SePair out;
  out.k = mean_over(x_ues, [&](const UeBudget& b) { return ue_ergodic_se(snr, b, zeta_x, co); });
  out.q = mean_over(y_ues, [&](const UeBudget& b) { return ue_ergodic_se(snr, b, zeta_y, co); });
  return out;
}

double oob_se_gain(double snr, const std::vector<UeBudget>& x_ues, bool co) {
  return mean_over(x_ues, [&](const UeBudget& b) {
    const double p = static_cast<double>(b.l_oob) / b.n_oob;
    const double boost = oob_power(b) + (co ? cross_power(b) : 0.0);
    return p * std::log2(1.0 + boost / (1.0 / snr + inband_power(b)));
  });
}

double oob_se_gain_low_snr(double snr, const std::vector<UeBudget>& x_ues, bool co) {
  return mean_over(x_ues, [&](const UeBudget& b) {
    const double p = static_cast<double>(b.l_oob) / b.n_oob;
    return p * (oob_power(b) + (co ? cross_power(b) : 0.0)) * snr / kLn2;
  });
}

double oob_se_gain_high_snr(const std::vector<UeBudget>& x_ues, bool co) {
  return mean_over(x_ues, [&](const UeBudget& b) {
    const double p = static_cast<double>(b.l_oob) / b.n_oob;
    const double boost = oob_power(b) + (co ? cross_power(b) : 0.0);
    return p * std::log2(1.0 + boost / inband_power(b));
  });
}

double coop_gain_bound(const std::vector<UeBudget>& x_ues) {
  return mean_over(x_ues, [&](const UeBudget& b) {
    const double p = static_cast<double>(b.l_oob) / b.n_oob;
    return p * std::log2(1.0 + orderstats::coherence_ratio(b.l_in) * kPi / 4.0);
  });
}

void validate(const MultiMoBudget& b) {
  if (b.m_ops < 2) throw std::invalid_argument("MultiMoBudget: need at least 2 operators");
  if (b.n < 1 || b.l < 1 || b.l > b.n) throw std::invalid_argument("MultiMoBudget: need 1 <= l <= n");
  if (!(b.beta > 0) || !(b.snr > 0)) throw std::invalid_argument("MultiMoBudget: beta and snr must be positive");
  if (b.zeta1 < 0 || b.zeta1 > 1) throw std::invalid_argument("MultiMoBudget: zeta1 outside [0, 1]");
}

namespace {

// coherent combining of m aligned rival reflections on top of the in-band
// term: g^2 + m + m (pi/2)(f^2 + pi (m-1) / 8), in units of (n^2/l) beta
double aligned_kernel(int l, int m, bool co) {
  const double g2 = mean_max_sq(l) * mean_max_sq(l);
  if (m == 0) return g2;
  const double f = mean_max_abs(l);
  const double cross = co ? m * (kPi / 2.0) * (f * f + kPi * (m - 1) / 8.0) : 0.0;
  return g2 + m + cross;
}

}  // namespace

double multi_mo_rate(const MultiMoBudget& b) {
  validate(b);
  const orderstats::AlignModel model{b.m_ops - 1, static_cast<double>(b.l) / b.n};
  const double unit = static_cast<double>(b.n) * b.n / b.l * b.beta;
  double rate = 0;
  for (int m = 0; m <= b.m_ops - 1; ++m) {
    const double coherent = std::log2(1.0 + b.snr * unit * aligned_kernel(b.l, m, b.co));
    const double incoherent = std::log2(1.0 + b.snr * unit * aligned_kernel(b.l, m, false));
    rate += event_pmf(model, m) * (b.zeta1 * coherent + (1 - b.zeta1) * incoherent);
  }
  return rate;
}

double multi_mo_baseline(const MultiMoBudget& b) {
  validate(b);
  const double unit = static_cast<double>(b.n) * b.n / b.l * b.beta;
  return std::log2(1.0 + b.snr * unit * aligned_kernel(b.l, 0, false));
}

double multi_mo_conditioned_rate(const MultiMoBudget& b) {
  validate(b);
  const double unit = static_cast<double>(b.n) * b.n / b.l * b.beta;
  const int m = b.m_ops - 1;
  const double coherent = std::log2(1.0 + b.snr * unit * aligned_kernel(b.l, m, b.co));
  const double incoherent = std::log2(1.0 + b.snr * unit * aligned_kernel(b.l, m, false));
  return b.zeta1 * coherent + (1 - b.zeta1) * incoherent;
}

MultiMoGains multi_mo_gains(const MultiMoBudget& b) {
  validate(b);
  const orderstats::AlignModel model{b.m_ops - 1, static_cast<double>(b.l) / b.n};
  const double g2 = mean_max_sq(b.l) * mean_max_sq(b.l);
  const double g = mean_max_sq(b.l);
  const double psi = orderstats::coherence_ratio(b.l);
  MultiMoGains out;
  for (int m = 1; m <= b.m_ops - 1; ++m) {
    const double pmf = event_pmf(model, m);
    out.oob_gain += pmf * std::log2(1.0 + (aligned_kernel(b.l, m, b.co) - g2) / g2);
    out.coop_bound +=
        pmf * std::log2(1.0 + kPi * std::sqrt(static_cast<double>(m)) / 4.0 * (psi + kPi * (m - 1) / (8.0 * g)));
  }
  return out;
}

}  // namespace irscoex::rates
