#include "irscoex/irs.hpp"

#include <cmath>
#include <stdexcept>

namespace irscoex {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double wrap_pm_pi(double x) {
  double w = std::fmod(x + kPi, 2 * kPi);
  if (w < 0) w += 2 * kPi;
  return w - kPi;
}

IrsSetting configure_inband(const UeChannel& ue, int irs_id, double overall_phase) {
  if (irs_id != ue.in_band_irs)
    throw std::invalid_argument("configure_inband: not this UE's in-band reflector");
  const auto& dom = ue.paths[irs_id][ue.dominant_path];
  IrsSetting s;
  s.irs_id = irs_id;
  s.aligned_angle_index = dom.angle_index;
  s.conj_phase = -(std::arg(dom.gain_bs_irs) + std::arg(dom.gain_irs_ue));
  s.overall_phase = wrap_pm_pi(overall_phase);
  return s;
}

AlignmentOutcome detect_alignment(const UeChannel& ue, const std::vector<IrsSetting>& settings) {
  AlignmentOutcome out;
  out.matched_path.assign(ue.paths.size(), -1);
  out.phase_offset.assign(ue.paths.size(), 0.0);
  for (const auto& s : settings) {
    if (s.irs_id < 0 || static_cast<std::size_t>(s.irs_id) >= ue.paths.size())
      throw std::invalid_argument("detect_alignment: setting references unknown reflector");
    if (s.irs_id == ue.in_band_irs) continue;  // rivals only
    const auto& list = ue.paths[s.irs_id];
    for (std::size_t p = 0; p < list.size(); ++p) {
      if (list[p].angle_index != s.aligned_angle_index) continue;
      out.matched_path[s.irs_id] = static_cast<int>(p);
      // residual phase of the matched reflection once the rival reflector's
      // own conjugate reference is applied
      out.phase_offset[s.irs_id] =
          wrap_pm_pi(std::arg(list[p].gain_bs_irs) + std::arg(list[p].gain_irs_ue) + s.conj_phase);
      ++out.aligned_count;
      break;
    }
  }
  return out;
}

EventLabel classify_event(bool x_aligned_to_q, bool y_aligned_to_k) {
  if (x_aligned_to_q && y_aligned_to_k) return EventLabel::A;
  if (x_aligned_to_q) return EventLabel::B;
  if (y_aligned_to_k) return EventLabel::C;
  return EventLabel::D;
}

double weighted_sum_se(const ChannelTerms& t, double w_k, double w_q, double phi) {
  const double pk = t.x() + t.v() * std::cos(phi + t.phi_a);
  const double pq = t.y() + t.z() * std::cos(phi - t.phi_b);
  return w_k * std::log2(pk) + w_q * std::log2(pq);
}

double newton_phase(const ChannelTerms& t, double w_k, double w_q) {
  const double x = t.x(), v = t.v(), y = t.y(), z = t.z();
  if (!(std::isfinite(x) && std::isfinite(v) && std::isfinite(y) && std::isfinite(z)))
    throw std::invalid_argument("newton_phase: non-finite channel terms");

  // candidate endpoints: coherent for UE-k, coherent for UE-q; ties favor X
  const double cand_k = wrap_pm_pi(-t.phi_a);
  const double cand_q = wrap_pm_pi(t.phi_b);
  const double obj_k = weighted_sum_se(t, w_k, w_q, cand_k);
  const double obj_q = weighted_sum_se(t, w_k, w_q, cand_q);
  const double init = (obj_k >= obj_q) ? cand_k : cand_q;
  const double obj_init = std::max(obj_k, obj_q);

  // one Newton step on the product objective 2^(weighted sum-SE) = P^wk Q^wq:
  // with g1 = (ln f)' and g2 = (ln f)'', the step is f'/f'' = g1/(g1^2 + g2)
  const double ck = std::cos(init + t.phi_a), sk = std::sin(init + t.phi_a);
  const double cq = std::cos(init - t.phi_b), sq = std::sin(init - t.phi_b);
  const double pk = x + v * ck, pq = y + z * cq;
  const double g1 = -(w_k * v * sk / pk + w_q * z * sq / pq);
  const double g2 = -(w_k * v * (x * ck + v) / (pk * pk) + w_q * z * (y * cq + z) / (pq * pq));
  const double curvature = g1 * g1 + g2;
  if (std::abs(curvature) < 1e-12) return init;

  const double stepped = wrap_pm_pi(init - g1 / curvature);
  // accept only if the step did not lose objective
  return (weighted_sum_se(t, w_k, w_q, stepped) >= obj_init) ? stepped : init;
}

double grid_phase(const ChannelTerms& t, double w_k, double w_q, int points) {
  if (points < 1) throw std::invalid_argument("grid_phase: need at least one point");
  double best_phi = -kPi, best = weighted_sum_se(t, w_k, w_q, -kPi);
  for (int i = 1; i < points; ++i) {
    const double phi = -kPi + 2 * kPi * i / points;
    const double obj = weighted_sum_se(t, w_k, w_q, phi);
    if (obj > best) {
      best = obj;
      best_phi = phi;
    }
  }
  return best_phi;
}

std::pair<double, double> choose_overall_phases(const SchemePolicy& policy, const ChannelTerms& t,
                                                EventLabel event, int slot_owner) {
  switch (policy.kind) {
    case SchemeKind::no_coop:
      return {0.0, 0.0};

    case SchemeKind::time_share: {
      const bool k_boost = event == EventLabel::A || event == EventLabel::C;
      const bool q_boost = event == EventLabel::A || event == EventLabel::B;
      if (slot_owner == 0 && k_boost) return {wrap_pm_pi(t.phi_a), 0.0};
      if (slot_owner == 1 && q_boost) return {0.0, wrap_pm_pi(t.phi_b)};
      return {0.0, 0.0};
    }

    case SchemeKind::joint_opt:
      switch (event) {
        case EventLabel::A:
          return {0.0, newton_phase(t, policy.w_k, policy.w_q)};
        case EventLabel::B:
          return {0.0, wrap_pm_pi(t.phi_b)};  // only UE-q can gain; make it coherent
        case EventLabel::C:
          return {wrap_pm_pi(t.phi_a), 0.0};
        case EventLabel::D:
          return {0.0, 0.0};
      }
  }
  throw std::invalid_argument("choose_overall_phases: unknown scheme/event combination");
}

}  // namespace irscoex
