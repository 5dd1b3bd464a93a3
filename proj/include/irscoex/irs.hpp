#pragma once

#include <utility>

#include "irscoex/channel.hpp"

// Per-operator reflector control: in-band steering, detection of accidental
// out-of-band alignments, the four 2-operator alignment events, and the
// overall-phase choices of the three cooperation schemes, including the
// guarded single-step Newton optimizer for the joint scheme.

namespace irscoex {

// both / only reflector X / only reflector Y / neither rival reflector
// aligned to the other operator's scheduled UE
enum class EventLabel { A, B, C, D };

enum class SchemeKind { joint_opt, time_share, no_coop };

struct SchemePolicy {
  SchemeKind kind = SchemeKind::no_coop;
  double w_k = 0.5, w_q = 0.5;  // joint-opt weights (sum forced to 1 on validation)
  double zeta = 0.5;            // fraction of slots operator X owns under time sharing
  bool co() const { return kind != SchemeKind::no_coop; }
};

// steer the UE's in-band reflector at its dominant path, cancelling that
// path's hop phases so the in-band contribution lands at angle overall_phase
IrsSetting configure_inband(const UeChannel& ue, int irs_id, double overall_phase);

// one UE's view of which reflectors currently point at one of its paths
struct AlignmentOutcome {
  std::vector<int> matched_path;     // per reflector: path index, or -1
  std::vector<double> phase_offset;  // per reflector: residual phase of the matched path
  int aligned_count = 0;             // number of aligned rival reflectors
};

AlignmentOutcome detect_alignment(const UeChannel& ue, const std::vector<IrsSetting>& settings);

EventLabel classify_event(bool x_aligned_to_q, bool y_aligned_to_k);

// Effective two-UE channel for one slot. in_* and oob_* are the magnitude
// terms (they carry N/sqrt(L) and sqrt(beta)); phi_a / phi_b the residual
// phases of the matched rival paths. x, v, y, z are the substitutions the
// Newton step works on; snr is folded into all four so x + v cos(.) is
// exactly 1 + snr |h_k|^2 and stays positive.
struct ChannelTerms {
  double snr = 1;
  double in_k = 0, oob_k = 0;
  double in_q = 0, oob_q = 0;
  double phi_a = 0, phi_b = 0;
  double x() const { return 1 + snr * (in_k * in_k + oob_k * oob_k); }
  double v() const { return 2 * snr * in_k * oob_k; }
  double y() const { return 1 + snr * (in_q * in_q + oob_q * oob_q); }
  double z() const { return 2 * snr * in_q * oob_q; }
};

// w_k log2(x + v cos(phi + phi_a)) + w_q log2(y + z cos(phi - phi_b)),
// the weighted sum-SE as a function of phi = phi_2 - phi_1
double weighted_sum_se(const ChannelTerms& t, double w_k, double w_q, double phi);

// single guarded Newton step from the better of the two coherent endpoints
// (-phi_a and +phi_b); never returns a phase with lower objective than the
// starting point; result wrapped to [-pi, pi)
double newton_phase(const ChannelTerms& t, double w_k, double w_q);

// exhaustive reference: best of `points` uniformly spaced phases in [-pi, pi)
double grid_phase(const ChannelTerms& t, double w_k, double w_q, int points);

// scheme-driven (phi_1, phi_2) for one slot; slot_owner (0 = X, 1 = Y) is
// read only under time sharing
std::pair<double, double> choose_overall_phases(const SchemePolicy& policy, const ChannelTerms& t,
                                                EventLabel event, int slot_owner);

double wrap_pm_pi(double x);

}  // namespace irscoex
