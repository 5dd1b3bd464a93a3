#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "irscoex/rates.hpp"

// Monte Carlo campaign engine. Each slot schedules one UE per operator
// (round robin), redraws every scheduled UE's channel, applies the
// cooperation scheme, and accumulates empirical ergodic sum-SE per operator
// together with per-event conditional statistics for validating the closed
// forms. Randomness is counter-based per (seed, campaign, slot), so any
// worker count reproduces identical results; partial sums merge in fixed
// chunk order.

namespace irscoex::sim {

struct SystemConfig {
  int num_operators = 2;
  std::vector<int> elements;            // N per operator's reflector
  std::vector<int> ues;                 // UEs per operator
  std::vector<std::vector<int>> paths;  // paths[op][irs]: L for that operator's UEs
  double snr = 1.0;                     // P / sigma^2, linear
  SchemePolicy scheme;
  Geometry geometry;
  int slots = 1000;
  std::uint64_t seed = 0;
  std::uint64_t campaign_id = 0;
  bool force_oob_align = false;        // condition every slot on full rival alignment
  bool balanced_oob_pathloss = false;  // copy each UE's in-band cascade loss onto its rival cascades
  bool with_grid_opt = false;          // also run the grid-search phase reference (joint_opt only)
  int grid_points = 10000;
};

void validate(const SystemConfig& c);  // throws std::invalid_argument

// deterministic time-share ownership: does operator X own slot t?
bool owns_slot_x(long long t, double zeta);

// accumulated conditional statistics for one alignment event (2-operator)
struct EventStats {
  long long count = 0;
  // running sums over slots where the event occurred: SE, |h|^2, |h|^4
  double se_k = 0, se_q = 0;
  double pow_k = 0, pow_q = 0;
  double pow2_k = 0, pow2_q = 0;
  // moments of the in-band dominant and matched-rival |gain product|
  double dom_k = 0, dom2_k = 0, dom4_k = 0;
  double oob_k = 0, oob2_k = 0, oob4_k = 0;
  double dom_q = 0, dom2_q = 0, dom4_q = 0;
  double oob_q = 0, oob2_q = 0, oob4_q = 0;
  void merge(const EventStats& o);
};

struct RateReport {
  int num_operators = 2;
  long long slots = 0;
  std::vector<double> per_operator_se;         // empirical ergodic sum-SE
  std::vector<double> per_operator_se_no_oob;  // same slots, in-band term only
  std::vector<double> per_operator_se_grid;    // grid-search reference (empty unless enabled)
  std::vector<double> analytic_se;             // scheme-matched closed forms
  std::vector<double> analytic_se_no_oob;
  std::vector<double> rel_error;               // |empirical - analytic| / analytic
  std::array<EventStats, 4> events;            // indexed by EventLabel (2-operator runs)
  std::vector<long long> align_histogram;      // slots by rival-alignment count at operator 1
  std::vector<double> phi_a_samples;           // residual phases for uniformity testing (capped)
};

// immutable per-campaign state: the UE drop and all cascade losses
struct Campaign {
  SystemConfig cfg;
  std::vector<std::vector<Vec2>> ue_pos;                // [op][ue]
  std::vector<std::vector<std::vector<double>>> beta;   // [op][ue][irs]
  std::vector<std::vector<rates::UeBudget>> budgets;    // [op][ue], 2-operator view
};

Campaign make_campaign(const SystemConfig& cfg);

struct SlotOutput {
  std::vector<double> se, se_no_oob, se_grid;  // per operator
  EventLabel event = EventLabel::D;            // 2-operator label
  int aligned_count_1 = 0;                     // rivals aligned to operator 1's UE
  // magnitudes feeding the per-event accumulators (2-operator runs)
  double pow_k = 0, pow_q = 0;
  double dom_k = 0, oob_k = 0;
  double dom_q = 0, oob_q = 0;
  double phi_a = 0;
  bool k_matched = false, q_matched = false;
};

void run_slot(const Campaign& c, long long t, SlotOutput& out);

// worker count from IRSCOEX_WORKERS (default 1); results are identical for
// any value
RateReport run_campaign(const SystemConfig& cfg);

struct SweepResult {
  double value = 0;
  RateReport report;
};

// applies one sweep value; axes: n, n2, snr_db, zeta, w_k, m, l, l2, slots
SystemConfig apply_sweep_value(const SystemConfig& base, const std::string& axis, double value);

// independent campaigns with per-value derived campaign ids (shared UE drop)
std::vector<SweepResult> sweep(const SystemConfig& base, const std::string& axis,
                               const std::vector<double>& values);

}  // namespace irscoex::sim
