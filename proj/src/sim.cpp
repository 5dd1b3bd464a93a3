#include "irscoex/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace irscoex::sim {

namespace {

constexpr long long kChunk = 4096;       // slots per deterministic partial sum
constexpr std::size_t kPhiCap = 20000;   // residual-phase samples kept for testing
constexpr std::uint64_t kUeDropTag = 0x75653a64726f70ull;  // UE-drop stream tag

double lg1p(double x) { return std::log2(1.0 + x); }

int worker_count() {
  const char* env = std::getenv("IRSCOEX_WORKERS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == nullptr || *end != '\0' || v < 1 || v > 256)
    throw std::runtime_error("IRSCOEX_WORKERS must be an integer in 1 .. 256");
  return static_cast<int>(v);
}

}  // namespace

void validate(const SystemConfig& c) {
  const std::size_t m = static_cast<std::size_t>(c.num_operators);
  if (c.num_operators < 2) throw std::invalid_argument("config: num_operators must be >= 2");
  if (c.elements.size() != m) throw std::invalid_argument("config: elements needs one entry per operator");
  if (c.ues.size() != m) throw std::invalid_argument("config: ues needs one entry per operator");
  if (c.paths.size() != m) throw std::invalid_argument("config: paths needs one row per operator");
  for (std::size_t i = 0; i < m; ++i) {
    if (c.elements[i] < 1) throw std::invalid_argument("config: elements must be >= 1");
    if (c.ues[i] < 1) throw std::invalid_argument("config: ues must be >= 1");
    if (c.paths[i].size() != m)
      throw std::invalid_argument("config: each paths row needs one entry per reflector");
    for (std::size_t j = 0; j < m; ++j)
      if (c.paths[i][j] < 1 || c.paths[i][j] > c.elements[j])
        throw std::invalid_argument("config: paths requires 1 <= L <= N for every (operator, reflector)");
  }
  if (!(c.snr > 0) || !std::isfinite(c.snr))
    throw std::invalid_argument("config: snr must be positive and finite");
  if (c.slots < 1) throw std::invalid_argument("config: slots must be >= 1");
  if (c.geometry.bs.size() != m || c.geometry.irs.size() != m)
    throw std::invalid_argument("config: geometry needs one BS and one reflector per operator");
  if (!(c.geometry.d0 > 0)) throw std::invalid_argument("config: geometry d0 must be positive");
  if (c.geometry.alpha < 0) throw std::invalid_argument("config: geometry alpha must be >= 0");
  if (!(c.geometry.ue_region.hi.x > c.geometry.ue_region.lo.x) ||
      !(c.geometry.ue_region.hi.y > c.geometry.ue_region.lo.y))
    throw std::invalid_argument("config: ue_region must be a non-degenerate rectangle");
  if (c.scheme.zeta < 0 || c.scheme.zeta > 1)
    throw std::invalid_argument("config: scheme zeta outside [0, 1]");
  if (c.scheme.kind == SchemeKind::joint_opt && (!(c.scheme.w_k > 0) || !(c.scheme.w_q > 0)))
    throw std::invalid_argument("config: joint_opt weights must be positive");
  if (c.num_operators > 2) {
    if (c.scheme.kind == SchemeKind::joint_opt)
      throw std::invalid_argument("config: joint_opt is only defined for 2 operators");
    for (std::size_t i = 0; i < m; ++i) {
      if (c.elements[i] != c.elements[0])
        throw std::invalid_argument("config: >2 operators require a common element count");
      for (std::size_t j = 0; j < m; ++j)
        if (c.paths[i][j] != c.paths[0][0])
          throw std::invalid_argument("config: >2 operators require a common path count");
    }
  }
  if (c.with_grid_opt && (c.scheme.kind != SchemeKind::joint_opt || c.num_operators != 2))
    throw std::invalid_argument("config: grid reference applies to 2-operator joint_opt only");
  if (c.with_grid_opt && c.grid_points < 2)
    throw std::invalid_argument("config: grid_points must be >= 2");
}

bool owns_slot_x(long long t, double zeta) {
  return std::floor((t + 1) * zeta) - std::floor(t * zeta) >= 1.0;
}

void EventStats::merge(const EventStats& o) {
  count += o.count;
  se_k += o.se_k;
  se_q += o.se_q;
  pow_k += o.pow_k;
  pow_q += o.pow_q;
  pow2_k += o.pow2_k;
  pow2_q += o.pow2_q;
  dom_k += o.dom_k;
  dom2_k += o.dom2_k;
  dom4_k += o.dom4_k;
  oob_k += o.oob_k;
  oob2_k += o.oob2_k;
  oob4_k += o.oob4_k;
  dom_q += o.dom_q;
  dom2_q += o.dom2_q;
  dom4_q += o.dom4_q;
  oob_q += o.oob_q;
  oob2_q += o.oob2_q;
  oob4_q += o.oob4_q;
}

Campaign make_campaign(const SystemConfig& cfg) {
  validate(cfg);
  Campaign c;
  c.cfg = cfg;
  // joint-opt weights act normalized
  if (cfg.scheme.kind == SchemeKind::joint_opt) {
    const double total = cfg.scheme.w_k + cfg.scheme.w_q;
    c.cfg.scheme.w_k = cfg.scheme.w_k / total;
    c.cfg.scheme.w_q = cfg.scheme.w_q / total;
  }

  const int m = cfg.num_operators;
  const auto& geo = cfg.geometry;
  auto drop = make_stream(cfg.seed, kUeDropTag, 0);
  c.ue_pos.resize(m);
  c.beta.resize(m);
  c.budgets.resize(m);
  for (int op = 0; op < m; ++op) {
    c.ue_pos[op].resize(cfg.ues[op]);
    c.beta[op].resize(cfg.ues[op]);
    c.budgets[op].resize(cfg.ues[op]);
    for (int u = 0; u < cfg.ues[op]; ++u) {
      Vec2 pos{geo.ue_region.lo.x + uniform01(drop) * (geo.ue_region.hi.x - geo.ue_region.lo.x),
               geo.ue_region.lo.y + uniform01(drop) * (geo.ue_region.hi.y - geo.ue_region.lo.y)};
      c.ue_pos[op][u] = pos;
      auto& row = c.beta[op][u];
      row.resize(m);
      for (int j = 0; j < m; ++j)
        row[j] = path_loss(geo, geo.bs[op], geo.irs[j]) * path_loss(geo, geo.irs[j], pos);
      if (cfg.balanced_oob_pathloss)
        for (int j = 0; j < m; ++j)
          if (j != op) row[j] = row[op];

      const int other = (op + 1) % m;  // the rival reflector in the 2-operator view
      auto& b = c.budgets[op][u];
      b.n_in = cfg.elements[op];
      b.n_oob = cfg.elements[other];
      b.l_in = cfg.paths[op][op];
      b.l_oob = cfg.paths[op][other];
      b.beta_in = row[op];
      b.beta_oob = row[other];
    }
  }
  return c;
}

namespace {

// scratch buffers reused across slots by one worker
struct SlotScratch {
  std::vector<UeChannel> ue;
  std::vector<IrsSetting> settings;
  std::vector<AlignmentOutcome> outcome;
};

void run_slot_impl(const Campaign& c, long long t, SlotOutput& out, SlotScratch& scratch) {
  const auto& cfg = c.cfg;
  const int m = cfg.num_operators;
  auto g = make_stream(cfg.seed, cfg.campaign_id, static_cast<std::uint64_t>(t));

  out.se.assign(m, 0.0);
  out.se_no_oob.assign(m, 0.0);
  out.se_grid.clear();

  auto& ue = scratch.ue;
  auto& settings = scratch.settings;
  auto& outcome = scratch.outcome;
  ue.assign(m, UeChannel{});
  settings.assign(m, IrsSetting{});
  outcome.assign(m, AlignmentOutcome{});

  // scheduled UE per operator, round robin
  std::vector<int> sched(m);
  for (int op = 0; op < m; ++op) sched[op] = static_cast<int>(t % cfg.ues[op]);

  // in-band sections first: the rival draws may be conditioned on the
  // resulting reflector steering when force_oob_align is set
  for (int op = 0; op < m; ++op) {
    auto& u = ue[op];
    u.in_band_irs = op;
    u.elements = cfg.elements;
    u.pathloss = c.beta[op][sched[op]];
    u.paths.resize(m);
    const int l_in = cfg.paths[op][op];
    const auto idx = sample_distinct(g, cfg.elements[op], l_in);
    auto& list = u.paths[op];
    list.resize(l_in);
    int best = 0;
    double best_mag = -1;
    for (int p = 0; p < l_in; ++p) {
      list[p].angle_index = idx[p];
      list[p].gain_bs_irs = complex_normal(g);
      list[p].gain_irs_ue = complex_normal(g);
      const double mag = std::abs(list[p].gain_bs_irs) * std::abs(list[p].gain_irs_ue);
      if (mag > best_mag) {
        best_mag = mag;
        best = p;
      }
    }
    u.dominant_path = best;
  }
  for (int op = 0; op < m; ++op) settings[op] = configure_inband(ue[op], op, 0.0);

  // rival sections
  for (int op = 0; op < m; ++op) {
    auto& u = ue[op];
    for (int j = 0; j < m; ++j) {
      if (j == op) continue;
      const int l = cfg.paths[op][j];
      const auto idx = cfg.force_oob_align
                           ? sample_distinct_containing(g, cfg.elements[j], l,
                                                        settings[j].aligned_angle_index)
                           : sample_distinct(g, cfg.elements[j], l);
      auto& list = u.paths[j];
      list.resize(l);
      for (int p = 0; p < l; ++p) {
        list[p].angle_index = idx[p];
        list[p].gain_bs_irs = complex_normal(g);
        list[p].gain_irs_ue = complex_normal(g);
      }
    }
    outcome[op] = detect_alignment(u, settings);
  }
  out.aligned_count_1 = outcome[0].aligned_count;

  const auto dom_mag = [&](int op) {
    const auto& p = ue[op].paths[op][ue[op].dominant_path];
    return std::abs(p.gain_bs_irs) * std::abs(p.gain_irs_ue);
  };
  const auto matched_mag = [&](int op, int j) {
    const int p = outcome[op].matched_path[j];
    if (p < 0) return 0.0;
    const auto& path = ue[op].paths[j][p];
    return std::abs(path.gain_bs_irs) * std::abs(path.gain_irs_ue);
  };
  const auto in_scale = [&](int op, int j) {
    return cfg.elements[j] / std::sqrt(static_cast<double>(cfg.paths[op][j])) *
           std::sqrt(c.beta[op][sched[op]][j]);
  };

  if (m == 2) {
    ChannelTerms terms;
    terms.snr = cfg.snr;
    terms.in_k = in_scale(0, 0) * dom_mag(0);
    terms.oob_k = in_scale(0, 1) * matched_mag(0, 1);
    terms.in_q = in_scale(1, 1) * dom_mag(1);
    terms.oob_q = in_scale(1, 0) * matched_mag(1, 0);
    terms.phi_a = outcome[0].phase_offset[1];
    terms.phi_b = outcome[1].phase_offset[0];

    out.k_matched = outcome[0].matched_path[1] >= 0;
    out.q_matched = outcome[1].matched_path[0] >= 0;
    out.event = classify_event(out.q_matched, out.k_matched);
    out.dom_k = dom_mag(0);
    out.oob_k = out.k_matched ? matched_mag(0, 1) : 0.0;
    out.dom_q = dom_mag(1);
    out.oob_q = out.q_matched ? matched_mag(1, 0) : 0.0;
    out.phi_a = terms.phi_a;

    const int owner = owns_slot_x(t, cfg.scheme.zeta) ? 0 : 1;
    const auto [phi1, phi2] = choose_overall_phases(c.cfg.scheme, terms, out.event, owner);
    settings[0].overall_phase = phi1;
    settings[1].overall_phase = phi2;

    const double pk = std::norm(scalar_channel(ue[0], settings));
    const double pq = std::norm(scalar_channel(ue[1], settings));
    out.pow_k = pk;
    out.pow_q = pq;
    out.se[0] = lg1p(cfg.snr * pk);
    out.se[1] = lg1p(cfg.snr * pq);
    out.se_no_oob[0] = lg1p(cfg.snr * terms.in_k * terms.in_k);
    out.se_no_oob[1] = lg1p(cfg.snr * terms.in_q * terms.in_q);

    if (cfg.with_grid_opt) {
      // re-run the slot with the grid-search phase through the full channel so
      // the comparison against the one-step optimizer is like for like
      const double phi = grid_phase(terms, c.cfg.scheme.w_k, c.cfg.scheme.w_q, cfg.grid_points);
      settings[0].overall_phase = 0.0;
      settings[1].overall_phase = phi;
      out.se_grid.resize(2);
      out.se_grid[0] = lg1p(cfg.snr * std::norm(scalar_channel(ue[0], settings)));
      out.se_grid[1] = lg1p(cfg.snr * std::norm(scalar_channel(ue[1], settings)));
    }
    return;
  }

  // M > 2: time share hands each slot to one operator, whose scheduled UE
  // gets every aligned rival reflector rotated onto its phase; no_coop
  // leaves all overall phases at zero
  if (cfg.scheme.kind == SchemeKind::time_share) {
    const bool op1_owns = owns_slot_x(t, cfg.scheme.zeta);
    const int owner = op1_owns ? 0 : 1 + static_cast<int>(t % (m - 1));
    for (int j = 0; j < m; ++j) {
      if (j == owner) continue;
      if (outcome[owner].matched_path[j] >= 0)
        settings[j].overall_phase = wrap_pm_pi(-outcome[owner].phase_offset[j]);
    }
  }
  for (int op = 0; op < m; ++op) {
    const double p = std::norm(scalar_channel(ue[op], settings));
    out.se[op] = lg1p(cfg.snr * p);
    const double in_mag = in_scale(op, op) * dom_mag(op);
    out.se_no_oob[op] = lg1p(cfg.snr * in_mag * in_mag);
  }
}

struct Accum {
  std::vector<double> se, se_no_oob, se_grid;
  std::array<EventStats, 4> events{};
  std::vector<long long> mhist;
  std::vector<double> phis;

  explicit Accum(int m, bool grid)
      : se(m, 0.0), se_no_oob(m, 0.0), se_grid(grid ? m : 0, 0.0), mhist(m, 0) {}

  void add(const SlotOutput& o, int m) {
    for (int i = 0; i < m; ++i) {
      se[i] += o.se[i];
      se_no_oob[i] += o.se_no_oob[i];
    }
    if (!se_grid.empty())
      for (int i = 0; i < m; ++i) se_grid[i] += o.se_grid[i];
    mhist[o.aligned_count_1] += 1;
    if (m != 2) return;

    auto& ev = events[static_cast<int>(o.event)];
    ev.count += 1;
    ev.se_k += o.se[0];
    ev.se_q += o.se[1];
    ev.pow_k += o.pow_k;
    ev.pow_q += o.pow_q;
    ev.pow2_k += o.pow_k * o.pow_k;
    ev.pow2_q += o.pow_q * o.pow_q;
    const double d2k = o.dom_k * o.dom_k, d2q = o.dom_q * o.dom_q;
    const double o2k = o.oob_k * o.oob_k, o2q = o.oob_q * o.oob_q;
    ev.dom_k += o.dom_k;
    ev.dom2_k += d2k;
    ev.dom4_k += d2k * d2k;
    ev.oob_k += o.oob_k;
    ev.oob2_k += o2k;
    ev.oob4_k += o2k * o2k;
    ev.dom_q += o.dom_q;
    ev.dom2_q += d2q;
    ev.dom4_q += d2q * d2q;
    ev.oob_q += o.oob_q;
    ev.oob2_q += o2q;
    ev.oob4_q += o2q * o2q;
    if (o.k_matched) phis.push_back(o.phi_a);
  }

  void merge(const Accum& o) {
    for (std::size_t i = 0; i < se.size(); ++i) {
      se[i] += o.se[i];
      se_no_oob[i] += o.se_no_oob[i];
      mhist[i] += o.mhist[i];
    }
    for (std::size_t i = 0; i < se_grid.size(); ++i) se_grid[i] += o.se_grid[i];
    for (int e = 0; e < 4; ++e) events[e].merge(o.events[e]);
    for (double p : o.phis) {
      if (phis.size() >= kPhiCap) break;
      phis.push_back(p);
    }
  }
};

// scheme-matched closed forms for the report's analytic columns
void fill_analytics(const Campaign& c, RateReport& r) {
  const auto& cfg = c.cfg;
  const int m = cfg.num_operators;
  r.analytic_se.assign(m, 0.0);
  r.analytic_se_no_oob.assign(m, 0.0);
  r.rel_error.assign(m, 0.0);

  for (int op = 0; op < m; ++op) {
    double zeta_own;
    bool co = true;
    if (cfg.scheme.kind == SchemeKind::no_coop) {
      zeta_own = 0;
      co = false;
    } else if (cfg.scheme.kind == SchemeKind::joint_opt) {
      zeta_own = 1;  // per-operator upper bound
    } else if (m == 2) {
      zeta_own = (op == 0) ? cfg.scheme.zeta : 1 - cfg.scheme.zeta;
    } else {
      zeta_own = (op == 0) ? cfg.scheme.zeta : (1 - cfg.scheme.zeta) / (m - 1);
    }

    double sum = 0, sum_base = 0;
    for (const auto& b : c.budgets[op]) {
      sum_base += rates::ue_baseline_se(cfg.snr, b);
      if (m == 2) {
        if (cfg.force_oob_align) {
          // conditioned on the rival alignment being present every slot
          const double s = cfg.snr;
          const double a = rates::inband_power(b), bb = rates::oob_power(b),
                       x = rates::cross_power(b);
          sum += zeta_own * lg1p(s * (a + bb + (co ? x : 0.0))) +
                 (1 - zeta_own) * lg1p(s * (a + bb));
        } else {
          sum += rates::ue_ergodic_se(cfg.snr, b, zeta_own, co);
        }
      } else {
        rates::MultiMoBudget mb;
        mb.m_ops = m;
        mb.n = cfg.elements[op];
        mb.l = cfg.paths[op][op];
        mb.beta = b.beta_in;
        mb.snr = cfg.snr;
        mb.zeta1 = zeta_own;
        mb.co = co;
        sum += cfg.force_oob_align ? rates::multi_mo_conditioned_rate(mb)
                                   : rates::multi_mo_rate(mb);
      }
    }
    r.analytic_se[op] = sum / static_cast<double>(c.budgets[op].size());
    r.analytic_se_no_oob[op] = sum_base / static_cast<double>(c.budgets[op].size());
    if (r.analytic_se[op] > 0)
      r.rel_error[op] = std::abs(r.per_operator_se[op] - r.analytic_se[op]) / r.analytic_se[op];
  }
}

}  // namespace

void run_slot(const Campaign& c, long long t, SlotOutput& out) {
  SlotScratch scratch;
  run_slot_impl(c, t, out, scratch);
}

RateReport run_campaign(const SystemConfig& cfg) {
  const Campaign c = make_campaign(cfg);
  const int m = cfg.num_operators;
  const bool grid = cfg.with_grid_opt;
  const long long slots = cfg.slots;
  const long long chunks = (slots + kChunk - 1) / kChunk;

  std::vector<Accum> parts(static_cast<std::size_t>(chunks), Accum(m, grid));
  const int workers = std::min<long long>(worker_count(), chunks);
  std::atomic<long long> next{0};
  auto work = [&] {
    SlotScratch scratch;
    SlotOutput out;
    for (;;) {
      const long long i = next.fetch_add(1);
      if (i >= chunks) break;
      auto& part = parts[static_cast<std::size_t>(i)];
      const long long hi = std::min(slots, (i + 1) * kChunk);
      for (long long t = i * kChunk; t < hi; ++t) {
        run_slot_impl(c, t, out, scratch);
        part.add(out, m);
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  Accum total(m, grid);
  for (const auto& p : parts) total.merge(p);

  RateReport r;
  r.num_operators = m;
  r.slots = slots;
  r.per_operator_se.resize(m);
  r.per_operator_se_no_oob.resize(m);
  if (grid) r.per_operator_se_grid.resize(m);
  for (int i = 0; i < m; ++i) {
    r.per_operator_se[i] = total.se[i] / slots;
    r.per_operator_se_no_oob[i] = total.se_no_oob[i] / slots;
    if (grid) r.per_operator_se_grid[i] = total.se_grid[i] / slots;
  }
  r.events = total.events;
  r.align_histogram = total.mhist;
  r.phi_a_samples = std::move(total.phis);
  fill_analytics(c, r);
  return r;
}

SystemConfig apply_sweep_value(const SystemConfig& base, const std::string& axis, double value) {
  SystemConfig cfg = base;
  const auto as_int = [&](const char* what) {
    const double r = std::round(value);
    if (std::abs(value - r) > 1e-9 || r < 1)
      throw std::invalid_argument(std::string("sweep: axis ") + what +
                                  " needs a positive integer value");
    return static_cast<int>(r);
  };
  if (axis == "n") {
    std::fill(cfg.elements.begin(), cfg.elements.end(), as_int("n"));
  } else if (axis == "n2") {
    if (cfg.num_operators != 2) throw std::invalid_argument("sweep: axis n2 needs 2 operators");
    cfg.elements[1] = as_int("n2");
  } else if (axis == "snr_db") {
    cfg.snr = std::pow(10.0, value / 10.0);
  } else if (axis == "zeta") {
    cfg.scheme.zeta = value;
  } else if (axis == "w_k") {
    if (value <= 0 || value >= 1)
      throw std::invalid_argument("sweep: axis w_k needs values strictly inside (0, 1)");
    cfg.scheme.w_k = value;
    cfg.scheme.w_q = 1 - value;
  } else if (axis == "m") {
    const int mm = as_int("m");
    if (static_cast<std::size_t>(mm) > base.elements.size())
      throw std::invalid_argument("sweep: axis m exceeds the configured operator count");
    cfg.num_operators = mm;
    cfg.elements.resize(mm);
    cfg.ues.resize(mm);
    cfg.paths.resize(mm);
    for (auto& row : cfg.paths) row.resize(mm);
    cfg.geometry.bs.resize(mm);
    cfg.geometry.irs.resize(mm);
  } else if (axis == "l") {
    const int l = as_int("l");
    for (auto& row : cfg.paths)
      for (auto& v : row) v = l;
  } else if (axis == "l2") {
    if (cfg.num_operators != 2) throw std::invalid_argument("sweep: axis l2 needs 2 operators");
    cfg.paths[0][1] = as_int("l2");
  } else if (axis == "slots") {
    cfg.slots = as_int("slots");
  } else {
    throw std::invalid_argument("sweep: unknown axis '" + axis + "'");
  }
  return cfg;
}

std::vector<SweepResult> sweep(const SystemConfig& base, const std::string& axis,
                               const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("sweep: at least one value required");
  std::vector<SweepResult> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    SystemConfig cfg = apply_sweep_value(base, axis, values[i]);
    cfg.campaign_id = base.campaign_id + 1 + i;
    out.push_back({values[i], run_campaign(cfg)});
  }
  return out;
}

}  // namespace irscoex::sim
