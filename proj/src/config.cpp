#include "irscoex/config.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace irscoex {

namespace {

const std::set<std::string> kAxes = {"n",   "n2", "snr_db", "zeta", "w_k",
                                     "m",   "l",  "l2",     "slots"};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

[[noreturn]] void bad_key(const std::string& key, const std::string& constraint) {
  throw std::invalid_argument("config key '" + key + "': " + constraint);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) bad_key(key, "not a number: '" + v + "'");
    return d;
  } catch (const std::invalid_argument&) {
    bad_key(key, "not a number: '" + v + "'");
  } catch (const std::out_of_range&) {
    bad_key(key, "out of range: '" + v + "'");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  const double d = parse_double(key, v);
  if (d != std::floor(d)) bad_key(key, "expected an integer, got '" + v + "'");
  return static_cast<long long>(d);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  bad_key(key, "expected 0/1/true/false, got '" + v + "'");
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& tok : split(v, ',')) out.push_back(static_cast<int>(parse_int(key, tok)));
  return out;
}

Vec2 parse_point(const std::string& key, const std::string& v) {
  const auto parts = split(v, ',');
  if (parts.size() != 2) bad_key(key, "expected 'x,y', got '" + v + "'");
  return {parse_double(key, parts[0]), parse_double(key, parts[1])};
}

std::vector<Vec2> parse_points(const std::string& key, const std::string& v) {
  std::vector<Vec2> out;
  for (const auto& tok : split(v, ';')) out.push_back(parse_point(key, tok));
  return out;
}

// broadcast a 1-element list to the operator count
template <typename T>
std::vector<T> broadcast(const std::string& key, std::vector<T> v, int m) {
  if (v.size() == 1) v.assign(m, v[0]);
  if (v.size() != static_cast<std::size_t>(m))
    bad_key(key, "expected 1 or num_operators entries");
  return v;
}

using KeyMap = std::map<std::string, std::string>;

struct RawSections {
  KeyMap geometry, system, scheme, sweep;
};

RawSections tokenize(const std::string& text) {
  RawSections raw;
  KeyMap* cur = nullptr;
  std::string cur_name;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": malformed section header");
      cur_name = trim(line.substr(1, line.size() - 2));
      if (cur_name == "geometry") cur = &raw.geometry;
      else if (cur_name == "system") cur = &raw.system;
      else if (cur_name == "scheme") cur = &raw.scheme;
      else if (cur_name == "sweep") cur = &raw.sweep;
      else
        throw std::invalid_argument("config: unknown section [" + cur_name + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key=value");
    if (cur == nullptr)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": key outside any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (!cur->emplace(key, val).second)
      throw std::invalid_argument("config: duplicate key '" + key + "' in [" + cur_name + "]");
  }
  return raw;
}

// pop a key if present
bool take(KeyMap& m, const std::string& key, std::string& out) {
  const auto it = m.find(key);
  if (it == m.end()) return false;
  out = it->second;
  m.erase(it);
  return true;
}

void reject_leftovers(const KeyMap& m, const std::string& section) {
  if (!m.empty())
    throw std::invalid_argument("config: unknown key '" + m.begin()->first + "' in [" +
                                section + "]");
}

}  // namespace

ExperimentSpec parse_config(const std::string& text) {
  RawSections raw = tokenize(text);
  ExperimentSpec spec;
  sim::SystemConfig& b = spec.base;
  std::string v;

  // preset shortcut: nothing else may be configured besides the output target
  if (take(raw.system, "preset", v)) {
    if (!is_preset(v)) bad_key("preset", "unknown preset '" + v + "'");
    spec.preset = v;
    spec.output = take(raw.system, "output", v) ? v : ".";  // directory for preset CSVs
    const std::size_t extras =
        raw.geometry.size() + raw.system.size() + raw.scheme.size() + raw.sweep.size();
    if (extras != 0)
      throw std::invalid_argument(
          "config: a preset fully determines the experiment; remove key '" +
          (!raw.system.empty() ? raw.system.begin()->first
           : !raw.geometry.empty() ? raw.geometry.begin()->first
           : !raw.scheme.empty()   ? raw.scheme.begin()->first
                                   : raw.sweep.begin()->first) +
          "'");
    return spec;
  }

  if (take(raw.system, "num_operators", v))
    b.num_operators = static_cast<int>(parse_int("num_operators", v));
  const int m = b.num_operators;
  if (m < 2) bad_key("num_operators", "must be >= 2");

  b.elements = take(raw.system, "elements_per_irs", v)
                   ? broadcast("elements_per_irs", parse_int_list("elements_per_irs", v), m)
                   : std::vector<int>(m, 16);
  b.ues = take(raw.system, "ues_per_operator", v)
              ? broadcast("ues_per_operator", parse_int_list("ues_per_operator", v), m)
              : std::vector<int>(m, 1);
  if (take(raw.system, "paths", v)) {
    std::vector<std::vector<int>> rows;
    for (const auto& row : split(v, ';')) rows.push_back(parse_int_list("paths", row));
    rows = broadcast("paths", std::move(rows), m);
    for (auto& row : rows) row = broadcast("paths", std::move(row), m);
    b.paths = std::move(rows);
  } else {
    b.paths.assign(m, std::vector<int>(m, 1));
  }

  // geometry, defaulting to the standard two-operator layout
  Geometry& g = b.geometry;
  if (take(raw.geometry, "c0_db", v)) g.c0_db = parse_double("c0_db", v);
  if (take(raw.geometry, "d0", v)) g.d0 = parse_double("d0", v);
  if (take(raw.geometry, "alpha", v)) g.alpha = parse_double("alpha", v);
  if (take(raw.geometry, "bs", v)) g.bs = parse_points("bs", v);
  if (take(raw.geometry, "irs", v)) g.irs = parse_points("irs", v);
  if (take(raw.geometry, "ue_region", v)) {
    const auto pts = parse_points("ue_region", v);
    if (pts.size() != 2) bad_key("ue_region", "expected 'x0,y0;x1,y1'");
    g.ue_region = {pts[0], pts[1]};
  } else {
    g.ue_region = {{0, 0}, {200, 200}};
  }
  if (g.bs.empty() && g.irs.empty() && m == 2) {
    g.bs = {{0, 200}, {200, 0}};
    g.irs = {{0, 0}, {200, 200}};
  } else if (g.bs.empty() || g.irs.empty()) {
    throw std::invalid_argument(
        "config: geometry bs and irs are required unless num_operators is 2");
  }

  // transmit snr: exactly one way to state it
  {
    std::string snr_v, c0g_v;
    const bool has_snr = take(raw.system, "tx_snr_db", snr_v);
    const bool has_c0g = take(raw.system, "c0_gamma_db", c0g_v);
    if (has_snr && has_c0g)
      throw std::invalid_argument(
          "config: give exactly one of tx_snr_db and c0_gamma_db, not both");
    if (has_snr) b.snr = std::pow(10.0, parse_double("tx_snr_db", snr_v) / 10.0);
    if (has_c0g)
      b.snr = std::pow(10.0, (parse_double("c0_gamma_db", c0g_v) - g.c0_db) / 10.0);
  }

  if (take(raw.system, "slots", v)) b.slots = static_cast<int>(parse_int("slots", v));
  if (take(raw.system, "seed", v)) {
    try {
      std::size_t pos = 0;
      b.seed = std::stoull(v, &pos);
      if (pos != v.size()) bad_key("seed", "not an unsigned integer: '" + v + "'");
    } catch (const std::logic_error&) {
      bad_key("seed", "not an unsigned integer: '" + v + "'");
    }
  }
  if (take(raw.system, "force_oob_align", v)) b.force_oob_align = parse_bool("force_oob_align", v);
  if (take(raw.system, "balanced_oob_pathloss", v))
    b.balanced_oob_pathloss = parse_bool("balanced_oob_pathloss", v);
  if (take(raw.system, "with_grid_opt", v)) b.with_grid_opt = parse_bool("with_grid_opt", v);
  if (take(raw.system, "grid_points", v))
    b.grid_points = static_cast<int>(parse_int("grid_points", v));
  if (take(raw.system, "name", v)) spec.name = v;
  if (take(raw.system, "output", v)) spec.output = v;

  if (take(raw.scheme, "kind", v)) {
    if (v == "joint_opt") b.scheme.kind = SchemeKind::joint_opt;
    else if (v == "time_share") b.scheme.kind = SchemeKind::time_share;
    else if (v == "no_coop") b.scheme.kind = SchemeKind::no_coop;
    else
      bad_key("kind", "expected joint_opt, time_share or no_coop, got '" + v + "'");
  }
  if (take(raw.scheme, "zeta", v)) b.scheme.zeta = parse_double("zeta", v);
  if (take(raw.scheme, "w_k", v)) b.scheme.w_k = parse_double("w_k", v);
  if (take(raw.scheme, "w_q", v)) b.scheme.w_q = parse_double("w_q", v);

  if (take(raw.sweep, "axis", v)) {
    if (kAxes.count(v) == 0) bad_key("axis", "unknown sweep axis '" + v + "'");
    spec.sweep_axis = v;
  }
  if (take(raw.sweep, "values", v)) {
    for (const auto& tok : split(v, ',')) spec.sweep_values.push_back(parse_double("values", tok));
  }
  if (spec.sweep_axis.empty() != spec.sweep_values.empty())
    throw std::invalid_argument("config: [sweep] needs both axis and values");

  reject_leftovers(raw.geometry, "geometry");
  reject_leftovers(raw.system, "system");
  reject_leftovers(raw.scheme, "scheme");
  reject_leftovers(raw.sweep, "sweep");

  sim::validate(b);
  return spec;
}

ExperimentSpec load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string int_list(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string point(Vec2 p) { return num(p.x) + "," + num(p.y); }

std::string points(const std::vector<Vec2>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += point(v[i]);
  }
  return out;
}

}  // namespace

std::string render(const ExperimentSpec& spec) {
  std::ostringstream out;
  if (!spec.preset.empty()) {
    out << "[system]\npreset=" << spec.preset << "\noutput=" << spec.output << "\n";
    return out.str();
  }
  const sim::SystemConfig& b = spec.base;
  out << "[geometry]\n";
  out << "bs=" << points(b.geometry.bs) << "\n";
  out << "irs=" << points(b.geometry.irs) << "\n";
  out << "ue_region=" << point(b.geometry.ue_region.lo) << ";" << point(b.geometry.ue_region.hi)
      << "\n";
  out << "c0_db=" << num(b.geometry.c0_db) << "\n";
  out << "d0=" << num(b.geometry.d0) << "\n";
  out << "alpha=" << num(b.geometry.alpha) << "\n";
  out << "\n[system]\n";
  out << "name=" << spec.name << "\n";
  out << "output=" << spec.output << "\n";
  out << "num_operators=" << b.num_operators << "\n";
  out << "elements_per_irs=" << int_list(b.elements) << "\n";
  out << "ues_per_operator=" << int_list(b.ues) << "\n";
  out << "paths=";
  for (std::size_t i = 0; i < b.paths.size(); ++i) {
    if (i) out << ";";
    out << int_list(b.paths[i]);
  }
  out << "\n";
  out << "tx_snr_db=" << num(10.0 * std::log10(b.snr)) << "\n";
  out << "slots=" << b.slots << "\n";
  out << "seed=" << b.seed << "\n";
  if (b.force_oob_align) out << "force_oob_align=1\n";
  if (b.balanced_oob_pathloss) out << "balanced_oob_pathloss=1\n";
  if (b.with_grid_opt) out << "with_grid_opt=1\ngrid_points=" << b.grid_points << "\n";
  out << "\n[scheme]\n";
  switch (b.scheme.kind) {
    case SchemeKind::joint_opt: out << "kind=joint_opt\n"; break;
    case SchemeKind::time_share: out << "kind=time_share\n"; break;
    case SchemeKind::no_coop: out << "kind=no_coop\n"; break;
  }
  out << "zeta=" << num(b.scheme.zeta) << "\n";
  out << "w_k=" << num(b.scheme.w_k) << "\n";
  out << "w_q=" << num(b.scheme.w_q) << "\n";
  if (!spec.sweep_axis.empty()) {
    out << "\n[sweep]\naxis=" << spec.sweep_axis << "\nvalues=";
    for (std::size_t i = 0; i < spec.sweep_values.size(); ++i) {
      if (i) out << ",";
      out << num(spec.sweep_values[i]);
    }
    out << "\n";
  }
  return out.str();
}

std::string csv_num(double v) {
  if (!std::isfinite(v)) throw std::runtime_error("non-finite value in CSV output");
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

int run_experiment(const ExperimentSpec& spec, std::ostream& log) {
  if (!spec.preset.empty())
    throw std::invalid_argument("preset experiments run through run_preset");

  std::vector<sim::SweepResult> results;
  if (spec.sweep_axis.empty()) {
    results.push_back({0.0, sim::run_campaign(spec.base)});
  } else {
    results = sim::sweep(spec.base, spec.sweep_axis, spec.sweep_values);
  }

  const int m = spec.base.num_operators;
  const bool grid = spec.base.with_grid_opt;
  std::ostringstream csv;
  csv << (spec.sweep_axis.empty() ? "index" : spec.sweep_axis);
  for (int i = 1; i <= m; ++i) csv << ",se_emp_" << i << "_bps_hz";
  for (int i = 1; i <= m; ++i) csv << ",se_no_oob_" << i << "_bps_hz";
  for (int i = 1; i <= m; ++i) csv << ",se_analytic_" << i << "_bps_hz";
  for (int i = 1; i <= m; ++i) csv << ",se_analytic_no_oob_" << i << "_bps_hz";
  for (int i = 1; i <= m; ++i) csv << ",rel_error_" << i;
  if (grid)
    for (int i = 1; i <= m; ++i) csv << ",se_grid_" << i << "_bps_hz";
  if (m == 2) {
    csv << ",freq_a,freq_b,freq_c,freq_d";
  } else {
    for (int i = 0; i < m; ++i) csv << ",freq_align_" << i;
  }
  csv << "\n";

  for (const auto& r : results) {
    const auto& rep = r.report;
    csv << csv_num(r.value);
    for (int i = 0; i < m; ++i) csv << "," << csv_num(rep.per_operator_se[i]);
    for (int i = 0; i < m; ++i) csv << "," << csv_num(rep.per_operator_se_no_oob[i]);
    for (int i = 0; i < m; ++i) csv << "," << csv_num(rep.analytic_se[i]);
    for (int i = 0; i < m; ++i) csv << "," << csv_num(rep.analytic_se_no_oob[i]);
    for (int i = 0; i < m; ++i) csv << "," << csv_num(rep.rel_error[i]);
    if (grid)
      for (int i = 0; i < m; ++i) csv << "," << csv_num(rep.per_operator_se_grid[i]);
    const double t = static_cast<double>(rep.slots);
    if (m == 2) {
      for (int e = 0; e < 4; ++e) csv << "," << csv_num(rep.events[e].count / t);
    } else {
      for (int i = 0; i < m; ++i) csv << "," << csv_num(rep.align_histogram[i] / t);
    }
    csv << "\n";
  }

  const std::filesystem::path path(spec.output);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file: " + spec.output);
  out << csv.str();
  out.close();
  if (!out) throw std::runtime_error("failed writing output file: " + spec.output);
  log << spec.name << ": wrote " << results.size() << " rows to " << spec.output << "\n";
  return static_cast<int>(results.size());
}

}  // namespace irscoex
