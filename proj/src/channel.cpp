#include "irscoex/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace irscoex {

double distance(Vec2 a, Vec2 b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double path_loss(const Geometry& g, Vec2 from, Vec2 to) {
  const double d = distance(from, to);
  if (d <= 0) throw std::invalid_argument("path_loss: zero distance");
  return std::pow(10.0, g.c0_db / 10.0) * std::pow(g.d0 / d, g.alpha);
}

double book_angle(int n, int i) {
  if (n < 1 || i < 0 || i >= n) throw std::invalid_argument("book_angle: index outside grid");
  return -1.0 + 2.0 * i / n;
}

double cascade_angle(double phi, double psi) {
  if (phi < -1 || phi >= 1 || psi < -1 || psi >= 1)
    throw std::invalid_argument("cascade_angle: inputs must lie in [-1, 1)");
  double w = phi + psi;
  if (w >= 1) w -= 2;
  if (w < -1) w += 2;
  return w;
}

std::vector<int> sample_distinct(std::mt19937_64& g, int n, int l) {
  if (l < 1 || l > n) throw std::invalid_argument("sample_distinct: need 1 <= l <= n");
  std::vector<int> out;
  out.reserve(l);
  for (int j = n - l; j < n; ++j) {
    const int t = static_cast<int>(uniform_below(g, static_cast<std::uint64_t>(j) + 1));
    if (std::find(out.begin(), out.end(), t) != out.end())
      out.push_back(j);
    else
      out.push_back(t);
  }
  return out;
}

std::vector<int> sample_distinct_containing(std::mt19937_64& g, int n, int l, int required) {
  if (required < 0 || required >= n)
    throw std::invalid_argument("sample_distinct_containing: required index outside grid");
  if (l < 1 || l > n) throw std::invalid_argument("sample_distinct_containing: need 1 <= l <= n");
  // the other l-1 indices are uniform without replacement over the rest
  std::vector<int> out{required};
  if (l > 1) {
    auto rest = sample_distinct(g, n - 1, l - 1);
    for (int r : rest) out.push_back(r >= required ? r + 1 : r);
  }
  return out;
}

UeChannel sample_ue_channel(std::mt19937_64& g, int in_band_irs, const std::vector<int>& elements,
                            const std::vector<int>& path_counts, const std::vector<double>& pathloss) {
  const auto irs_count = elements.size();
  if (path_counts.size() != irs_count || pathloss.size() != irs_count)
    throw std::invalid_argument("sample_ue_channel: per-reflector arrays disagree in size");
  if (in_band_irs < 0 || static_cast<std::size_t>(in_band_irs) >= irs_count)
    throw std::invalid_argument("sample_ue_channel: in_band_irs outside range");

  UeChannel ue;
  ue.in_band_irs = in_band_irs;
  ue.elements = elements;
  ue.pathloss = pathloss;
  ue.paths.resize(irs_count);
  for (std::size_t j = 0; j < irs_count; ++j) {
    const auto idx = sample_distinct(g, elements[j], path_counts[j]);
    auto& list = ue.paths[j];
    list.resize(idx.size());
    for (std::size_t p = 0; p < idx.size(); ++p) {
      list[p].angle_index = idx[p];
      list[p].gain_bs_irs = complex_normal(g);
      list[p].gain_irs_ue = complex_normal(g);
    }
  }

  const auto& own = ue.paths[in_band_irs];
  int best = 0;
  double best_mag = -1;
  for (std::size_t p = 0; p < own.size(); ++p) {
    const double mag = std::abs(own[p].gain_bs_irs) * std::abs(own[p].gain_irs_ue);
    if (mag > best_mag) {
      best_mag = mag;
      best = static_cast<int>(p);
    }
  }
  ue.dominant_path = best;
  return ue;
}

std::complex<double> scalar_channel(const UeChannel& ue, const std::vector<IrsSetting>& settings) {
  if (settings.size() != ue.paths.size())
    throw std::invalid_argument("scalar_channel: one setting per reflector required");
  std::vector<bool> seen(ue.paths.size(), false);
  std::complex<double> h = 0;
  for (const auto& s : settings) {
    if (s.irs_id < 0 || static_cast<std::size_t>(s.irs_id) >= ue.paths.size() || seen[s.irs_id])
      throw std::invalid_argument("scalar_channel: settings must cover each reflector exactly once");
    seen[s.irs_id] = true;
    const auto& list = ue.paths[s.irs_id];
    for (const auto& p : list) {
      if (p.angle_index != s.aligned_angle_index) continue;  // grid orthogonality
      const double scale = ue.elements[s.irs_id] / std::sqrt(static_cast<double>(list.size()));
      const auto rot = std::polar(1.0, s.conj_phase + s.overall_phase);
      h += std::sqrt(ue.pathloss[s.irs_id]) * scale * p.gain_bs_irs * p.gain_irs_ue * rot;
      break;
    }
  }
  return h;
}

}  // namespace irscoex
