#pragma once

#include <complex>
#include <vector>

#include "irscoex/rng.hpp"

// Cascaded BS -> IRS -> UE channels under a sparse mmWave model. A UE sees,
// per reflector, L resolvable paths whose cascaded angles live on the
// reflector's N-point grid {-1 + 2i/N}; grid orthogonality makes a reflector
// contribute to the scalar channel only when it is steered exactly at one of
// the UE's path angles.

namespace irscoex {

struct Vec2 {
  double x = 0, y = 0;
};

double distance(Vec2 a, Vec2 b);

struct Rect {
  Vec2 lo, hi;
};

struct Geometry {
  std::vector<Vec2> bs;   // one BS per operator
  std::vector<Vec2> irs;  // one reflector per operator
  Rect ue_region;         // UEs drop uniformly in this rectangle
  double c0_db = -30.0;   // reference loss at d0, dB
  double d0 = 1.0;        // meters
  double alpha = 2.0;     // path-loss exponent
};

// linear loss 10^(c0_db/10) * (d0 / |from-to|)^alpha; zero distance rejected
double path_loss(const Geometry& g, Vec2 from, Vec2 to);

// i-th grid angle of an n-element reflector
double book_angle(int n, int i);

// wrapped sum of two normalized angles, result in [-1, 1)
double cascade_angle(double phi, double psi);

struct CascadedPath {
  int angle_index = 0;                    // position in the owning grid
  std::complex<double> gain_bs_irs{};     // unit-variance hop coefficients;
  std::complex<double> gain_irs_ue{};     // path loss enters scalar_channel
};

// One reflector's configuration: steer at a grid angle, cancel the target
// path's hop phases, then rotate everything by a common overall phase.
struct IrsSetting {
  int irs_id = 0;
  int aligned_angle_index = 0;
  double conj_phase = 0;     // -(arg gain_bs_irs + arg gain_irs_ue) of the target
  double overall_phase = 0;  // radians in [-pi, pi)
};

struct UeChannel {
  int in_band_irs = 0;                           // serving operator's reflector
  std::vector<int> elements;                     // N per reflector
  std::vector<std::vector<CascadedPath>> paths;  // per reflector, distinct beams
  std::vector<double> pathloss;                  // per reflector cascade loss (linear)
  int dominant_path = 0;                         // argmax |gain product|, in-band reflector
};

// Draws the per-reflector path sets: distinct grid indices without
// replacement, i.i.d. CN(0,1) hop coefficients, dominant path labeled on the
// in-band reflector. Path loss is carried, not baked into the draws.
UeChannel sample_ue_channel(std::mt19937_64& g, int in_band_irs, const std::vector<int>& elements,
                            const std::vector<int>& path_counts, const std::vector<double>& pathloss);

// h = sum over reflectors of sqrt(beta) * (N / sqrt(L)) * gain product *
// exp(j(conj_phase + overall_phase)), counted only for the path (if any)
// whose grid index the reflector is steered at.
std::complex<double> scalar_channel(const UeChannel& ue, const std::vector<IrsSetting>& settings);

}  // namespace irscoex
