#pragma once

#include <vector>

#include "wasep/exact.hpp"
#include "wasep/model.hpp"
#include "wasep/params.hpp"
#include "wasep/rng.hpp"

namespace wasep {

/// Exact stationary table over the enumerated state space.
struct EquilibriumTable {
  Params pr;
  std::vector<Config> states;
  std::vector<double> probs; // lambda^(-A)/Z, sums to 1
  double Z = 0.0;
};

EquilibriumTable exact_pi(const Params& pr, long long cap = 200000);

/// Exact sampler from pi via the geometric-spacing representation: spacing i
/// is geometric with failure probability lambda^(-i), and the draw is
/// accepted when the spacings fit in the segment. The symmetric case samples
/// a uniform k-subset directly. If the acceptance rate over the first 1e4
/// proposals falls below 1e-3, falls back to running the uniformized
/// dynamics from xi_min for 20/gap time units and sets *approximate.
Config sample_pi(const Params& pr, Rng& rng, bool* approximate = nullptr);

struct ProfilePoint {
  int site;
  double value;
  double lower; // (k/N) lambda^(x-N)
  double upper; // (k/N) lambda^(x-1)
  bool within_bounds;
};

std::vector<ProfilePoint> density_profile(const EquilibriumTable& table);
std::vector<ProfilePoint> density_profile(const Params& pr,
                                          const std::vector<Config>& samples);

struct GapStatistics {
  std::vector<double> q_pmf, q1_pmf, q2_pmf; // index = value, from 0
  double q_mean = 0.0;
  double q_quantile(double level) const; // smallest m with P(Q <= m) >= level
};

GapStatistics gap_statistics(const Params& pr,
                             const std::vector<Config>& samples);

/// log(mean particle count in the window [(z-eps)N, (z+eps)N]) / log k,
/// for z on a regular grid in (0, 1).
struct LogDensityPoint {
  double z;
  double mean_count;
  double value;
};

std::vector<LogDensityPoint> log_density_profile(
    const Params& pr, const std::vector<Config>& samples, double eps = 0.05,
    int grid = 19);

} // namespace wasep
