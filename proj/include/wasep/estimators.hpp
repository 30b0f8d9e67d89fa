#pragma once

#include <cstdint>
#include <vector>

#include "wasep/params.hpp"

namespace wasep {

/// Monte Carlo bracket for the distance to equilibrium: a coupling-based
/// upper estimate of P[h_max(t) != h_min(t)] and a two-moment lower bound
/// built from the first eigenfunction, each with Wilson-score 95% intervals
/// (the lower curve carries a propagated interval instead).
struct MixBoundCurve {
  std::vector<double> t;
  std::vector<double> value;
  std::vector<double> ci;  // half-width; assertions use 3 ci slack
  int replicas = 0;
  std::uint64_t seed = 0;
};

/// Geometric grid covering [0.1/gap, 10 max(log k, 1)/gap].
std::vector<double> default_time_grid(const Params& pr, int points = 24);

MixBoundCurve coupling_upper(const Params& pr,
                             const std::vector<double>& t_grid, int replicas,
                             std::uint64_t seed, int threads = 1);

/// Plug-in bound 1 - 2 (Var_t + Var_pi) / E[f1]^2, max over the two extremal
/// starts, clamped to [0, 1]. Var_pi is exact when the state space fits a
/// table, otherwise estimated from 10^4 equilibrium samples.
MixBoundCurve wilson_lower(const Params& pr, const std::vector<double>& t_grid,
                           int replicas, std::uint64_t seed, int threads = 1);

struct Bracket {
  double t_lower = 0.0, t_upper = 0.0;
  bool lower_timeout = false, upper_timeout = false;
  MixBoundCurve upper, lower;
};

/// T_upper: first grid t with upper + 3 ci <= eps. T_lower: last grid t with
/// lower - 3 ci >= eps. Timeout flags set when a curve never crosses.
Bracket mix_time_bracket(const Params& pr, double eps, int replicas,
                         std::uint64_t seed,
                         std::vector<double> t_grid = {}, int threads = 1);

struct HydroDistance {
  double t = 0.0;  // macroscopic time; microscopic clock is N t / b
  double median = 0.0;
  double p90 = 0.0;
};

/// Sup distance between h_max(N t / b, N x)/N and the macroscopic profile
/// g_alpha(t, x), alpha = k/N, per replica.
std::vector<HydroDistance> hydro_distance(const Params& pr,
                                          const std::vector<double>& t_macro,
                                          int replicas, std::uint64_t seed,
                                          int threads = 1);

struct BoundaryPoint {
  double t = 0.0;
  double left_mean = 0.0, left_ci = 0.0;    // L_N(N t / b) / N
  double right_mean = 0.0, right_ci = 0.0;  // R_N(N t / b) / N
  double ell = 0.0, r = 0.0;                // macroscopic candidates
};

std::vector<BoundaryPoint> boundary_scaling(const Params& pr,
                                            const std::vector<double>& t_macro,
                                            int replicas, std::uint64_t seed,
                                            int threads = 1);

/// Wilson-score 95% interval for hits out of n.
void wilson_score(long long hits, long long n, double& center, double& half);

} // namespace wasep
