#pragma once

#include <cstdint>
#include <vector>

#include "wasep/params.hpp"
#include "wasep/rng.hpp"

namespace wasep {

/// n exclusion particles on the integer line plus a slower (n+1)-th particle
/// on the right that only jumps rightward, at rate beta*b. With the spacings
/// started from independent geometrics of success probability 1 - mu_i,
/// mu_i = beta + lambda^(-i) (1 - beta), the spacing law is stationary.
struct AuxSystem {
  int n = 0;
  double beta = 0.0;
  Params pr;
  std::vector<double> mu;            // mu[i-1], i = 1..n
  std::vector<long long> positions;  // strictly increasing; back() is slow
  double time = 0.0;

  AuxSystem(int n, double beta, const Params& pr);

  long long spacing(int i) const {  // i = 1..n
    return positions[i] - positions[i - 1];
  }
  long long span() const { return positions.back() - positions.front(); }
  double expected_span() const;  // sum over i of 1/(1 - mu_i)
};

/// Slow particle at 0, the others built leftward with geometric spacings.
AuxSystem init_stationary(int n, double beta, const Params& pr, Rng& rng);

/// Advance to absolute time t_target: exclusion jumps (p right, q left) for
/// the first n particles, unconditional right jumps at rate beta*b for the
/// last one.
void advance(AuxSystem& sys, double t_target, Rng& rng);

struct DeviationStats {
  double t = 0.0;
  int replicas = 0;
  double scale = 0.0;  // sqrt(b t) + (n + log(min(n, 1/b))/b) / (1 - beta)
  std::vector<double> a_grid;
  std::vector<double> fraction_below;  // P[eta_1(t) - t beta b <= -A scale]
  double first_centered_mean = 0.0;
  double slow_mean = 0.0, slow_var = 0.0;  // moments of the slow position
  double span_mean = 0.0;
  double span_expected = 0.0;
  std::vector<double> centered_first;  // sorted, for quantile lookup
  double quantile(double level) const;
};

DeviationStats deviation_stats(int n, double beta, const Params& pr, double t,
                               int replicas, std::uint64_t seed,
                               const std::vector<double>& a_grid);

} // namespace wasep
