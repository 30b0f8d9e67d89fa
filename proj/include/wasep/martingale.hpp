#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wasep/rng.hpp"

namespace wasep {

/// Pure-jump path: piecewise constant between events plus an optional
/// deterministic drift (so a compensated Poisson process fits too). The
/// bracket, when present, grows linearly at bracket_rate.
struct JumpTrace {
  std::vector<double> times;   // event times, times[0] = 0
  std::vector<double> values;  // value right after each event
  double drift = 0.0;          // continuous part between events
  double bracket_rate = -1.0;  // <0 when no analytic bracket is available
  double t_end = 0.0;          // horizon the trace was generated up to
  bool absorbed = false;
  double tau = 0.0;  // absorption time when absorbed

  double value_at(double t) const;
  double bracket_at(double t) const;
  /// First time the path is <= level; t_end + 1 when it never is.
  double hitting_time_below(double level) const;
};

/// Symmetric +-1 walk, unit rate in each direction, started at a and
/// absorbed at 0.
JumpTrace absorbed_walk(double a, double t_max, Rng& rng);

/// Poisson process of rate 1 minus its compensator t.
JumpTrace compensated_poisson(double t_max, Rng& rng);

/// +-1 walk at rate 1 in each direction started at a; bracket 2t.
JumpTrace updown_walk(double a, double t_max, Rng& rng);

struct BoundRow {
  double u = 0.0;
  double empirical = 0.0;
  double ci = 0.0;  // Wilson-score 95% half-width
  double bound = 0.0;
  bool pass = false;  // empirical - 3 ci <= bound
};

/// Empirical P[tau >= a^2 u] against 4 u^(-1/2). Traces must start at most
/// at a, stay nonnegative, and be absorbed at 0 (or still alive at t_end).
std::vector<BoundRow> check_absorption_bound(
    const std::vector<JumpTrace>& traces, double a,
    const std::vector<double>& u_grid);

/// Empirical P[<M>_{tau_b} >= (a-b)^2 u] against 8 u^(-1/2), where tau_b is
/// the first hitting time of (-inf, b]. Traces must carry a bracket.
std::vector<BoundRow> check_bracket_bound(const std::vector<JumpTrace>& traces,
                                          double a, double b,
                                          const std::vector<double>& u_grid);

/// Streaming variants: traces are produced one replica at a time and only
/// the exceedance counts are kept, so the replica count is not limited by
/// memory.
using TraceSource = std::function<JumpTrace(int replica)>;

std::vector<BoundRow> check_absorption_bound(const TraceSource& make,
                                             int replicas, double a,
                                             const std::vector<double>& u_grid);

std::vector<BoundRow> check_bracket_bound(const TraceSource& make,
                                          int replicas, double a, double b,
                                          const std::vector<double>& u_grid);

struct ExpoRow {
  double lambda = 0.0;
  double empirical = 0.0;  // estimate of E[exp(lambda M_t)]
  double sd = 0.0;         // bootstrap standard deviation
  double bound = 0.0;      // exp(B t (exp(lambda S) - lambda S - 1))
  bool pass = false;       // empirical - 3 sd <= bound
};

/// Exponential-moment check at time t for jump size at most S and jump rate
/// at most B. Estimated by shifted log-sum-exp; CI by bootstrap (1000
/// resamples from the given seed).
std::vector<ExpoRow> check_expo_moment(const std::vector<JumpTrace>& traces,
                                       const std::vector<double>& lambda_grid,
                                       double t, double B, double S,
                                       std::uint64_t seed);

} // namespace wasep
