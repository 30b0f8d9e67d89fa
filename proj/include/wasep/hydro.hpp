#pragma once

#include <algorithm>
#include <cmath>

namespace wasep::hydro {

/// Macroscopic extremal profiles on [0, 1] for density alpha.
inline double wedge(double alpha, double x) {
  return std::min(x, 2.0 * alpha - x);
}
inline double vee(double alpha, double x) {
  return std::max(-x, x - 2.0 * (1.0 - alpha));
}

/// Fixation time (sqrt(alpha) + sqrt(1 - alpha))^2 after which the profile
/// sits on the minimal one.
inline double fixation_time(double alpha) {
  double s = std::sqrt(alpha) + std::sqrt(1.0 - alpha);
  return s * s;
}

/// Hydrodynamic profile for the maximal initial condition. The parabolic
/// branch applies inside |x - alpha| <= t; t = 0 returns the wedge.
inline double g(double alpha, double t, double x) {
  double g0;
  if (t > 0.0 && std::abs(x - alpha) <= t)
    g0 = alpha - t / 2.0 - (x - alpha) * (x - alpha) / (2.0 * t);
  else
    g0 = wedge(alpha, x);
  return std::max(vee(alpha, x), g0);
}

/// Scaling limits of the boundary processes L_N / N and R_N / N.
inline double ell(double alpha, double t) {
  if (t <= alpha) return 0.0;
  if (t >= fixation_time(alpha)) return 1.0 - alpha;
  double d = std::sqrt(t) - std::sqrt(alpha);
  return d * d;
}

inline double r(double alpha, double t) {
  if (t <= 1.0 - alpha) return 1.0;
  if (t >= fixation_time(alpha)) return 1.0 - alpha;
  double d = std::sqrt(t) - std::sqrt(1.0 - alpha);
  return 1.0 - d * d;
}

} // namespace wasep::hydro
