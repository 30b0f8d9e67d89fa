#pragma once

#include <cmath>
#include <stdexcept>

namespace wasep {

/// Model constants for the exclusion process on the segment [1,N] with k
/// particles and right-jump rate p. Derived quantities are computed once at
/// construction and shared by every module.
struct Params {
  int N = 0;
  int k = 0;
  double p = 0.5;

  double q = 0.5;      // 1 - p
  double b = 0.0;      // p - q
  double lambda = 1.0; // p / q
  double log_lambda = 0.0;
  double rho = 0.0;    // (sqrt(p) - sqrt(q))^2
  double gap = 0.0;    // rho + 4 sqrt(pq) sin^2(pi / 2N)

  Params(int N_, int k_, double p_) : N(N_), k(k_), p(p_) {
    if (N < 2) throw std::invalid_argument("params: N must be >= 2");
    if (k < 1 || k > N - 1)
      throw std::invalid_argument("params: k must be in [1, N-1]");
    if (!(p >= 0.5) || !(p < 1.0))
      throw std::invalid_argument("params: p must be in [1/2, 1)");
    q = 1.0 - p;
    b = p - q;
    lambda = p / q;
    log_lambda = std::log(lambda);
    const double sp = std::sqrt(p), sq = std::sqrt(q);
    rho = (sp - sq) * (sp - sq);
    const double s = std::sin(M_PI / (2.0 * N));
    gap = rho + 4.0 * sp * sq * s * s;
  }

  /// True when the bias is exactly zero (p = 1/2); several formulas switch
  /// to their analytic lambda -> 1 limit on this branch.
  bool symmetric() const { return b < 1e-14; }
};

} // namespace wasep
