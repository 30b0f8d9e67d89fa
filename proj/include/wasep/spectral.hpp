#pragma once

#include <Eigen/Dense>

#include "wasep/model.hpp"
#include "wasep/params.hpp"

namespace wasep {

/// Hopf-Cole data: the profile a solving (sqrt(pq) Delta - rho) a = 0 with
/// a(0) = 1, a(N) = lambda^((2k-N)/2), the eigenvalues gamma_j, and the
/// minimal-increment constants used by the mixing bounds.
///
/// All evaluators go through phi(x, u) = (lambda^(u/2) - a(x)) / (lambda - 1),
/// stored via alpha(x) = (a(x) - 1) / (lambda - 1). alpha solves its own
/// tridiagonal system, which keeps the weak-bias regime free of cancellation;
/// at lambda = 1 it degenerates to the analytic limit alpha(x) = (2k-N)x/(2N)
/// and phi(x, u) = u/2 - alpha(x).
struct SpectralData {
  Params pr;
  Eigen::VectorXd a;      // indices 0..N
  Eigen::VectorXd alpha;  // (a - 1)/(lambda - 1), indices 0..N
  Eigen::VectorXd gammas; // gamma_1..gamma_{N-1}
  double gap = 0.0;
  double delta_min_f0 = 0.0; // lambda^((k-N)/2), exact
  double delta_min_f1 = 0.0; // lambda^((k-N)/2) sin(pi/N), lower bound

  explicit SpectralData(const Params& p);

  /// (lambda^(u/2) - a(x)) / (lambda - 1) for integer height u at site x.
  double phi(int x, int u) const;

  /// lambda^((N-k)/2) (lambda^(hi/2) - lambda^(lo/2)) / (lambda - 1), the
  /// per-site term of the weighted area. Requires hi >= lo.
  double area_term(int hi, int lo) const;
};

/// Tridiagonal solve of the boundary-value problem for a itself.
Eigen::VectorXd solve_a(const Params& pr);

/// gamma_j = rho + 4 sqrt(pq) sin^2(j pi / 2N), j = 1..N-1.
Eigen::VectorXd gammas(const Params& pr);

/// Eigenfunction evaluator. j >= 1 uses weights sin(j x pi / N); j = 0 uses
/// weight 1 (the contractive non-eigenfunction).
double eval_f(int j, const Height& h, const SpectralData& sd);

/// Weighted area between ordered height functions (h2 <= h1 pointwise).
double weighted_area(const Height& h1, const Height& h2,
                     const SpectralData& sd);

/// Max over sites of the weighted height discrepancy.
double h_statistic(const Height& h1, const Height& h2, const SpectralData& sd);

/// (f0(h1) - f0(h2)) / delta_min(f0) <= N k lambda^(D(h1)); requires h2 <= h1.
bool difference_bound_holds(const Height& h1, const Height& h2,
                            const SpectralData& sd);

} // namespace wasep
