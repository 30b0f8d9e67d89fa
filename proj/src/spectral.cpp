#include "wasep/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace wasep {

namespace {

// Thomas algorithm for a constant-coefficient tridiagonal system
//   c (v(x+1) + v(x-1)) - d v(x) = rhs(x),  x = 1..N-1,
// with Dirichlet values v(0) = v0, v(N) = vN.
Eigen::VectorXd solve_dirichlet(int N, double c, double d,
                                const Eigen::VectorXd& rhs, double v0,
                                double vN) {
  const int n = N - 1;
  Eigen::VectorXd diag = Eigen::VectorXd::Constant(n, -d);
  Eigen::VectorXd b = rhs;
  b(0) -= c * v0;
  b(n - 1) -= c * vN;
  // forward sweep
  for (int i = 1; i < n; ++i) {
    double w = c / diag(i - 1);
    diag(i) -= w * c;
    b(i) -= w * b(i - 1);
  }
  Eigen::VectorXd v(N + 1);
  v(0) = v0;
  v(N) = vN;
  v(n) = b(n - 1) / diag(n - 1);
  for (int i = n - 1; i >= 1; --i) v(i) = (b(i - 1) - c * v(i + 1)) / diag(i - 1);
  return v;
}

} // namespace

Eigen::VectorXd solve_a(const Params& pr) {
  const double spq = std::sqrt(pr.p * pr.q);
  const double aN = std::exp((pr.k - pr.N / 2.0) * pr.log_lambda);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(pr.N - 1);
  return solve_dirichlet(pr.N, spq, 2.0 * spq + pr.rho, rhs, 1.0, aN);
}

Eigen::VectorXd gammas(const Params& pr) {
  Eigen::VectorXd g(pr.N - 1);
  const double spq = std::sqrt(pr.p * pr.q);
  for (int j = 1; j <= pr.N - 1; ++j) {
    double s = std::sin(j * M_PI / (2.0 * pr.N));
    g(j - 1) = pr.rho + 4.0 * spq * s * s;
  }
  return g;
}

SpectralData::SpectralData(const Params& p) : pr(p) {
  a = solve_a(pr);
  gammas = wasep::gammas(pr);
  gap = gammas(0);

  // alpha solves sqrt(pq) Delta alpha - rho alpha = rho / (lambda - 1) with
  // alpha(0) = 0 and alpha(N) = (lambda^((2k-N)/2) - 1) / (lambda - 1).
  // rho / (lambda - 1) = q (sqrt(p) - sqrt(q)) / (sqrt(p) + sqrt(q)) stays
  // finite as the bias vanishes.
  const double spq = std::sqrt(pr.p * pr.q);
  const double sp = std::sqrt(pr.p), sq = std::sqrt(pr.q);
  const double rho_over_lm1 = pr.q * (sp - sq) / (sp + sq);
  double alphaN;
  if (pr.symmetric())
    alphaN = pr.k - pr.N / 2.0;
  else
    alphaN = std::expm1((pr.k - pr.N / 2.0) * pr.log_lambda) / (pr.b / pr.q);
  Eigen::VectorXd rhs = Eigen::VectorXd::Constant(pr.N - 1, rho_over_lm1);
  alpha = solve_dirichlet(pr.N, spq, 2.0 * spq + pr.rho, rhs, 0.0, alphaN);

  delta_min_f0 = std::exp((pr.k - pr.N) / 2.0 * pr.log_lambda);
  delta_min_f1 = delta_min_f0 * std::sin(M_PI / pr.N);
}

double SpectralData::phi(int x, int u) const {
  if (pr.symmetric()) return u / 2.0 - alpha(x);
  return std::expm1(u / 2.0 * pr.log_lambda) / (pr.b / pr.q) - alpha(x);
}

double SpectralData::area_term(int hi, int lo) const {
  if (pr.symmetric()) return (hi - lo) / 2.0;
  // lambda^((N-k+lo)/2) (lambda^((hi-lo)/2) - 1) / (lambda - 1)
  return std::exp((pr.N - pr.k + lo) / 2.0 * pr.log_lambda) *
         std::expm1((hi - lo) / 2.0 * pr.log_lambda) / (pr.b / pr.q);
}

double eval_f(int j, const Height& h, const SpectralData& sd) {
  const int N = sd.pr.N;
  if (j < 0 || j > N - 1) throw std::invalid_argument("eval_f: j out of range");
  double acc = 0.0;
  for (int x = 1; x <= N - 1; ++x) {
    double w = (j == 0) ? 1.0 : std::sin(j * x * M_PI / N);
    acc += w * sd.phi(x, h[x]);
  }
  return acc;
}

double weighted_area(const Height& h1, const Height& h2,
                     const SpectralData& sd) {
  const int N = sd.pr.N;
  double acc = 0.0;
  for (int x = 1; x <= N - 1; ++x) {
    if (h2[x] > h1[x])
      throw std::invalid_argument("weighted_area: h2 > h1 at some site");
    if (h1[x] != h2[x]) acc += sd.area_term(h1[x], h2[x]);
  }
  return acc;
}

double h_statistic(const Height& h1, const Height& h2,
                   const SpectralData& sd) {
  const int N = sd.pr.N;
  double best = 0.0;
  for (int x = 1; x <= N - 1; ++x) {
    if (h2[x] > h1[x])
      throw std::invalid_argument("h_statistic: h2 > h1 at some site");
    if (h1[x] != h2[x]) best = std::max(best, sd.area_term(h1[x], h2[x]));
  }
  return best;
}

bool difference_bound_holds(const Height& h1, const Height& h2,
                            const SpectralData& sd) {
  const Params& pr = sd.pr;
  const double lhs = weighted_area(h1, h2, sd);
  const ConfigStats st = stats(to_particles(h1, pr), pr);
  const double rhs =
      (double)pr.N * pr.k * std::exp(st.D * pr.log_lambda);
  return lhs <= rhs * (1.0 + 1e-12);
}

} // namespace wasep
