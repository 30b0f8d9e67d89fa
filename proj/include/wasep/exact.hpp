#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <stdexcept>
#include <vector>

#include "wasep/model.hpp"
#include "wasep/params.hpp"

namespace wasep {

struct CapExceeded : std::runtime_error {
  long long required;
  CapExceeded(const char* what, long long req)
      : std::runtime_error(what), required(req) {}
};

/// Exact generator over the enumerated state space. States are listed in
/// colexicographic order of particle positions, which fixes a stable
/// index <-> configuration bijection.
struct Generator {
  Params pr;
  std::vector<Config> states;
  Eigen::SparseMatrix<double, Eigen::RowMajor> L; // L(i,j) = rate i -> j
  std::vector<long long> binom;                   // binom table for ranking

  int rank(const Config& cfg) const; // colex rank of a configuration
};

long long state_count(int N, int k); // C(N, k), throws on overflow

Generator build_generator(const Params& pr, long long cap = 200000);

/// Stationary vector lambda^(-A)/Z in enumeration order.
Eigen::VectorXd stationary_vector(const Generator& gen);

/// Transient distribution at time t by uniformization; truncation keeps the
/// discarded Poisson mass below 1e-12 and the output is renormalized.
Eigen::VectorXd transient(const Generator& gen, const Eigen::VectorXd& init,
                          double t);

/// Worst-case TV distance to stationarity on a time grid. With
/// extremals_only the max runs over the two extremal initial states.
std::vector<double> tv_curve(const Generator& gen,
                             const std::vector<double>& t_grid,
                             bool extremals_only = false);

double tv_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// inf { t : d(t) <= eps } by bisection to relative tolerance 1e-6.
double mixing_time(const Generator& gen, double eps);

/// Spectral gap from a dense symmetrized eigensolve.
double exact_gap(const Generator& gen, long long dense_cap = 3000);

/// Full spectrum of -L (sorted ascending), same symmetrization.
Eigen::VectorXd exact_spectrum(const Generator& gen,
                               long long dense_cap = 3000);

} // namespace wasep
