#include "wasep/exact.hpp"

#include <algorithm>
#include <cmath>

namespace wasep {

long long state_count(int N, int k) {
  long long c = 1;
  for (int i = 1; i <= k; ++i) {
    if (c > (1LL << 56) / (N - k + i))
      throw CapExceeded("state count overflows", -1);
    c = c * (N - k + i) / i;
  }
  return c;
}

int Generator::rank(const Config& cfg) const {
  // colex rank: sum over i of C(pos_i - 1, i), positions 1-based ascending.
  const int N = pr.N;
  long long r = 0;
  int i = 0;
  for (int x = 1; x <= N; ++x)
    if (cfg[x - 1]) {
      ++i;
      r += binom[(x - 1) * (pr.k + 1) + i];
    }
  return (int)r;
}

Generator build_generator(const Params& pr, long long cap) {
  const long long M = state_count(pr.N, pr.k);
  if (M > cap) throw CapExceeded("state space exceeds cap", M);

  Generator gen{pr, {}, {}, {}};

  // binom[(n)(k+1) + j] = C(n, j), n = 0..N-1
  gen.binom.assign((size_t)pr.N * (pr.k + 1), 0);
  for (int n = 0; n < pr.N; ++n)
    for (int j = 0; j <= std::min(n, pr.k); ++j) {
      long long v;
      if (j == 0)
        v = 1;
      else
        v = gen.binom[(n - 1) * (pr.k + 1) + j - 1] +
            gen.binom[(n - 1) * (pr.k + 1) + j];
      gen.binom[n * (pr.k + 1) + j] = v;
    }

  // enumerate in colex order
  std::vector<int> pos(pr.k);
  for (int i = 0; i < pr.k; ++i) pos[i] = i + 1;
  gen.states.reserve(M);
  while (true) {
    Config cfg(pr.N, 0);
    for (int x : pos) cfg[x - 1] = 1;
    gen.states.push_back(cfg);
    int i = 0;
    while (i < pr.k &&
           pos[i] + 1 == (i + 1 < pr.k ? pos[i + 1] : pr.N + 1))
      ++i;
    if (i == pr.k) break;
    ++pos[i];
    for (int j = 0; j < i; ++j) pos[j] = j + 1;
  }

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(4 * (size_t)M);
  for (int s = 0; s < (int)M; ++s) {
    const Config& cfg = gen.states[s];
    double out = 0.0;
    for (int y = 1; y <= pr.N - 1; ++y) {
      if (cfg[y - 1] == cfg[y]) continue;
      Config nb = cfg;
      std::swap(nb[y - 1], nb[y]);
      double rate = cfg[y - 1] > cfg[y] ? pr.p : pr.q;
      trips.emplace_back(s, gen.rank(nb), rate);
      out += rate;
    }
    trips.emplace_back(s, s, -out);
  }
  gen.L.resize(M, M);
  gen.L.setFromTriplets(trips.begin(), trips.end());
  return gen;
}

Eigen::VectorXd stationary_vector(const Generator& gen) {
  const Params& pr = gen.pr;
  Eigen::VectorXd w(gen.states.size());
  for (size_t s = 0; s < gen.states.size(); ++s) {
    auto st = stats(gen.states[s], pr);
    w(s) = std::exp(-(double)st.A * pr.log_lambda);
  }
  return w / w.sum();
}

Eigen::VectorXd transient(const Generator& gen, const Eigen::VectorXd& init,
                          double t) {
  if (t < 0) throw std::invalid_argument("transient: t < 0");
  if (t == 0.0) return init;
  const Params& pr = gen.pr;
  const double Lam = (pr.N - 1) * std::max(pr.p, pr.q);
  const double mu = Lam * t;
  // jump kernel applied as v <- v + (v L) / Lam
  Eigen::RowVectorXd v = init.transpose();
  Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(v.size());
  double logw = -mu; // log Poisson(mu, 0)
  double cum = 0.0;
  const long long mmax =
      (long long)(mu + 12.0 * std::sqrt(mu + 1.0) + 60.0);
  for (long long m = 0;; ++m) {
    double w = std::exp(logw);
    acc += w * v;
    cum += w;
    if (cum >= 1.0 - 1e-12 || m >= mmax) break;
    Eigen::RowVectorXd vL = v * gen.L;
    v += vL / Lam;
    logw += std::log(mu) - std::log((double)(m + 1));
  }
  Eigen::VectorXd out = acc.transpose();
  out /= out.sum(); // renormalize the truncated expansion
  return out;
}

double tv_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return 0.5 * (a - b).lpNorm<1>();
}

std::vector<double> tv_curve(const Generator& gen,
                             const std::vector<double>& t_grid,
                             bool extremals_only) {
  const Eigen::VectorXd pi = stationary_vector(gen);
  std::vector<int> inits;
  if (extremals_only) {
    inits.push_back(gen.rank(to_particles(extremal_max(gen.pr), gen.pr)));
    inits.push_back(gen.rank(to_particles(extremal_min(gen.pr), gen.pr)));
  } else {
    for (int s = 0; s < (int)gen.states.size(); ++s) inits.push_back(s);
  }
  std::vector<double> d(t_grid.size(), 0.0);
  for (int s : inits) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(gen.states.size());
    e(s) = 1.0;
    for (size_t i = 0; i < t_grid.size(); ++i) {
      Eigen::VectorXd dist = transient(gen, e, t_grid[i]);
      d[i] = std::max(d[i], tv_distance(dist, pi));
    }
  }
  return d;
}

double mixing_time(const Generator& gen, double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("mixing_time: eps must be in (0,1)");
  auto d_at = [&](double t) {
    return tv_curve(gen, {t}, false)[0];
  };
  double lo = 0.0, hi = 1.0 / gen.pr.gap;
  while (d_at(hi) > eps) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e9) throw std::runtime_error("mixing_time: no convergence");
  }
  while (hi - lo > 1e-6 * hi) {
    double mid = 0.5 * (lo + hi);
    if (d_at(mid) > eps)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

Eigen::VectorXd exact_spectrum(const Generator& gen, long long dense_cap) {
  const long long M = (long long)gen.states.size();
  if (M > dense_cap) throw CapExceeded("dense eigensolve cap", M);
  const Eigen::VectorXd pi = stationary_vector(gen);
  // symmetrize: S = D^(1/2) L D^(-1/2), D = diag(pi)
  Eigen::MatrixXd S = Eigen::MatrixXd(gen.L);
  for (long long i = 0; i < M; ++i)
    for (long long j = 0; j < M; ++j)
      S(i, j) *= std::sqrt(pi(i) / pi(j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
  return (-es.eigenvalues()).reverse(); // ascending eigenvalues of -L
}

double exact_gap(const Generator& gen, long long dense_cap) {
  Eigen::VectorXd ev = exact_spectrum(gen, dense_cap);
  return ev(1); // ev(0) ~ 0
}

} // namespace wasep
