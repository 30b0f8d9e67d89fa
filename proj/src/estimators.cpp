#include "wasep/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

#include "wasep/dynamics.hpp"
#include "wasep/equilibrium.hpp"
#include "wasep/exact.hpp"
#include "wasep/hydro.hpp"
#include "wasep/spectral.hpp"

namespace wasep {

namespace {

void for_each_replica(int replicas, int threads,
                      const std::function<void(int)>& fn) {
  if (threads <= 1) {
    for (int r = 0; r < replicas; ++r) fn(r);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int r = next.fetch_add(1); r < replicas; r = next.fetch_add(1))
        fn(r);
    });
  for (auto& th : pool) th.join();
}

void check_grid(const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("empty time grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] < 0.0) throw std::invalid_argument("negative grid time");
    if (i && t_grid[i] <= t_grid[i - 1])
      throw std::invalid_argument("time grid must increase");
  }
}

} // namespace

void wilson_score(long long hits, long long n, double& center, double& half) {
  const double z = 1.959963984540054;
  double phat = (double)hits / n;
  double denom = 1.0 + z * z / n;
  center = (phat + z * z / (2.0 * n)) / denom;
  half =
      z * std::sqrt(phat * (1.0 - phat) / n + z * z / (4.0 * n * n)) / denom;
}

std::vector<double> default_time_grid(const Params& pr, int points) {
  double lo = 0.1 / pr.gap;
  double hi = 10.0 * std::max(std::log((double)pr.k), 1.0) / pr.gap;
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i)
    grid[i] = lo * std::pow(hi / lo, (double)i / (points - 1));
  return grid;
}

MixBoundCurve coupling_upper(const Params& pr,
                             const std::vector<double>& t_grid, int replicas,
                             std::uint64_t seed, int threads) {
  check_grid(t_grid);
  if (replicas < 100)
    throw std::invalid_argument("coupling_upper: replicas >= 100 required");

  // coalescence is absorbing, so the whole curve is the survival function
  // of the merging time
  const double horizon = t_grid.back();
  std::vector<double> merge(replicas);
  for_each_replica(replicas, threads, [&](int r) {
    Rng rng(seed, stream_tag::kDynamics, (std::uint64_t)r);
    CouplingEngine eng(pr, {extremal_max(pr), extremal_min(pr)}, rng);
    merge[r] = eng.merging_time(horizon);
  });

  MixBoundCurve curve;
  curve.t = t_grid;
  curve.replicas = replicas;
  curve.seed = seed;
  for (double t : t_grid) {
    long long alive = 0;
    for (double m : merge)
      if (m > t) ++alive;
    double center, half;
    wilson_score(alive, replicas, center, half);
    curve.value.push_back((double)alive / replicas);
    curve.ci.push_back(half);
  }
  return curve;
}

MixBoundCurve wilson_lower(const Params& pr, const std::vector<double>& t_grid,
                           int replicas, std::uint64_t seed, int threads) {
  check_grid(t_grid);
  if (replicas < 1000)
    throw std::invalid_argument("wilson_lower: replicas >= 1000 required");

  const SpectralData sd(pr);
  const std::size_t G = t_grid.size();

  // Var under the stationary law: exact when the table fits, sampled
  // otherwise (E_pi f1 = 0 either way since f1 is a true eigenfunction)
  double var_pi = 0.0;
  long long n_pi = 0;
  long long states = 0;
  try {
    states = state_count(pr.N, pr.k);
  } catch (const CapExceeded&) {
    states = -1;
  }
  if (states > 0 && states <= 20000) {
    EquilibriumTable table = exact_pi(pr);
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < table.states.size(); ++i) {
      double f = eval_f(1, to_height(table.states[i], pr), sd);
      m1 += table.probs[i] * f;
      m2 += table.probs[i] * f * f;
    }
    var_pi = m2 - m1 * m1;
    n_pi = -1;  // exact
  } else {
    n_pi = 10000;
    double m1 = 0.0, m2 = 0.0;
    Rng rng(seed, stream_tag::kEquilibrium, 0x5eedu);
    for (long long i = 0; i < n_pi; ++i) {
      double f = eval_f(1, to_height(sample_pi(pr, rng), pr), sd);
      m1 += f;
      m2 += f * f;
    }
    m1 /= n_pi;
    var_pi = m2 / n_pi - m1 * m1;
  }

  MixBoundCurve curve;
  curve.t = t_grid;
  curve.replicas = replicas;
  curve.seed = seed;
  curve.value.assign(G, 0.0);
  curve.ci.assign(G, 0.0);

  const double z = 1.959963984540054;
  for (int start = 0; start < 2; ++start) {
    std::vector<double> sum(G, 0.0), sq(G, 0.0);
    std::vector<std::vector<double>> per(replicas,
                                         std::vector<double>(G, 0.0));
    for_each_replica(replicas, threads, [&](int r) {
      Rng rng(seed, stream_tag::kDynamics,
              (std::uint64_t)r + (start ? 0x80000000ull : 0ull));
      Height h0 = start ? extremal_min(pr) : extremal_max(pr);
      CouplingEngine eng(pr, {h0}, rng);
      for (std::size_t g = 0; g < G; ++g) {
        eng.advance(t_grid[g]);
        per[r][g] = eval_f(1, eng.chain(0), sd);
      }
    });
    for (int r = 0; r < replicas; ++r)
      for (std::size_t g = 0; g < G; ++g) {
        sum[g] += per[r][g];
        sq[g] += per[r][g] * per[r][g];
      }
    for (std::size_t g = 0; g < G; ++g) {
      double mean = sum[g] / replicas;
      double var = std::max(0.0, sq[g] / replicas - mean * mean);
      double e2 = mean * mean;
      double bound =
          e2 > 0.0 ? std::clamp(1.0 - 2.0 * (var + var_pi) / e2, 0.0, 1.0)
                   : 0.0;
      // conservative endpoint: shrink |E|, inflate the variances
      double se = std::sqrt(var / replicas);
      double elo = std::max(std::abs(mean) - z * se, 0.0);
      double vhi = var * (1.0 + z * std::sqrt(2.0 / replicas));
      double vphi = n_pi > 0 ? var_pi * (1.0 + z * std::sqrt(2.0 / n_pi))
                             : var_pi;
      double blo = elo > 0.0 ? std::clamp(1.0 - 2.0 * (vhi + vphi) /
                                                    (elo * elo),
                                          0.0, 1.0)
                             : 0.0;
      if (bound > curve.value[g]) {
        curve.value[g] = bound;
        curve.ci[g] = std::max(bound - blo, 1e-12);
      }
    }
  }
  for (std::size_t g = 0; g < G; ++g)
    if (curve.ci[g] == 0.0) curve.ci[g] = 1e-12;
  return curve;
}

Bracket mix_time_bracket(const Params& pr, double eps, int replicas,
                         std::uint64_t seed, std::vector<double> t_grid,
                         int threads) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("mix_time_bracket: eps in (0,1) required");
  if (t_grid.empty()) t_grid = default_time_grid(pr);

  Bracket br;
  br.upper = coupling_upper(pr, t_grid, std::max(replicas, 100), seed, threads);
  br.lower = wilson_lower(pr, t_grid, std::max(replicas, 1000), seed, threads);

  br.upper_timeout = true;
  for (std::size_t g = 0; g < t_grid.size(); ++g)
    if (br.upper.value[g] + 3.0 * br.upper.ci[g] <= eps) {
      br.t_upper = t_grid[g];
      br.upper_timeout = false;
      break;
    }
  br.lower_timeout = true;
  for (std::size_t g = t_grid.size(); g-- > 0;)
    if (br.lower.value[g] - 3.0 * br.lower.ci[g] >= eps) {
      br.t_lower = t_grid[g];
      br.lower_timeout = false;
      break;
    }
  return br;
}

std::vector<HydroDistance> hydro_distance(const Params& pr,
                                          const std::vector<double>& t_macro,
                                          int replicas, std::uint64_t seed,
                                          int threads) {
  check_grid(t_macro);
  if (replicas < 1)
    throw std::invalid_argument("hydro_distance: replicas >= 1 required");
  const double alpha = (double)pr.k / pr.N;
  const std::size_t G = t_macro.size();

  std::vector<std::vector<double>> dist(G, std::vector<double>(replicas));
  for_each_replica(replicas, threads, [&](int r) {
    Rng rng(seed, stream_tag::kDynamics, (std::uint64_t)r);
    CouplingEngine eng(pr, {extremal_max(pr)}, rng);
    for (std::size_t g = 0; g < G; ++g) {
      eng.advance(pr.N * t_macro[g] / pr.b);
      const Height& h = eng.chain(0);
      double sup = 0.0;
      for (int x = 0; x <= pr.N; ++x) {
        double macro = hydro::g(alpha, t_macro[g], (double)x / pr.N);
        sup = std::max(sup, std::abs((double)h[x] / pr.N - macro));
      }
      dist[g][r] = sup;
    }
  });

  std::vector<HydroDistance> out(G);
  for (std::size_t g = 0; g < G; ++g) {
    std::sort(dist[g].begin(), dist[g].end());
    out[g].t = t_macro[g];
    out[g].median = dist[g][replicas / 2];
    out[g].p90 = dist[g][std::min<std::size_t>(replicas - 1,
                                               (std::size_t)(0.9 * replicas))];
  }
  return out;
}

std::vector<BoundaryPoint> boundary_scaling(const Params& pr,
                                            const std::vector<double>& t_macro,
                                            int replicas, std::uint64_t seed,
                                            int threads) {
  check_grid(t_macro);
  if (replicas < 2)
    throw std::invalid_argument("boundary_scaling: replicas >= 2 required");
  const double alpha = (double)pr.k / pr.N;
  const std::size_t G = t_macro.size();

  std::vector<std::vector<double>> ls(G, std::vector<double>(replicas)),
      rs(G, std::vector<double>(replicas));
  for_each_replica(replicas, threads, [&](int r) {
    Rng rng(seed, stream_tag::kDynamics, (std::uint64_t)r);
    CouplingEngine eng(pr, {extremal_max(pr)}, rng);
    for (std::size_t g = 0; g < G; ++g) {
      eng.advance(pr.N * t_macro[g] / pr.b);
      ConfigStats st = stats(to_particles(eng.chain(0), pr), pr);
      ls[g][r] = (double)st.L / pr.N;
      rs[g][r] = (double)st.R / pr.N;
    }
  });

  const double z = 1.959963984540054;
  std::vector<BoundaryPoint> out(G);
  for (std::size_t g = 0; g < G; ++g) {
    BoundaryPoint& bp = out[g];
    bp.t = t_macro[g];
    double lm = 0.0, l2 = 0.0, rm = 0.0, r2 = 0.0;
    for (int r = 0; r < replicas; ++r) {
      lm += ls[g][r];
      l2 += ls[g][r] * ls[g][r];
      rm += rs[g][r];
      r2 += rs[g][r] * rs[g][r];
    }
    lm /= replicas;
    rm /= replicas;
    bp.left_mean = lm;
    bp.right_mean = rm;
    bp.left_ci =
        z * std::sqrt(std::max(0.0, l2 / replicas - lm * lm) / replicas);
    bp.right_ci =
        z * std::sqrt(std::max(0.0, r2 / replicas - rm * rm) / replicas);
    bp.ell = hydro::ell(alpha, t_macro[g]);
    bp.r = hydro::r(alpha, t_macro[g]);
  }
  return out;
}

} // namespace wasep
