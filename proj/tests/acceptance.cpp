// End-to-end acceptance gate. Each numbered check prints one PASS/FAIL line;
// the process exits nonzero if any check fails. Runtimes range from instant
// to tens of minutes for the two large mixing-trend checks.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "wasep/aux_line.hpp"
#include "wasep/dynamics.hpp"
#include "wasep/equilibrium.hpp"
#include "wasep/estimators.hpp"
#include "wasep/exact.hpp"
#include "wasep/hydro.hpp"
#include "wasep/martingale.hpp"
#include "wasep/spectral.hpp"

using namespace wasep;

namespace {

int failures = 0;

void report(int idx, const char* what, bool ok) {
  std::printf("criterion %02d %-58s %s\n", idx, what, ok ? "PASS" : "FAIL");
  std::fflush(stdout);
  if (!ok) ++failures;
}

// 1. closed-form gap against the dense spectrum
bool crit_gap_formula() {
  for (int N = 3; N <= 7; ++N)
    for (int k = 1; k < N; ++k)
      for (double p : {0.5, 0.55, 0.7}) {
        Params pr(N, k, p);
        Generator gen = build_generator(pr);
        if (std::abs(pr.gap - exact_gap(gen)) > 1e-9) return false;
      }
  return true;
}

// 2. the weighted sine sums are exact eigenfunctions
bool crit_eigen_residual() {
  for (double p : {0.5, 0.6}) {
    Params pr(6, 3, p);
    SpectralData sd(pr);
    Generator gen = build_generator(pr);
    for (int j = 1; j <= 3; ++j) {
      Eigen::VectorXd f(gen.states.size());
      for (std::size_t i = 0; i < gen.states.size(); ++i)
        f(i) = eval_f(j, to_height(gen.states[i], pr), sd);
      double res = (gen.L * f + sd.gammas(j - 1) * f)
                       .lpNorm<Eigen::Infinity>();
      if (res > 1e-9) return false;
    }
  }
  return true;
}

// 3. stationarity of the geometric weighting and reversibility
bool crit_stationary() {
  for (int N = 3; N <= 7; ++N)
    for (int k = 1; k < N; ++k)
      for (double p : {0.5, 0.6, 0.75}) {
        Params pr(N, k, p);
        Generator gen = build_generator(pr);
        Eigen::VectorXd pi = stationary_vector(gen);
        if ((pi.transpose() * gen.L).lpNorm<Eigen::Infinity>() > 1e-10)
          return false;
        for (int i = 0; i < gen.L.outerSize(); ++i)
          for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator
                   it(gen.L, i);
               it; ++it)
            if (it.row() != it.col() &&
                std::abs(pi(it.row()) * it.value() -
                         pi(it.col()) *
                             gen.L.coeff(it.col(), it.row())) > 1e-12)
              return false;
      }
  return true;
}

// 4. contraction of the two monotone observables under the semigroup
bool crit_contraction() {
  Params pr(5, 2, 0.6);
  Generator gen = build_generator(pr);
  SpectralData sd(pr);
  Eigen::VectorXd f1(gen.states.size()), f0(gen.states.size());
  for (std::size_t i = 0; i < gen.states.size(); ++i) {
    f1(i) = eval_f(1, to_height(gen.states[i], pr), sd);
    f0(i) = eval_f(0, to_height(gen.states[i], pr), sd);
  }
  int top = gen.rank(to_particles(extremal_max(pr), pr));
  int bot = gen.rank(to_particles(extremal_min(pr), pr));
  Eigen::VectorXd itop = Eigen::VectorXd::Zero(gen.states.size()), ibot = itop;
  itop(top) = 1.0;
  ibot(bot) = 1.0;
  for (double t : {0.5, 1.0, 2.0}) {
    Eigen::VectorXd ptop = transient(gen, itop, t);
    Eigen::VectorXd pbot = transient(gen, ibot, t);
    double d1 = ptop.dot(f1) - pbot.dot(f1);
    if (std::abs(d1 - std::exp(-pr.gap * t) * (f1(top) - f1(bot))) > 1e-8)
      return false;
    double d0 = ptop.dot(f0) - pbot.dot(f0);
    if (d0 > std::exp(-pr.rho * t) * (f0(top) - f0(bot)) + 1e-8)
      return false;
  }
  return true;
}

// 5. the one-particle two-site chain in closed form
bool crit_two_state() {
  Params pr(2, 1, 0.6);
  Generator gen = build_generator(pr);
  Eigen::VectorXd pi = stationary_vector(gen);
  Eigen::VectorXd init = Eigen::VectorXd::Zero(2);
  init(gen.rank({1, 0})) = 1.0;
  for (double t : {0.25, 0.8, 2.0}) {
    double d = tv_distance(transient(gen, init, t), pi);
    if (std::abs(d - 0.6 * std::exp(-t)) > 1e-6) return false;
  }
  return std::abs(mixing_time(gen, 0.25) - std::log(2.4)) < 1e-6;
}

// 6. Monte Carlo upper and lower curves sandwich the exact distance
bool crit_sandwich() {
  for (double p : {0.5, 0.6}) {
    Params pr(6, 3, p);
    Generator gen = build_generator(pr);
    auto grid = default_time_grid(pr, 16);
    auto d = tv_curve(gen, grid);
    auto upper = coupling_upper(pr, grid, 10000, 2026);
    auto lower = wilson_lower(pr, grid, 10000, 2026);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (d[i] > upper.value[i] + 3.0 * upper.ci[i]) return false;
      if (lower.value[i] - 3.0 * lower.ci[i] > d[i]) return false;
    }
  }
  return true;
}

// 7. the shared clocks never reorder coupled chains
bool crit_monotone() {
  for (double p : {0.5, 0.6}) {
    Params pr(16, 5, p);
    for (int pair = 0; pair < 500; ++pair) {
      Rng init(4242, stream_tag::kEquilibrium, (std::uint64_t)pair);
      Height u = to_height(sample_pi(pr, init), pr);
      Height v = to_height(sample_pi(pr, init), pr);
      Height hi = u, lo = u;
      for (int x = 0; x <= pr.N; ++x) {
        hi[x] = std::max(u[x], v[x]);
        lo[x] = std::min(u[x], v[x]);
      }
      Rng rng(4243, stream_tag::kDynamics, (std::uint64_t)pair);
      CouplingEngine eng(pr, {hi, lo}, rng);
      double t = 0.0;
      for (int chk = 0; chk < 20 || eng.events() < 1000; ++chk) {
        t += 8.0;
        eng.advance(t);
        Order o = compare(eng.chain(0), eng.chain(1));
        if (o != Order::GE && o != Order::EQ) return false;
        if (chk > 200) return false; // rate collapse would be a bug
      }
    }
  }
  return true;
}

// 8. single-chain empirical law vs uniformized transient
bool crit_marginal() {
  Params pr(5, 2, 0.6);
  Generator gen = build_generator(pr);
  Eigen::VectorXd init = Eigen::VectorXd::Zero(gen.states.size());
  init(gen.rank(to_particles(extremal_max(pr), pr))) = 1.0;
  Eigen::VectorXd want = transient(gen, init, 1.0);
  std::vector<long long> counts(gen.states.size(), 0);
  const int reps = 100000;
  for (int r = 0; r < reps; ++r) {
    Rng rng(777, stream_tag::kDynamics, (std::uint64_t)r);
    CouplingEngine eng(pr, {extremal_max(pr)}, rng);
    eng.advance(1.0);
    ++counts[gen.rank(to_particles(eng.chain(0), pr))];
  }
  double tv = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i)
    tv += std::abs((double)counts[i] / reps - want(i));
  return tv / 2.0 <= 0.01;
}

// 9. auxiliary line system keeps its product-geometric spacing law
bool crit_aux_stationarity() {
  const int n = 5;
  const double beta = 0.5;
  Params pr(8, 4, 0.6); // lambda = 1.5
  AuxSystem probe(n, beta, pr);

  const int reps = 100000;
  std::vector<std::vector<std::map<long long, long long>>> hist(
      2, std::vector<std::map<long long, long long>>(n));
  double span_sum = 0.0, span_sq = 0.0;
  for (int r = 0; r < reps; ++r) {
    Rng rng(606, stream_tag::kAuxLine, (std::uint64_t)r);
    AuxSystem sys = init_stationary(n, beta, pr, rng);
    const double checkpoints[2] = {10.0, 50.0};
    for (int c = 0; c < 2; ++c) {
      advance(sys, checkpoints[c], rng);
      for (int i = 1; i <= n; ++i) ++hist[c][i - 1][sys.spacing(i)];
    }
    double span = (double)sys.span();
    span_sum += span;
    span_sq += span * span;
  }
  for (int c = 0; c < 2; ++c)
    for (int i = 1; i <= n; ++i) {
      double mu = probe.mu[i - 1];
      double tv = 0.0, cdf = 0.0;
      long long seen = 0;
      for (auto [m, cnt] : hist[c][i - 1]) seen = std::max(seen, m);
      for (long long m = 1; m <= seen; ++m) {
        double pm = (1.0 - mu) * std::pow(mu, (double)(m - 1));
        cdf += pm;
        auto it = hist[c][i - 1].find(m);
        double emp = it == hist[c][i - 1].end()
                         ? 0.0
                         : (double)it->second / reps;
        tv += std::abs(emp - pm);
      }
      tv += 1.0 - cdf; // unobserved geometric tail
      if (tv / 2.0 > 0.02) return false;
    }
  double span_mean = span_sum / reps;
  double span_sd =
      std::sqrt((span_sq / reps - span_mean * span_mean) / reps);
  return std::abs(span_mean - probe.expected_span()) <= 3.0 * span_sd;
}

// 10. macroscopic profile and edge positions
bool crit_hydro() {
  Params pr(512, 256, 0.55); // alpha 1/2, b 0.1
  auto dist = hydro_distance(pr, {0.5, 1.0, 2.0}, 20, 2210);
  for (const auto& d : dist)
    if (d.median > 0.1) return false;

  Params prb(512, 128, 0.55); // alpha 1/4
  auto pts = boundary_scaling(prb, {1.0}, 10, 2211);
  if (std::abs(pts[0].left_mean - pts[0].ell) > 0.05) return false;
  if (std::abs(pts[0].right_mean - pts[0].r) > 0.05) return false;
  return true;
}

// 11. strong-bias mixing-time constant (prediction 2 at half filling)
bool crit_large_bias() {
  Params pr(256, 128, 0.6); // b = 0.2
  std::vector<double> grid;
  for (double s = 0.8; s <= 3.2001; s += 0.1)
    grid.push_back(s * pr.N / pr.b);
  auto upper = coupling_upper(pr, grid, 400, 1111);
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (upper.value[i] + 3.0 * upper.ci[i] <= 0.25) {
      double scaled = grid[i] * pr.b / pr.N;
      return scaled >= 1.4 && scaled <= 2.6;
    }
  return false;
}

// 12. weak-bias (symmetric) mixing-time constant: the bracket of
//     T_mix * 2 gap / log k straddles 1 within a factor of two
bool crit_small_bias() {
  Params pr(128, 64, 0.5);
  const double s = 2.0 * pr.gap / std::log((double)pr.k);

  std::vector<double> up_grid = default_time_grid(pr, 24);
  auto upper = coupling_upper(pr, up_grid, 300, 1212);
  double t_upper = -1.0;
  for (std::size_t i = 0; i < up_grid.size(); ++i)
    if (upper.value[i] + 3.0 * upper.ci[i] <= 0.25) {
      t_upper = up_grid[i];
      break;
    }
  if (t_upper < 0.0) return false;

  // the lower curve collapses soon after mixing, so a shorter horizon
  // keeps the single-chain runs affordable
  std::vector<double> lo_grid(16);
  double lo = 0.1 / pr.gap, hi = 2.0 * std::log(64.0) / pr.gap;
  for (int i = 0; i < 16; ++i)
    lo_grid[i] = lo * std::pow(hi / lo, i / 15.0);
  auto lower = wilson_lower(pr, lo_grid, 1000, 1212);
  double t_lower = -1.0;
  for (std::size_t i = lo_grid.size(); i-- > 0;)
    if (lower.value[i] - 3.0 * lower.ci[i] >= 0.25) {
      t_lower = lo_grid[i];
      break;
    }
  if (t_lower < 0.0) return false;
  return t_lower * s <= 2.0 && t_upper * s >= 0.5 && t_lower <= t_upper;
}

// 13. pure-jump diffusion bounds and the exponential-moment identity
bool crit_appendix() {
  for (int i = 0; i <= 100000; ++i) {
    double x = -50.0 + 100.0 * i / 100000.0;
    if (std::exp(-x) + x - 1.0 < std::min(1.0, x * x) / 4.0 - 1e-15)
      return false;
  }

  const double a = 10.0, level = 2.0;
  auto abs_rows = check_absorption_bound(
      [&](int r) {
        Rng rng(1313, stream_tag::kMartingale, (std::uint64_t)r);
        return absorbed_walk(a, a * a * 100.0, rng);
      },
      100000, a, {25.0, 100.0});
  for (const auto& row : abs_rows)
    if (row.empirical > row.bound) return false;

  auto br_rows = check_bracket_bound(
      [&](int r) {
        Rng rng(1314, stream_tag::kMartingale, (std::uint64_t)r);
        return updown_walk(a, (a - level) * (a - level) * 100.0 / 2.0, rng);
      },
      100000, a, level, {25.0, 100.0});
  for (const auto& row : br_rows)
    if (row.empirical > row.bound) return false;

  const double t = 5.0;
  std::vector<JumpTrace> poissons;
  poissons.reserve(20000);
  for (int r = 0; r < 20000; ++r) {
    Rng rng(1315, stream_tag::kMartingale, (std::uint64_t)r);
    poissons.push_back(compensated_poisson(t, rng));
  }
  auto rows = check_expo_moment(poissons, {0.1, 0.3, 0.5}, t, 1.0, 1.0, 17);
  for (const auto& row : rows) {
    double closed = std::exp(t * (std::exp(row.lambda) - row.lambda - 1.0));
    if (std::abs(row.empirical - closed) > 3.0 * row.sd) return false;
  }
  return true;
}

// 14. reruns and thread counts leave every artifact byte-identical
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<missing:" + path + ">";
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool same_outputs(const std::string& d1, const std::string& d2) {
  nlohmann::json m1, m2;
  try {
    m1 = nlohmann::json::parse(slurp(d1 + "/manifest.json"));
    m2 = nlohmann::json::parse(slurp(d2 + "/manifest.json"));
  } catch (...) {
    return false;
  }
  // wall-clock is the single intentionally non-reproducible field
  m1.erase("wall_clock_seconds");
  m2.erase("wall_clock_seconds");
  // the output dir and thread count are allowed to differ between runs;
  // everything they produce still has to match
  for (auto* m : {&m1, &m2}) {
    (*m)["config"].erase("out");
    (*m)["config"].erase("threads");
  }
  if (m1 != m2) return false;
  for (const auto& out : m1["outputs"]) {
    std::string f = out["file"];
    if (slurp(d1 + "/" + f) != slurp(d2 + "/" + f)) return false;
  }
  return true;
}

bool crit_determinism() {
  const char* cli = std::getenv("WASEP_CLI");
  if (!cli) {
    std::fprintf(stderr, "WASEP_CLI not set\n");
    return false;
  }
  const std::vector<std::string> cmds = {
      "exact --N 5 --k 2 --p 0.6",
      "sample-pi --N 8 --k 3 --p 0.6 --replicas 200",
      "simulate --N 8 --k 3 --p 0.6 --replicas 50 --t-grid 0.5 1.0",
      "couple --N 6 --k 3 --p 0.5 --replicas 300",
      "mix-bounds --N 6 --k 3 --p 0.6 --replicas 1000",
      "hydro --N 64 --k 32 --p 0.6 --replicas 3 --t-grid 0.5",
      "boundary --N 64 --k 16 --p 0.6 --replicas 3 --t-grid 0.5",
      "aux --N 8 --k 3 --p 0.6 --aux-n 4 --beta 0.5 --t 20 --replicas 500",
      "mgale-check --replicas 500 --t 5",
      "crossover-sweep --N 16 --k 8 --replicas 200 --b-list 0.1 0.2",
  };
  int idx = 0;
  for (const auto& cmd : cmds) {
    std::vector<std::string> dirs;
    for (int threads : {1, 1, 8}) {
      char tmpl[] = "/tmp/acc_det_XXXXXX";
      std::string dir = mkdtemp(tmpl);
      dirs.push_back(dir);
      std::string full = std::string(cli) + " " + cmd + " --seed 9 --threads " +
                         std::to_string(threads) + " --out " + dir +
                         " >/dev/null 2>&1";
      int rc = std::system(full.c_str());
      if (WEXITSTATUS(rc) != 0) {
        std::fprintf(stderr, "determinism: command %d exited %d\n", idx,
                     WEXITSTATUS(rc));
        return false;
      }
    }
    if (!same_outputs(dirs[0], dirs[1]) || !same_outputs(dirs[0], dirs[2])) {
      std::fprintf(stderr, "determinism: mismatch on command %d\n", idx);
      return false;
    }
    ++idx;
  }
  return true;
}

} // namespace

int main() {
  report(1, "gap formula vs dense spectrum (N=3..7)", crit_gap_formula());
  report(2, "eigenfunction residual (N=6, k=3, j=1..3)",
         crit_eigen_residual());
  report(3, "stationary solve and detailed balance (N<=7)",
         crit_stationary());
  report(4, "semigroup contraction identities (N=5, k=2)",
         crit_contraction());
  report(5, "two-state closed forms", crit_two_state());
  report(6, "coupling/moment sandwich of the exact distance",
         crit_sandwich());
  report(7, "monotonicity of the grand coupling (N=16, k=5)",
         crit_monotone());
  report(8, "single-chain marginal law vs uniformization", crit_marginal());
  report(9, "auxiliary line system: stationary spacings",
         crit_aux_stationarity());
  report(10, "hydrodynamic profile and edge scaling (N=512)", crit_hydro());
  report(11, "strong-bias mixing trend (N=256, k=128)", crit_large_bias());
  report(12, "weak-bias mixing trend (N=128, k=64)", crit_small_bias());
  report(13, "pure-jump diffusion and exponential-moment bounds",
         crit_appendix());
  report(14, "byte-identical reruns across thread counts",
         crit_determinism());
  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all 14 criteria passed\n");
  return 0;
}
