#include "wasep/aux_line.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wasep {

AuxSystem::AuxSystem(int n_, double beta_, const Params& pr_)
    : n(n_), beta(beta_), pr(pr_) {
  if (n < 1) throw std::invalid_argument("aux: n >= 1 required");
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("aux: beta in (0,1) required");
  if (pr.symmetric())
    throw std::invalid_argument(
        "aux: lambda > 1 required (spacings have no stationary law at "
        "lambda = 1)");
  mu.resize(n);
  for (int i = 1; i <= n; ++i)
    mu[i - 1] = beta + std::exp(-i * pr.log_lambda) * (1.0 - beta);
  positions.assign(n + 1, 0);
}

double AuxSystem::expected_span() const {
  double s = 0.0;
  for (double m : mu) s += 1.0 / (1.0 - m);
  return s;
}

AuxSystem init_stationary(int n, double beta, const Params& pr, Rng& rng) {
  AuxSystem sys(n, beta, pr);
  sys.positions[n] = 0;
  for (int i = n; i >= 1; --i) {
    long long gap = rng.geometric_from_log(std::log(sys.mu[i - 1]));
    sys.positions[i - 1] = sys.positions[i] - gap;
  }
  return sys;
}

void advance(AuxSystem& sys, double t_target, Rng& rng) {
  if (t_target < sys.time)
    throw std::invalid_argument("aux advance: target before current time");
  const int n = sys.n;
  auto& pos = sys.positions;
  const double slow_rate = sys.beta * sys.pr.b;
  // n is small here; recomputing the full rate table per event is fine
  std::vector<double> rate(2 * n + 1);
  while (true) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      rate[2 * i] = (pos[i] + 1 < pos[i + 1]) ? sys.pr.p : 0.0;  // right
      rate[2 * i + 1] =
          (i == 0 || pos[i - 1] < pos[i] - 1) ? sys.pr.q : 0.0;  // left
      total += rate[2 * i] + rate[2 * i + 1];
    }
    rate[2 * n] = slow_rate;
    total += slow_rate;

    double dt = rng.exponential(total);
    if (sys.time + dt > t_target) {
      sys.time = t_target;
      return;
    }
    sys.time += dt;
    double u = rng.uniform() * total;
    int ev = 0;
    while (ev < 2 * n && u >= rate[ev]) u -= rate[ev++];
    if (ev == 2 * n)
      ++pos[n];
    else if (ev % 2 == 0)
      ++pos[ev / 2];
    else
      --pos[ev / 2];
  }
}

DeviationStats deviation_stats(int n, double beta, const Params& pr, double t,
                               int replicas, std::uint64_t seed,
                               const std::vector<double>& a_grid) {
  if (t < 0.0) throw std::invalid_argument("deviation_stats: t >= 0 required");
  if (replicas < 1)
    throw std::invalid_argument("deviation_stats: replicas >= 1 required");

  DeviationStats out;
  out.t = t;
  out.replicas = replicas;
  out.a_grid = a_grid;
  const double binv = 1.0 / pr.b;
  out.scale = std::sqrt(pr.b * t) +
              (n + binv * std::log(std::min((double)n, binv))) / (1.0 - beta);

  out.centered_first.reserve(replicas);
  double slow_sum = 0.0, slow_sq = 0.0, span_sum = 0.0;
  for (int r = 0; r < replicas; ++r) {
    Rng rng(seed, stream_tag::kAuxLine, (std::uint64_t)r);
    AuxSystem sys = init_stationary(n, beta, pr, rng);
    advance(sys, t, rng);
    double centered = (double)sys.positions[0] - t * beta * pr.b;
    out.centered_first.push_back(centered);
    double slow = (double)sys.positions[n];
    slow_sum += slow;
    slow_sq += slow * slow;
    span_sum += (double)sys.span();
  }
  std::sort(out.centered_first.begin(), out.centered_first.end());
  double m1 = 0.0;
  for (double v : out.centered_first) m1 += v;
  out.first_centered_mean = m1 / replicas;
  out.slow_mean = slow_sum / replicas;
  out.slow_var = slow_sq / replicas - out.slow_mean * out.slow_mean;
  out.span_mean = span_sum / replicas;
  out.span_expected = AuxSystem(n, beta, pr).expected_span();

  for (double A : a_grid) {
    double thr = -A * out.scale;
    auto it = std::upper_bound(out.centered_first.begin(),
                               out.centered_first.end(), thr);
    out.fraction_below.push_back(
        (double)(it - out.centered_first.begin()) / replicas);
  }
  return out;
}

double DeviationStats::quantile(double level) const {
  if (centered_first.empty()) return 0.0;
  double idx = level * (centered_first.size() - 1);
  return centered_first[(std::size_t)(idx + 0.5)];
}

} // namespace wasep
