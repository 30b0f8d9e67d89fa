#include "wasep/martingale.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wasep {

namespace {

void wilson_interval(long long hits, long long n, double& center,
                     double& half) {
  const double z = 1.959963984540054;
  double phat = (double)hits / n;
  double denom = 1.0 + z * z / n;
  center = (phat + z * z / (2.0 * n)) / denom;
  half = z * std::sqrt(phat * (1.0 - phat) / n + z * z / (4.0 * n * n)) /
         denom;
}

} // namespace

double JumpTrace::value_at(double t) const {
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t idx = (std::size_t)(it - times.begin());
  if (idx == 0) return values.front() + drift * t;  // t before first event
  double base = values[idx - 1];
  return base + drift * (t - times[idx - 1]);
}

double JumpTrace::bracket_at(double t) const {
  if (bracket_rate < 0.0)
    throw std::invalid_argument("trace carries no bracket");
  double stop = absorbed ? std::min(t, tau) : t;
  return bracket_rate * stop;
}

double JumpTrace::hitting_time_below(double level) const {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (values[i] <= level) return times[i];
  return t_end + 1.0;
}

JumpTrace absorbed_walk(double a, double t_max, Rng& rng) {
  JumpTrace tr;
  tr.t_end = t_max;
  tr.bracket_rate = 2.0;
  double t = 0.0, m = a;
  tr.times.push_back(0.0);
  tr.values.push_back(m);
  while (m > 0.0) {
    t += rng.exponential(2.0);
    if (t > t_max) return tr;
    m += (rng.uniform() < 0.5) ? 1.0 : -1.0;
    tr.times.push_back(t);
    tr.values.push_back(m);
  }
  tr.absorbed = true;
  tr.tau = t;
  return tr;
}

JumpTrace compensated_poisson(double t_max, Rng& rng) {
  JumpTrace tr;
  tr.t_end = t_max;
  tr.drift = -1.0;
  tr.bracket_rate = 1.0;
  double t = 0.0;
  long long jumps = 0;
  tr.times.push_back(0.0);
  tr.values.push_back(0.0);
  while (true) {
    t += rng.exponential(1.0);
    if (t > t_max) return tr;
    ++jumps;
    tr.times.push_back(t);
    tr.values.push_back((double)jumps - t);
  }
}

JumpTrace updown_walk(double a, double t_max, Rng& rng) {
  JumpTrace tr;
  tr.t_end = t_max;
  tr.bracket_rate = 2.0;
  double t = 0.0, m = a;
  tr.times.push_back(0.0);
  tr.values.push_back(m);
  while (true) {
    t += rng.exponential(2.0);
    if (t > t_max) return tr;
    m += (rng.uniform() < 0.5) ? 1.0 : -1.0;
    tr.times.push_back(t);
    tr.values.push_back(m);
  }
}

namespace {

void check_absorption_preconditions(const JumpTrace& tr, double a) {
  if (tr.values.front() > a)
    throw std::invalid_argument("absorption check: a trace starts above a");
  for (double v : tr.values)
    if (v < 0.0)
      throw std::invalid_argument("absorption check: negative value");
}

// a trace still alive at its horizon counts as an exceedance
bool absorption_hit(const JumpTrace& tr, double thr) {
  return !tr.absorbed || tr.tau >= thr;
}

// traces that never reach the level within the horizon are counted as
// exceedances: the bracket only grows along the path
bool bracket_hit(const JumpTrace& tr, double level, double thr) {
  double tb = tr.hitting_time_below(level);
  if (tb > tr.t_end) return true;
  return tr.bracket_at(tb) >= thr;
}

std::vector<BoundRow> finish_rows(const std::vector<double>& u_grid,
                                  const std::vector<long long>& hits,
                                  long long n, double bound_coef) {
  std::vector<BoundRow> out;
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    BoundRow row;
    row.u = u_grid[i];
    row.bound = bound_coef / std::sqrt(u_grid[i]);
    double center, half;
    wilson_interval(hits[i], n, center, half);
    row.empirical = (double)hits[i] / n;
    row.ci = half;
    row.pass = row.empirical - 3.0 * half <= row.bound;
    out.push_back(row);
  }
  return out;
}

} // namespace

std::vector<BoundRow> check_absorption_bound(
    const std::vector<JumpTrace>& traces, double a,
    const std::vector<double>& u_grid) {
  if (traces.empty())
    throw std::invalid_argument("absorption check: no traces");
  std::vector<long long> hits(u_grid.size(), 0);
  for (const auto& tr : traces) {
    check_absorption_preconditions(tr, a);
    for (std::size_t i = 0; i < u_grid.size(); ++i)
      if (absorption_hit(tr, a * a * u_grid[i])) ++hits[i];
  }
  return finish_rows(u_grid, hits, (long long)traces.size(), 4.0);
}

std::vector<BoundRow> check_absorption_bound(
    const TraceSource& make, int replicas, double a,
    const std::vector<double>& u_grid) {
  if (replicas < 1)
    throw std::invalid_argument("absorption check: no traces");
  std::vector<long long> hits(u_grid.size(), 0);
  for (int r = 0; r < replicas; ++r) {
    JumpTrace tr = make(r);
    check_absorption_preconditions(tr, a);
    for (std::size_t i = 0; i < u_grid.size(); ++i)
      if (absorption_hit(tr, a * a * u_grid[i])) ++hits[i];
  }
  return finish_rows(u_grid, hits, replicas, 4.0);
}

std::vector<BoundRow> check_bracket_bound(const std::vector<JumpTrace>& traces,
                                          double a, double b,
                                          const std::vector<double>& u_grid) {
  if (traces.empty()) throw std::invalid_argument("bracket check: no traces");
  if (!(a > b)) throw std::invalid_argument("bracket check: need a > b");
  const double gap2 = (a - b) * (a - b);
  std::vector<long long> hits(u_grid.size(), 0);
  for (const auto& tr : traces)
    for (std::size_t i = 0; i < u_grid.size(); ++i)
      if (bracket_hit(tr, b, gap2 * u_grid[i])) ++hits[i];
  return finish_rows(u_grid, hits, (long long)traces.size(), 8.0);
}

std::vector<BoundRow> check_bracket_bound(const TraceSource& make,
                                          int replicas, double a, double b,
                                          const std::vector<double>& u_grid) {
  if (replicas < 1) throw std::invalid_argument("bracket check: no traces");
  if (!(a > b)) throw std::invalid_argument("bracket check: need a > b");
  const double gap2 = (a - b) * (a - b);
  std::vector<long long> hits(u_grid.size(), 0);
  for (int r = 0; r < replicas; ++r) {
    JumpTrace tr = make(r);
    for (std::size_t i = 0; i < u_grid.size(); ++i)
      if (bracket_hit(tr, b, gap2 * u_grid[i])) ++hits[i];
  }
  return finish_rows(u_grid, hits, replicas, 8.0);
}

std::vector<ExpoRow> check_expo_moment(const std::vector<JumpTrace>& traces,
                                       const std::vector<double>& lambda_grid,
                                       double t, double B, double S,
                                       std::uint64_t seed) {
  if (traces.empty()) throw std::invalid_argument("expo check: no traces");
  const std::size_t n = traces.size();
  std::vector<ExpoRow> out;
  Rng boot(seed, stream_tag::kMartingale, 0);
  for (double lam : lambda_grid) {
    ExpoRow row;
    row.lambda = lam;
    row.bound = std::exp(B * t * (std::exp(lam * S) - lam * S - 1.0));

    std::vector<double> expo(n);
    double shift = -1e300;
    for (std::size_t i = 0; i < n; ++i) {
      expo[i] = lam * traces[i].value_at(t);
      shift = std::max(shift, expo[i]);
    }
    auto lse_mean = [&](const std::vector<double>& xs) {
      double s = 0.0;
      for (double x : xs) s += std::exp(x - shift);
      return std::exp(shift) * s / xs.size();
    };
    row.empirical = lse_mean(expo);

    const int resamples = 1000;
    double bs = 0.0, bs2 = 0.0;
    std::vector<double> re(n);
    for (int r = 0; r < resamples; ++r) {
      for (std::size_t i = 0; i < n; ++i)
        re[i] = expo[boot.below((std::uint64_t)n)];
      double m = lse_mean(re);
      bs += m;
      bs2 += m * m;
    }
    bs /= resamples;
    row.sd = std::sqrt(std::max(0.0, bs2 / resamples - bs * bs));
    row.pass = row.empirical - 3.0 * row.sd <= row.bound * (1.0 + 1e-9);
    out.push_back(row);
  }
  return out;
}

} // namespace wasep
