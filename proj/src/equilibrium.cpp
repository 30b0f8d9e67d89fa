#include "wasep/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wasep {

EquilibriumTable exact_pi(const Params& pr, long long cap) {
  Generator gen = build_generator(pr, cap);
  EquilibriumTable table{pr, std::move(gen.states), {}, 0.0};
  table.probs.resize(table.states.size());
  double Z = 0.0;
  for (size_t s = 0; s < table.states.size(); ++s) {
    auto st = stats(table.states[s], pr);
    table.probs[s] = std::exp(-(double)st.A * pr.log_lambda);
    Z += table.probs[s];
  }
  for (auto& w : table.probs) w /= Z;
  table.Z = Z;
  return table;
}

namespace {

Config uniform_subset(const Params& pr, Rng& rng) {
  // Fisher-Yates on site indices, keep the first k.
  std::vector<int> sites(pr.N);
  for (int i = 0; i < pr.N; ++i) sites[i] = i;
  for (int i = 0; i < pr.k; ++i) {
    int j = i + (int)rng.below(pr.N - i);
    std::swap(sites[i], sites[j]);
  }
  Config cfg(pr.N, 0);
  for (int i = 0; i < pr.k; ++i) cfg[sites[i]] = 1;
  return cfg;
}

// Uniformized single-chain run from xi_min for the requested model time,
// used only as the rejection sampler's fallback.
Config mcmc_from_min(const Params& pr, double t, Rng& rng) {
  Height h = extremal_min(pr);
  const double Lam = (pr.N - 1); // dominates p + q per site pair
  long long steps = (long long)std::ceil(Lam * t);
  for (long long s = 0; s < steps; ++s) {
    int x = 1 + (int)rng.below(pr.N - 1);
    double u = rng.uniform();
    bool is_max = h[x] == h[x - 1] + 1 && h[x] == h[x + 1] + 1;
    bool is_min = h[x] == h[x - 1] - 1 && h[x] == h[x + 1] - 1;
    if (is_max && u < pr.p)
      h[x] -= 2;
    else if (is_min && u < pr.q)
      h[x] += 2;
  }
  return to_particles(h, pr);
}

} // namespace

Config sample_pi(const Params& pr, Rng& rng, bool* approximate) {
  if (approximate) *approximate = false;
  if (pr.symmetric()) return uniform_subset(pr, rng);

  std::vector<long long> chi(pr.k);
  long long proposals = 0;
  while (true) {
    ++proposals;
    long long total = 0;
    for (int i = 1; i <= pr.k; ++i) {
      // spacing i: geometric with failure prob lambda^(-i)
      chi[i - 1] = rng.geometric_from_log(-(double)i * pr.log_lambda);
      total += chi[i - 1];
    }
    if (total <= pr.N) {
      // reconstruct positions from the right: xi_k = N + 1 - chi_k
      Config cfg(pr.N, 0);
      long long x = pr.N + 1;
      for (int i = pr.k; i >= 1; --i) {
        x -= chi[i - 1];
        cfg[x - 1] = 1;
      }
      return cfg;
    }
    if (proposals == 10000) {
      if (approximate) *approximate = true;
      return mcmc_from_min(pr, 20.0 / pr.gap, rng);
    }
  }
}

namespace {

std::vector<ProfilePoint> profile_from_marginals(
    const Params& pr, const std::vector<double>& marginal) {
  std::vector<ProfilePoint> out(pr.N);
  for (int x = 1; x <= pr.N; ++x) {
    ProfilePoint& pt = out[x - 1];
    pt.site = x;
    pt.value = marginal[x - 1];
    pt.lower = (double)pr.k / pr.N * std::exp((x - pr.N) * pr.log_lambda);
    pt.upper = (double)pr.k / pr.N * std::exp((x - 1) * pr.log_lambda);
    pt.within_bounds =
        pt.value >= pt.lower - 1e-12 && pt.value <= pt.upper + 1e-12;
  }
  return out;
}

} // namespace

std::vector<ProfilePoint> density_profile(const EquilibriumTable& table) {
  std::vector<double> marginal(table.pr.N, 0.0);
  for (size_t s = 0; s < table.states.size(); ++s)
    for (int x = 0; x < table.pr.N; ++x)
      if (table.states[s][x]) marginal[x] += table.probs[s];
  return profile_from_marginals(table.pr, marginal);
}

std::vector<ProfilePoint> density_profile(const Params& pr,
                                          const std::vector<Config>& samples) {
  if (samples.empty())
    throw std::invalid_argument("density_profile: no samples");
  std::vector<double> marginal(pr.N, 0.0);
  for (const auto& cfg : samples)
    for (int x = 0; x < pr.N; ++x)
      if (cfg[x]) marginal[x] += 1.0;
  for (auto& m : marginal) m /= samples.size();
  return profile_from_marginals(pr, marginal);
}

double GapStatistics::q_quantile(double level) const {
  double cum = 0.0;
  for (size_t m = 0; m < q_pmf.size(); ++m) {
    cum += q_pmf[m];
    if (cum >= level) return (double)m;
  }
  return (double)(q_pmf.size() - 1);
}

GapStatistics gap_statistics(const Params& pr,
                             const std::vector<Config>& samples) {
  if (samples.empty())
    throw std::invalid_argument("gap_statistics: no samples");
  GapStatistics out;
  out.q_pmf.assign(pr.N + 1, 0.0);
  out.q1_pmf.assign(pr.N + 1, 0.0);
  out.q2_pmf.assign(pr.N + 1, 0.0);
  for (const auto& cfg : samples) {
    auto st = stats(cfg, pr);
    out.q_pmf[st.Q] += 1.0;
    out.q1_pmf[st.Q1] += 1.0;
    out.q2_pmf[st.Q2] += 1.0;
    out.q_mean += st.Q;
  }
  const double n = (double)samples.size();
  for (auto* v : {&out.q_pmf, &out.q1_pmf, &out.q2_pmf})
    for (auto& x : *v) x /= n;
  out.q_mean /= n;
  return out;
}

std::vector<LogDensityPoint> log_density_profile(
    const Params& pr, const std::vector<Config>& samples, double eps,
    int grid) {
  if (pr.k < 2)
    throw std::invalid_argument("log_density_profile: requires k >= 2");
  if (samples.empty())
    throw std::invalid_argument("log_density_profile: no samples");
  std::vector<LogDensityPoint> out;
  for (int g = 1; g <= grid; ++g) {
    double z = (double)g / (grid + 1);
    int lo = std::max(1, (int)std::ceil((z - eps) * pr.N));
    int hi = std::min(pr.N, (int)std::floor((z + eps) * pr.N));
    double mean = 0.0;
    for (const auto& cfg : samples)
      for (int x = lo; x <= hi; ++x) mean += cfg[x - 1];
    mean /= samples.size();
    out.push_back({z, mean, std::log(std::max(mean, 1e-300)) /
                                std::log((double)pr.k)});
  }
  return out;
}

} // namespace wasep
