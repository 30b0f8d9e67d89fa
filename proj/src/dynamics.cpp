#include "wasep/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "wasep/equilibrium.hpp"

namespace wasep {

CouplingEngine::CouplingEngine(const Params& pr, std::vector<Height> chains,
                               Rng rng)
    : pr_(pr), heights_(std::move(chains)), rng_(rng) {
  if (heights_.empty())
    throw std::invalid_argument("engine: at least one chain required");
  for (const auto& h : heights_) validate_height(h, pr_);

  const std::size_t keyspace =
      2ull * (pr_.N + 1) * (2 * pr_.N + 1);
  count_.assign(keyspace, 0);
  max_set_.pos.assign(keyspace, -1);
  min_set_.pos.assign(keyspace, -1);

  corner_.assign(heights_.size(),
                 std::vector<std::int8_t>(pr_.N + 1, 0));
  for (int c = 0; c < (int)heights_.size(); ++c)
    for (int x = 1; x <= pr_.N - 1; ++x) {
      corner_[c][x] = (std::int8_t)corner_at(c, x);
      if (corner_[c][x]) register_corner(c, x, +1);
    }

  diff_.assign(heights_.size(), 0);
  for (int c = 1; c < (int)heights_.size(); ++c)
    for (int x = 0; x <= pr_.N; ++x)
      if (heights_[c][x] != heights_[0][x]) ++diff_[c];
}

int CouplingEngine::corner_at(int c, int x) const {
  const Height& h = heights_[c];
  if (h[x] == h[x - 1] + 1 && h[x] == h[x + 1] + 1) return 1;
  if (h[x] == h[x - 1] - 1 && h[x] == h[x + 1] - 1) return 2;
  return 0;
}

std::uint32_t CouplingEngine::key_of(int x, int h, int type) const {
  return (std::uint32_t)(((h + pr_.N) * (pr_.N + 1) + x) * 2 + (type - 1));
}

void CouplingEngine::register_corner(int c, int x, int delta) {
  const int type = corner_[c][x];
  const std::uint32_t k = key_of(x, heights_[c][x], type);
  IndexedSet& set = (type == 1) ? max_set_ : min_set_;
  count_[k] = (std::int16_t)(count_[k] + delta);
  if (delta > 0 && count_[k] == 1) set.insert(k);
  if (delta < 0 && count_[k] == 0) set.erase(k);
}

bool CouplingEngine::coalesced() const {
  for (int c = 1; c < (int)heights_.size(); ++c)
    if (diff_[c] != 0) return false;
  return true;
}

bool CouplingEngine::step(double t_limit) {
  const double rate =
      pr_.p * max_set_.keys.size() + pr_.q * min_set_.keys.size();
  if (rate <= 0.0) { // frozen (impossible for valid states, but safe)
    clock_ = t_limit;
    return false;
  }
  const double dt = rng_.exponential(rate);
  if (clock_ + dt > t_limit) {
    clock_ = t_limit;
    return false;
  }
  clock_ += dt;
  ++events_;

  // pick a clock proportionally: weight p per max pair, q per min pair
  const double wmax = pr_.p * max_set_.keys.size();
  const double u = rng_.uniform() * rate;
  int type;
  std::uint32_t key;
  if (u < wmax) {
    type = 1;
    std::size_t i = std::min((std::size_t)(u / pr_.p),
                             max_set_.keys.size() - 1);
    key = max_set_.keys[i];
  } else {
    type = 2;
    std::size_t i = std::min((std::size_t)((u - wmax) / pr_.q),
                             min_set_.keys.size() - 1);
    key = min_set_.keys[i];
  }
  const int x = (int)((key / 2) % (pr_.N + 1));
  const int lvl = (int)((key / 2) / (pr_.N + 1)) - pr_.N;

  // apply to every chain holding this exact corner
  for (int c = 0; c < (int)heights_.size(); ++c) {
    if (heights_[c][x] != lvl || corner_[c][x] != type) continue;
    // old registrations around x go away first
    for (int y = std::max(1, x - 1); y <= std::min(pr_.N - 1, x + 1); ++y)
      if (corner_[c][y]) register_corner(c, y, -1);
    const int old = heights_[c][x];
    heights_[c][x] += (type == 1) ? -2 : +2;
    // track discrepancy counts against chain 0 at the flipped site
    if (c == 0) {
      for (int d = 1; d < (int)heights_.size(); ++d) {
        bool was = heights_[d][x] != old;
        bool is = heights_[d][x] != heights_[0][x];
        diff_[d] += (int)is - (int)was;
      }
    } else {
      bool was = old != heights_[0][x];
      bool is = heights_[c][x] != heights_[0][x];
      diff_[c] += (int)is - (int)was;
    }
    for (int y = std::max(1, x - 1); y <= std::min(pr_.N - 1, x + 1); ++y) {
      corner_[c][y] = (std::int8_t)corner_at(c, y);
      if (corner_[c][y]) register_corner(c, y, +1);
    }
  }
  return true;
}

void CouplingEngine::advance(double t_target) {
  if (t_target < clock_)
    throw std::invalid_argument("advance: target before current time");
  while (step(t_target)) {
  }
}

double CouplingEngine::merging_time(double t_max) {
  if (coalesced()) return clock_;
  while (clock_ < t_max) {
    if (!step(t_max)) break;
    if (coalesced()) return clock_;
  }
  return t_max + 1.0;
}

namespace {

Height init_chain(const Params& pr, ChainInit which, Rng& rng) {
  switch (which) {
    case ChainInit::Max:
      return extremal_max(pr);
    case ChainInit::Min:
      return extremal_min(pr);
    case ChainInit::Pi:
      return to_height(sample_pi(pr, rng), pr);
  }
  throw std::logic_error("unreachable");
}

bool chains_ordered(const std::vector<Height>& hs) {
  for (size_t c = 1; c < hs.size(); ++c)
    if (compare(hs[c - 1], hs[c]) == Order::Incomparable) return false;
  return true;
}

} // namespace

std::vector<Trajectory> run_ensemble(const Params& pr,
                                     const std::vector<ChainInit>& chains,
                                     const std::vector<double>& schedule,
                                     int replicas, std::uint64_t seed,
                                     int threads) {
  if (replicas < 1)
    throw std::invalid_argument("run_ensemble: replicas >= 1 required");
  for (size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1])
      throw std::invalid_argument("run_ensemble: schedule must increase");

  const SpectralData sd(pr);
  std::vector<Trajectory> out(replicas);

  auto run_replica = [&](int r) {
    // pi chains draw from their own stream so the dynamics stream is
    // independent of the initial condition
    Rng init_rng(seed, stream_tag::kEquilibrium, (std::uint64_t)r);
    Rng dyn_rng(seed, stream_tag::kDynamics, (std::uint64_t)r);
    std::vector<Height> hs;
    hs.reserve(chains.size());
    for (auto which : chains) hs.push_back(init_chain(pr, which, init_rng));
    const bool ordered = chains_ordered(hs);

    CouplingEngine eng(pr, std::move(hs), dyn_rng);
    Trajectory& tr = out[r];
    tr.replica = (std::uint64_t)r;
    for (double t : schedule) {
      eng.advance(t);
      tr.times.push_back(t);
      std::vector<ConfigStats> st;
      std::vector<double> f1, f0;
      for (int c = 0; c < eng.chain_count(); ++c) {
        const Height& h = eng.chain(c);
        st.push_back(stats(to_particles(h, pr), pr));
        f1.push_back(eval_f(1, h, sd));
        f0.push_back(eval_f(0, h, sd));
      }
      if (eng.chain_count() >= 2 && ordered) {
        const Height& top = eng.chain(0);
        const Height& bot = eng.chain(eng.chain_count() - 1);
        auto ord = compare(top, bot);
        const Height& hi = (ord == Order::GE || ord == Order::EQ) ? top : bot;
        const Height& lo = (&hi == &top) ? bot : top;
        tr.area.push_back(weighted_area(hi, lo, sd));
        tr.hstat.push_back(h_statistic(hi, lo, sd));
      } else {
        tr.area.push_back(0.0);
        tr.hstat.push_back(0.0);
      }
      tr.coalesced.push_back(eng.coalesced() ? 1 : 0);
      tr.stats.push_back(std::move(st));
      tr.f1.push_back(std::move(f1));
      tr.f0.push_back(std::move(f0));
    }
  };

  if (threads <= 1) {
    for (int r = 0; r < replicas; ++r) run_replica(r);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (int r = next.fetch_add(1); r < replicas; r = next.fetch_add(1))
          run_replica(r);
      });
    for (auto& th : pool) th.join();
  }
  return out;
}

} // namespace wasep
