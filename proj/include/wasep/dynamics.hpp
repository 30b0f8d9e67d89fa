#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wasep/model.hpp"
#include "wasep/params.hpp"
#include "wasep/rng.hpp"
#include "wasep/spectral.hpp"

namespace wasep {

/// Event-driven simulation of the corner-flip dynamics for a set of chains
/// evolving under one shared Poisson-clock coupling: the active clocks are
/// the distinct (site, height) pairs at which some chain has a flippable
/// corner, and a clock that fires flips every chain holding that exact
/// corner. Chains ordered at time zero stay ordered, and coalesced chains
/// share all their clocks forever.
class CouplingEngine {
 public:
  CouplingEngine(const Params& pr, std::vector<Height> chains, Rng rng);

  void advance(double t_target);

  /// Runs until all chains coincide; returns the merging time, or a value
  /// > t_max (the interrupted event time) if it exceeds t_max. Use
  /// coalesced() to distinguish.
  double merging_time(double t_max);

  double time() const { return clock_; }
  std::uint64_t events() const { return events_; }
  int chain_count() const { return (int)heights_.size(); }
  const Height& chain(int c) const { return heights_[c]; }
  bool coalesced() const;
  const Params& params() const { return pr_; }

 private:
  struct IndexedSet {
    std::vector<std::uint32_t> keys;
    std::vector<std::int32_t> pos; // key -> index in keys, -1 when absent
    void insert(std::uint32_t k) {
      pos[k] = (std::int32_t)keys.size();
      keys.push_back(k);
    }
    void erase(std::uint32_t k) {
      std::uint32_t last = keys.back();
      keys[pos[k]] = last;
      pos[last] = pos[k];
      keys.pop_back();
      pos[k] = -1;
    }
  };

  // corner codes per site: 0 none, 1 local max, 2 local min
  int corner_at(int c, int x) const;
  std::uint32_t key_of(int x, int h, int type) const;
  void register_corner(int c, int x, int delta); // delta +1 add, -1 remove
  bool step(double t_limit);                     // one event, false if past limit

  Params pr_;
  std::vector<Height> heights_;
  std::vector<std::vector<std::int8_t>> corner_;
  std::vector<std::int16_t> count_;  // chains holding each key
  IndexedSet max_set_, min_set_;
  std::vector<int> diff_;            // per chain: #sites differing from chain 0
  double clock_ = 0.0;
  std::uint64_t events_ = 0;
  Rng rng_;
};

/// Per-replica observable record sampled on a fixed schedule.
struct Trajectory {
  std::uint64_t replica = 0;
  std::vector<double> times;
  // [time][chain]
  std::vector<std::vector<ConfigStats>> stats;
  std::vector<std::vector<double>> f1, f0;
  std::vector<double> area;  // weighted area chain0 vs last chain
  std::vector<double> hstat;
  std::vector<std::uint8_t> coalesced;
};

enum class ChainInit { Max, Min, Pi };

/// Deterministic ensemble: replica r uses the stream (seed, kDynamics, r)
/// regardless of thread count.
std::vector<Trajectory> run_ensemble(const Params& pr,
                                     const std::vector<ChainInit>& chains,
                                     const std::vector<double>& schedule,
                                     int replicas, std::uint64_t seed,
                                     int threads = 1);

} // namespace wasep
