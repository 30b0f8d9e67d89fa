#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wasep/params.hpp"

namespace wasep {

/// Occupancy vector, sites 1..N stored at indices 0..N-1.
using Config = std::vector<std::uint8_t>;

/// Height function, values at lattice points 0..N. h[0] = 0, unit steps,
/// h[N] = 2k - N.
using Height = std::vector<int>;

enum class Order { LE, GE, EQ, Incomparable };

struct ConfigStats {
  int ell = 0;  // leftmost particle position (1-based)
  int r = 0;    // rightmost empty site (1-based), 0 when none
  int L = 0;    // ell - 1
  int R = 0;    // r
  int Q1 = 0;   // longest run of empty sites
  int Q2 = 0;   // longest run of particles
  int Q = 0;    // max(Q1, Q2)
  long long A = 0; // minimal number of right moves down to xi_min
  int D = 0;    // max(|L - (N-k)|, |R - (N-k)|)
};

void validate_config(const Config& cfg, const Params& pr);
void validate_height(const Height& h, const Params& pr);

Height to_height(const Config& cfg, const Params& pr);
Config to_particles(const Height& h, const Params& pr);

/// Maximal (wedge) or minimal (vee) height function.
Height extremal_max(const Params& pr);
Height extremal_min(const Params& pr);

ConfigStats stats(const Config& cfg, const Params& pr);

/// Pointwise partial order on height functions with the same (N, k).
Order compare(const Height& a, const Height& b);

/// 0/1 text form, site 1 first.
std::string config_to_string(const Config& cfg);
Config config_from_string(const std::string& s);

} // namespace wasep
