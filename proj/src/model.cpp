#include "wasep/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace wasep {

void validate_config(const Config& cfg, const Params& pr) {
  if ((int)cfg.size() != pr.N)
    throw std::invalid_argument("config: wrong length");
  int count = 0;
  for (auto v : cfg) {
    if (v > 1) throw std::invalid_argument("config: entries must be 0/1");
    count += v;
  }
  if (count != pr.k)
    throw std::invalid_argument("config: particle count != k");
}

void validate_height(const Height& h, const Params& pr) {
  if ((int)h.size() != pr.N + 1)
    throw std::invalid_argument("height: wrong length");
  if (h[0] != 0) throw std::invalid_argument("height: h(0) != 0");
  for (int x = 1; x <= pr.N; ++x)
    if (std::abs(h[x] - h[x - 1]) != 1)
      throw std::invalid_argument("height: step is not +-1");
  if (h[pr.N] != 2 * pr.k - pr.N)
    throw std::invalid_argument("height: h(N) != 2k - N");
}

Height to_height(const Config& cfg, const Params& pr) {
  validate_config(cfg, pr);
  Height h(pr.N + 1);
  h[0] = 0;
  for (int x = 1; x <= pr.N; ++x) h[x] = h[x - 1] + (cfg[x - 1] ? 1 : -1);
  return h;
}

Config to_particles(const Height& h, const Params& pr) {
  validate_height(h, pr);
  Config cfg(pr.N);
  for (int x = 1; x <= pr.N; ++x) cfg[x - 1] = (h[x] > h[x - 1]) ? 1 : 0;
  return cfg;
}

Height extremal_max(const Params& pr) {
  Height h(pr.N + 1);
  for (int x = 0; x <= pr.N; ++x) h[x] = std::min(x, 2 * pr.k - x);
  return h;
}

Height extremal_min(const Params& pr) {
  Height h(pr.N + 1);
  for (int x = 0; x <= pr.N; ++x)
    h[x] = std::max(-x, x - 2 * (pr.N - pr.k));
  return h;
}

ConfigStats stats(const Config& cfg, const Params& pr) {
  validate_config(cfg, pr);
  ConfigStats st;
  st.ell = 0;
  st.r = 0;
  int run0 = 0, run1 = 0;
  int idx = 0;        // particles seen so far
  long long A = 0;
  for (int x = 1; x <= pr.N; ++x) {
    if (cfg[x - 1]) {
      ++idx;
      A += (pr.N - pr.k + idx) - x;
      if (st.ell == 0) st.ell = x;
      ++run1;
      run0 = 0;
    } else {
      st.r = x;
      ++run0;
      run1 = 0;
    }
    st.Q1 = std::max(st.Q1, run0);
    st.Q2 = std::max(st.Q2, run1);
  }
  st.Q = std::max(st.Q1, st.Q2);
  st.A = A;
  st.L = st.ell - 1;
  st.R = st.r;
  st.D = std::max(std::abs(st.L - (pr.N - pr.k)),
                  std::abs(st.R - (pr.N - pr.k)));
  return st;
}

Order compare(const Height& a, const Height& b) {
  if (a.size() != b.size() || a.back() != b.back())
    throw std::invalid_argument("compare: mismatched (N, k)");
  bool le = true, ge = true;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) le = false;
    if (a[i] < b[i]) ge = false;
  }
  if (le && ge) return Order::EQ;
  if (le) return Order::LE;
  if (ge) return Order::GE;
  return Order::Incomparable;
}

std::string config_to_string(const Config& cfg) {
  std::string s(cfg.size(), '0');
  for (size_t i = 0; i < cfg.size(); ++i)
    if (cfg[i]) s[i] = '1';
  return s;
}

Config config_from_string(const std::string& s) {
  Config cfg(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '0' && s[i] != '1')
      throw std::invalid_argument("config string: expected 0/1");
    cfg[i] = (s[i] == '1');
  }
  return cfg;
}

} // namespace wasep
