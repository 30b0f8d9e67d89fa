#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wasep/martingale.hpp"

using namespace wasep;

TEST_CASE("pointwise exponential inequality on a dense grid") {
  for (int i = 0; i <= 100000; ++i) {
    double x = -50.0 + 100.0 * i / 100000.0;
    double lhs = std::exp(-x) + x - 1.0;
    double rhs = std::min(1.0, x * x) / 4.0;
    REQUIRE(lhs >= rhs - 1e-15);
  }
}

TEST_CASE("trace bookkeeping") {
  JumpTrace tr;
  tr.times = {0.0, 1.0, 2.5};
  tr.values = {3.0, 4.0, 3.0};
  tr.t_end = 5.0;
  CHECK(tr.value_at(0.5) == 3.0);
  CHECK(tr.value_at(1.0) == 4.0);
  CHECK(tr.value_at(4.9) == 3.0);
  CHECK(tr.hitting_time_below(3.5) == 0.0);
  CHECK(tr.hitting_time_below(2.0) == 6.0); // never
  CHECK_THROWS(tr.bracket_at(1.0));         // no bracket attached

  JumpTrace cp;
  cp.times = {0.0, 2.0};
  cp.values = {0.0, -1.0};
  cp.drift = -1.0;
  cp.t_end = 10.0;
  // between jumps the compensator keeps pulling down
  CHECK(cp.value_at(1.0) == doctest::Approx(-1.0));
  CHECK(cp.value_at(3.0) == doctest::Approx(-2.0));
}

TEST_CASE("small u makes the absorption bound vacuous") {
  std::vector<JumpTrace> traces;
  Rng rng(8, stream_tag::kMartingale, 0);
  for (int i = 0; i < 200; ++i)
    traces.push_back(absorbed_walk(4.0, 500.0, rng));
  auto rows = check_absorption_bound(traces, 4.0, {1.0, 4.0, 16.0});
  for (const auto& r : rows) {
    CHECK(r.bound >= 1.0);
    CHECK(r.pass);
  }
}

TEST_CASE("absorption tail of the symmetric walk sits under the bound") {
  const double a = 10.0;
  auto rows = check_absorption_bound(
      [&](int i) {
        Rng rng(17, stream_tag::kMartingale, (std::uint64_t)i);
        return absorbed_walk(a, a * a * 100.0, rng);
      },
      20000, a, {25.0, 100.0});
  for (const auto& r : rows) {
    CHECK(r.pass);
    CHECK(r.empirical < r.bound);
  }
  // the u = 100 tail is far from vacuous
  CHECK(rows[1].bound == doctest::Approx(0.4));
  CHECK(rows[1].empirical < 0.2);
  CHECK(rows[1].empirical > 0.01);
}

TEST_CASE("absorption precondition rejects bad traces") {
  Rng rng(3, stream_tag::kMartingale, 0);
  std::vector<JumpTrace> traces = {absorbed_walk(20.0, 100.0, rng)};
  CHECK_THROWS(check_absorption_bound(traces, 10.0, {25.0})); // starts above a
  CHECK_THROWS(check_absorption_bound({}, 10.0, {25.0}));
}

TEST_CASE("bracket tail of the up-down walk sits under the bound") {
  const double a = 10.0, b = 2.0;
  // horizon matches the largest threshold: tau_b past it is a sure
  // exceedance, so the censoring is exact
  auto make = [&](int i) {
    Rng rng(23, stream_tag::kMartingale, (std::uint64_t)i);
    return updown_walk(a, (a - b) * (a - b) * 100.0 / 2.0, rng);
  };
  auto rows = check_bracket_bound(make, 20000, a, b, {25.0, 64.0, 100.0});
  double prev = 1e9;
  for (const auto& r : rows) {
    CHECK(r.pass);
    CHECK(r.bound < prev);
    prev = r.bound;
  }
  CHECK(rows[1].bound >= 1.0); // u = 64 is still vacuous at amplitude 8
  CHECK(rows[2].empirical < rows[2].bound);
  CHECK_THROWS(check_bracket_bound(make, 10, b, a, {25.0})); // needs a > b
}

TEST_CASE("compensated poisson matches its exponential moment exactly") {
  std::vector<JumpTrace> traces;
  const double t = 5.0;
  for (int i = 0; i < 20000; ++i) {
    Rng rng(29, stream_tag::kMartingale, (std::uint64_t)i);
    traces.push_back(compensated_poisson(t + 1.0, rng));
  }
  auto rows = check_expo_moment(traces, {0.0, 0.1, 0.2, 0.5}, t, 1.0, 1.0,
                                41);
  for (const auto& r : rows) {
    double closed = std::exp(t * (std::exp(r.lambda) - r.lambda - 1.0));
    CHECK(r.bound == doctest::Approx(closed).epsilon(1e-12));
    CHECK(std::abs(r.empirical - closed) <= 3.0 * std::max(r.sd, 1e-9));
    CHECK(r.pass);
  }
  CHECK(rows[0].empirical == doctest::Approx(1.0)); // lambda = 0
  CHECK(rows[0].bound == doctest::Approx(1.0));
}

TEST_CASE("quadratic-regime form dominates inside the unit strip") {
  // exp(x) - x - 1 <= e x^2 / 2 on [0, 1], so the displayed weaker bound
  // follows from the sharper one
  for (int i = 0; i <= 1000; ++i) {
    double x = i / 1000.0;
    CHECK(std::exp(x) - x - 1.0 <=
          std::exp(1.0) * x * x / 2.0 + 1e-15);
  }
}

TEST_CASE("discounted exponential of the walk is a submartingale") {
  const double t = 2.0, s = 1.0;
  for (double lam : {0.2, 0.5}) {
    double m_t = 0.0, m_ts = 0.0, v_t = 0.0, v_ts = 0.0;
    const int reps = 20000;
    for (int i = 0; i < reps; ++i) {
      Rng rng(57, stream_tag::kMartingale, (std::uint64_t)i);
      JumpTrace tr = updown_walk(0.0, t + s + 1.0, rng);
      double e1 = std::exp(-lam * tr.value_at(t) - lam * lam * t / 4.0);
      double e2 =
          std::exp(-lam * tr.value_at(t + s) - lam * lam * (t + s) / 4.0);
      m_t += e1;
      m_ts += e2;
      v_t += e1 * e1;
      v_ts += e2 * e2;
    }
    m_t /= reps;
    m_ts /= reps;
    double sd = std::sqrt((v_t / reps - m_t * m_t) / reps) +
                std::sqrt((v_ts / reps - m_ts * m_ts) / reps);
    CHECK(m_ts >= m_t - 3.0 * sd);
  }
}
