// Experiment runner for the biased exclusion process on a segment.
//
// Every subcommand writes its artifacts (CSV + summary JSON) into --out and
// finishes with a manifest listing each produced file with a checksum.
// Exit codes: 0 success, 2 validation error, 3 state-space cap exceeded.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wasep/aux_line.hpp"
#include "wasep/dynamics.hpp"
#include "wasep/equilibrium.hpp"
#include "wasep/estimators.hpp"
#include "wasep/exact.hpp"
#include "wasep/hydro.hpp"
#include "wasep/io.hpp"
#include "wasep/martingale.hpp"
#include "wasep/model.hpp"
#include "wasep/spectral.hpp"

using nlohmann::json;

namespace {

struct Cfg {
  std::string cmd;
  int N = 16, k = 8;
  double p = 0.5;
  int replicas = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out = ".";
  long long cap = 200000;
  double eps = 0.25;
  double t = 1.0;
  double t_max = 0.0;  // 0 = auto
  std::vector<double> t_grid;  // empty = default
  std::vector<double> u_grid = {25.0, 100.0};
  std::vector<double> lambda_grid = {0.1, 0.2, 0.5};
  std::vector<double> a_grid = {1, 2, 5, 10};
  std::vector<double> b_list = {0.05, 0.1, 0.2};
  int aux_n = 5;
  double beta = 0.5;
  std::string init = "max";
};

json to_json(const Cfg& c) {
  return json{{"cmd", c.cmd},       {"N", c.N},
              {"k", c.k},           {"p", c.p},
              {"replicas", c.replicas}, {"seed", c.seed},
              {"threads", c.threads},   {"out", c.out},
              {"cap", c.cap},       {"eps", c.eps},
              {"t", c.t},           {"t_max", c.t_max},
              {"t_grid", c.t_grid}, {"u_grid", c.u_grid},
              {"lambda_grid", c.lambda_grid}, {"a_grid", c.a_grid},
              {"b_list", c.b_list}, {"aux_n", c.aux_n},
              {"beta", c.beta},     {"init", c.init}};
}

void apply_json(Cfg& c, const json& j) {
  const json known = to_json(c);
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.contains(it.key()))
      throw std::invalid_argument("config: unknown field '" + it.key() + "'");
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("cmd", c.cmd);
  get("N", c.N);
  get("k", c.k);
  get("p", c.p);
  get("replicas", c.replicas);
  get("seed", c.seed);
  get("threads", c.threads);
  get("out", c.out);
  get("cap", c.cap);
  get("eps", c.eps);
  get("t", c.t);
  get("t_max", c.t_max);
  get("t_grid", c.t_grid);
  get("u_grid", c.u_grid);
  get("lambda_grid", c.lambda_grid);
  get("a_grid", c.a_grid);
  get("b_list", c.b_list);
  get("aux_n", c.aux_n);
  get("beta", c.beta);
  get("init", c.init);
}

void write_json_file(const std::string& path, const json& j) {
  std::string text = j.dump(2);
  text += '\n';
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open " + path);
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

std::vector<double> grid_or_default(const Cfg& c, const wasep::Params& pr) {
  return c.t_grid.empty() ? wasep::default_time_grid(pr) : c.t_grid;
}

// ---- subcommands ----

std::vector<std::string> run_exact(const Cfg& c) {
  wasep::Params pr(c.N, c.k, c.p);
  wasep::Generator gen = wasep::build_generator(pr, c.cap);
  double gap_exact = wasep::exact_gap(gen);
  auto grid = grid_or_default(c, pr);
  auto d = wasep::tv_curve(gen, grid);
  double tmix = wasep::mixing_time(gen, c.eps);

  wasep::CsvWriter csv(c.out + "/exact_tv.csv", {"t", "d"});
  for (std::size_t i = 0; i < grid.size(); ++i) csv.row({grid[i], d[i]});
  csv.close();

  json summary{{"gap_formula", pr.gap},
               {"gap_exact", gap_exact},
               {"gap_abs_error", std::abs(pr.gap - gap_exact)},
               {"eps", c.eps},
               {"t_mix", tmix},
               {"states", (long long)gen.states.size()}};
  write_json_file(c.out + "/exact_summary.json", summary);
  return {"exact_tv.csv", "exact_summary.json"};
}

std::vector<std::string> run_sample_pi(const Cfg& c) {
  wasep::Params pr(c.N, c.k, c.p);
  std::vector<wasep::Config> samples;
  long long approx_count = 0;
  for (int r = 0; r < c.replicas; ++r) {
    wasep::Rng rng(c.seed, wasep::stream_tag::kEquilibrium, (std::uint64_t)r);
    bool approx = false;
    samples.push_back(wasep::sample_pi(pr, rng, &approx));
    if (approx) ++approx_count;
  }

  wasep::CsvWriter scsv(c.out + "/samples.csv", {"replica", "config"});
  for (int r = 0; r < c.replicas; ++r)
    scsv.row({(long long)r, wasep::config_to_string(samples[r])});
  scsv.close();

  auto profile = wasep::density_profile(pr, samples);
  wasep::CsvWriter pcsv(c.out + "/profile.csv",
                        {"site", "density", "lower", "upper", "within"});
  for (const auto& pt : profile)
    pcsv.row({(long long)pt.site, pt.value, pt.lower, pt.upper,
              (long long)(pt.within_bounds ? 1 : 0)});
  pcsv.close();

  auto gaps = wasep::gap_statistics(pr, samples);
  json summary{{"replicas", c.replicas},
               {"approximate_draws", approx_count},
               {"longest_run_mean", gaps.q_mean},
               {"longest_run_q99", gaps.q_quantile(0.99)}};
  write_json_file(c.out + "/sample_summary.json", summary);
  return {"samples.csv", "profile.csv", "sample_summary.json"};
}

wasep::ChainInit parse_init(const std::string& s) {
  if (s == "max") return wasep::ChainInit::Max;
  if (s == "min") return wasep::ChainInit::Min;
  if (s == "pi") return wasep::ChainInit::Pi;
  throw std::invalid_argument("init must be max, min or pi");
}

std::vector<std::string> run_simulate(const Cfg& c) {
  wasep::Params pr(c.N, c.k, c.p);
  auto grid = grid_or_default(c, pr);
  auto trajs = wasep::run_ensemble(pr, {parse_init(c.init)}, grid, c.replicas,
                                   c.seed, c.threads);
  wasep::CsvWriter csv(
      c.out + "/trajectories.csv",
      {"replica", "t", "f1", "f0", "left", "right", "longest_run", "area_to_min"});
  for (const auto& tr : trajs)
    for (std::size_t g = 0; g < tr.times.size(); ++g)
      csv.row({(long long)tr.replica, tr.times[g], tr.f1[g][0], tr.f0[g][0],
               (long long)tr.stats[g][0].L, (long long)tr.stats[g][0].R,
               (long long)tr.stats[g][0].Q, (long long)tr.stats[g][0].A});
  csv.close();
  return {"trajectories.csv"};
}

std::vector<std::string> run_couple(const Cfg& c) {
  wasep::Params pr(c.N, c.k, c.p);
  double horizon = c.t_max > 0.0
                       ? c.t_max
                       : 20.0 * std::max(std::log((double)pr.k), 1.0) / pr.gap;
  std::vector<double> merge(c.replicas);
  for (int r = 0; r < c.replicas; ++r) {
    wasep::Rng rng(c.seed, wasep::stream_tag::kDynamics, (std::uint64_t)r);
    wasep::CouplingEngine eng(
        pr, {wasep::extremal_max(pr), wasep::extremal_min(pr)}, rng);
    merge[r] = eng.merging_time(horizon);
  }
  wasep::CsvWriter csv(c.out + "/merge_times.csv",
                       {"replica", "tau", "merged"});
  long long merged = 0;
  double sum = 0.0;
  for (int r = 0; r < c.replicas; ++r) {
    bool ok = merge[r] <= horizon;
    if (ok) {
      ++merged;
      sum += merge[r];
    }
    csv.row({(long long)r, merge[r], (long long)(ok ? 1 : 0)});
  }
  csv.close();
  json summary{{"replicas", c.replicas},
               {"horizon", horizon},
               {"merged", merged},
               {"mean_tau_merged", merged ? sum / merged : 0.0}};
  write_json_file(c.out + "/couple_summary.json", summary);
  return {"merge_times.csv", "couple_summary.json"};
}

std::vector<std::string> run_mix_bounds(const Cfg& c) {
  wasep::Params pr(c.N, c.k, c.p);
  auto grid = grid_or_default(c, pr);
  auto br = wasep::mix_time_bracket(pr, c.eps, c.replicas, c.seed, grid,
                                    c.threads);

  bool exact_available = false;
  std::vector<double> d_exact;
  try {
    if (wasep::state_count(pr.N, pr.k) <= 252) {
      wasep::Generator gen = wasep::build_generator(pr, c.cap);
      d_exact = wasep::tv_curve(gen, grid);
      exact_available = true;
    }
  } catch (const wasep::CapExceeded&) {
  }

  wasep::CsvWriter csv(
      c.out + "/mix_bounds.csv",
      {"t", "upper", "upper_ci", "lower", "lower_ci", "d_exact"});
  for (std::size_t g = 0; g < grid.size(); ++g)
    csv.row({grid[g], br.upper.value[g], br.upper.ci[g], br.lower.value[g],
             br.lower.ci[g],
             exact_available ? wasep::Cell(d_exact[g])
                             : wasep::Cell(std::string(""))});
  csv.close();

  json summary{{"eps", c.eps},
               {"t_lower", br.lower_timeout ? json("TIMEOUT") : json(br.t_lower)},
               {"t_upper", br.upper_timeout ? json("TIMEOUT") : json(br.t_upper)},
               {"gap", pr.gap},
               {"replicas", c.replicas}};
  write_json_file(c.out + "/mix_summary.json", summary);
  return {"mix_bounds.csv", "mix_summary.json"};
}

std::vector<std::string> run_hydro(const Cfg& c) {
  wasep::Params pr(c.N, c.k, c.p);
  if (pr.N * pr.b <= 10.0)
    std::fprintf(stderr,
                 "warning: N*b = %g is small; the macroscopic comparison "
                 "needs a strong bias\n",
                 pr.N * pr.b);
  std::vector<double> tm = c.t_grid.empty()
                               ? std::vector<double>{0.5, 1.0, 2.0}
                               : c.t_grid;
  auto dist = wasep::hydro_distance(pr, tm, c.replicas, c.seed, c.threads);

  wasep::CsvWriter dcsv(c.out + "/hydro_distance.csv",
                        {"t", "median", "p90"});
  for (const auto& d : dist) dcsv.row({d.t, d.median, d.p90});
  dcsv.close();

  const double alpha = (double)pr.k / pr.N;
  wasep::CsvWriter gcsv(c.out + "/hydro_profile.csv", {"t", "x", "g"});
  for (double t : tm)
    for (int i = 0; i <= 200; ++i) {
      double x = (double)i / 200.0;
      gcsv.row({t, x, wasep::hydro::g(alpha, t, x)});
    }
  gcsv.close();
  return {"hydro_distance.csv", "hydro_profile.csv"};
}

std::vector<std::string> run_boundary(const Cfg& c) {
  wasep::Params pr(c.N, c.k, c.p);
  std::vector<double> tm = c.t_grid.empty()
                               ? std::vector<double>{0.25, 0.5, 1.0, 2.0}
                               : c.t_grid;
  auto pts = wasep::boundary_scaling(pr, tm, c.replicas, c.seed, c.threads);
  wasep::CsvWriter csv(c.out + "/boundary.csv",
                       {"t", "left_mean", "left_ci", "ell", "right_mean",
                        "right_ci", "r"});
  for (const auto& bp : pts)
    csv.row({bp.t, bp.left_mean, bp.left_ci, bp.ell, bp.right_mean,
             bp.right_ci, bp.r});
  csv.close();
  return {"boundary.csv"};
}

std::vector<std::string> run_aux(const Cfg& c) {
  wasep::Params pr(c.N, c.k, c.p);
  auto stats = wasep::deviation_stats(c.aux_n, c.beta, pr, c.t, c.replicas,
                                      c.seed, c.a_grid);
  wasep::CsvWriter csv(c.out + "/aux_deviations.csv",
                       {"A", "fraction_below"});
  for (std::size_t i = 0; i < stats.a_grid.size(); ++i)
    csv.row({stats.a_grid[i], stats.fraction_below[i]});
  csv.close();

  // one representative path, checkpointed
  wasep::Rng rng(c.seed, wasep::stream_tag::kAuxLine, 0xfeedu);
  wasep::AuxSystem sys = wasep::init_stationary(c.aux_n, c.beta, pr, rng);
  wasep::CsvWriter pcsv(c.out + "/aux_positions.csv",
                        {"t", "particle", "position"});
  for (int step = 0; step <= 10; ++step) {
    double t = c.t * step / 10.0;
    wasep::advance(sys, t, rng);
    for (int i = 0; i <= c.aux_n; ++i)
      pcsv.row({t, (long long)(i + 1), (long long)sys.positions[i]});
  }
  pcsv.close();

  json summary{{"t", stats.t},
               {"replicas", stats.replicas},
               {"scale", stats.scale},
               {"slow_mean", stats.slow_mean},
               {"slow_var", stats.slow_var},
               {"slow_expected", c.beta * pr.b * c.t},
               {"span_mean", stats.span_mean},
               {"span_expected", stats.span_expected}};
  write_json_file(c.out + "/aux_summary.json", summary);
  return {"aux_deviations.csv", "aux_positions.csv", "aux_summary.json"};
}

std::vector<std::string> run_mgale_check(const Cfg& c) {
  const double a = 10.0, level = 2.0;
  double u_max = 0.0;
  for (double u : c.u_grid) u_max = std::max(u_max, u);
  // horizons sized so the censoring at the largest threshold is exact
  auto abs_rows = wasep::check_absorption_bound(
      [&](int r) {
        wasep::Rng rng(c.seed, wasep::stream_tag::kMartingale,
                       (std::uint64_t)r);
        return wasep::absorbed_walk(a, a * a * u_max, rng);
      },
      c.replicas, a, c.u_grid);
  auto br_rows = wasep::check_bracket_bound(
      [&](int r) {
        wasep::Rng rng(c.seed, wasep::stream_tag::kMartingale,
                       (std::uint64_t)(r) + 0x40000000ull);
        return wasep::updown_walk(
            a, (a - level) * (a - level) * u_max / 2.0, rng);
      },
      c.replicas, a, level, c.u_grid);
  std::vector<wasep::JumpTrace> poissons;
  for (int r = 0; r < c.replicas; ++r) {
    wasep::Rng rng(c.seed, wasep::stream_tag::kMartingale,
                   (std::uint64_t)(r) + 0x80000000ull);
    poissons.push_back(wasep::compensated_poisson(c.t, rng));
  }
  auto ex_rows = wasep::check_expo_moment(poissons, c.lambda_grid, c.t, 1.0,
                                          1.0, c.seed);

  wasep::CsvWriter acsv(c.out + "/absorption.csv",
                        {"u", "empirical", "ci", "bound", "pass"});
  for (const auto& r : abs_rows)
    acsv.row({r.u, r.empirical, r.ci, r.bound, (long long)(r.pass ? 1 : 0)});
  acsv.close();
  wasep::CsvWriter bcsv(c.out + "/bracket.csv",
                        {"u", "empirical", "ci", "bound", "pass"});
  for (const auto& r : br_rows)
    bcsv.row({r.u, r.empirical, r.ci, r.bound, (long long)(r.pass ? 1 : 0)});
  bcsv.close();
  wasep::CsvWriter ecsv(c.out + "/expo_moment.csv",
                        {"lambda", "empirical", "sd", "bound", "pass"});
  for (const auto& r : ex_rows)
    ecsv.row({r.lambda, r.empirical, r.sd, r.bound,
              (long long)(r.pass ? 1 : 0)});
  ecsv.close();

  bool all = true;
  for (const auto& r : abs_rows) all = all && r.pass;
  for (const auto& r : br_rows) all = all && r.pass;
  for (const auto& r : ex_rows) all = all && r.pass;
  json summary{{"replicas", c.replicas}, {"all_pass", all}};
  write_json_file(c.out + "/mgale_summary.json", summary);
  return {"absorption.csv", "bracket.csv", "expo_moment.csv",
          "mgale_summary.json"};
}

std::vector<std::string> run_crossover_sweep(const Cfg& c) {
  wasep::CsvWriter csv(c.out + "/crossover.csv",
                       {"b", "gap", "t_lower", "t_upper", "scaled_lower",
                        "scaled_upper"});
  for (double b : c.b_list) {
    wasep::Params pr(c.N, c.k, (1.0 + b) / 2.0);
    auto br = wasep::mix_time_bracket(pr, c.eps, c.replicas, c.seed, {},
                                      c.threads);
    double logk = std::max(std::log((double)pr.k), 1.0);
    csv.row({b, pr.gap,
             br.lower_timeout ? wasep::Cell(std::string("TIMEOUT"))
                              : wasep::Cell(br.t_lower),
             br.upper_timeout ? wasep::Cell(std::string("TIMEOUT"))
                              : wasep::Cell(br.t_upper),
             br.lower_timeout ? wasep::Cell(std::string(""))
                              : wasep::Cell(br.t_lower * 2.0 * pr.gap / logk),
             br.upper_timeout ? wasep::Cell(std::string(""))
                              : wasep::Cell(br.t_upper * 2.0 * pr.gap / logk)});
  }
  csv.close();
  return {"crossover.csv"};
}

} // namespace

int main(int argc, char** argv) {
  Cfg cfg;
  if (const char* env = std::getenv("WASEP_OUT")) cfg.out = env;

  // --config is applied before flags so explicit flags win
  std::string config_path;
  for (int i = 1; i < argc - 1; ++i)
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  if (!config_path.empty()) {
    try {
      std::ifstream in(config_path);
      if (!in) throw std::invalid_argument("cannot read " + config_path);
      apply_json(cfg, json::parse(in));
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 2;
    }
  }

  CLI::App app{"biased exclusion on a segment: exact analysis, sampling, "
               "coupled dynamics and mixing-time bounds"};
  app.require_subcommand(1);

  std::vector<CLI::App*> subs;
  for (const char* name :
       {"exact", "sample-pi", "simulate", "couple", "mix-bounds", "hydro",
        "boundary", "aux", "mgale-check", "crossover-sweep"}) {
    CLI::App* s = app.add_subcommand(name);
    s->add_option("--config", config_path, "JSON config file");
    s->add_option("--N", cfg.N, "number of sites");
    s->add_option("--k", cfg.k, "number of particles");
    s->add_option("--p", cfg.p, "right-jump rate, in [1/2, 1)");
    s->add_option("--replicas", cfg.replicas);
    s->add_option("--seed", cfg.seed);
    s->add_option("--threads", cfg.threads);
    s->add_option("--out", cfg.out, "output directory");
    s->add_option("--cap", cfg.cap, "state-space size cap");
    s->add_option("--eps", cfg.eps, "mixing threshold");
    s->add_option("--t", cfg.t, "single time");
    s->add_option("--t-max", cfg.t_max, "horizon (0 = auto)");
    s->add_option("--t-grid", cfg.t_grid, "time grid");
    s->add_option("--u-grid", cfg.u_grid);
    s->add_option("--lambda-grid", cfg.lambda_grid);
    s->add_option("--a-grid", cfg.a_grid);
    s->add_option("--b-list", cfg.b_list, "bias values for the sweep");
    s->add_option("--aux-n", cfg.aux_n, "auxiliary particle count");
    s->add_option("--beta", cfg.beta, "slow-particle rate factor");
    s->add_option("--init", cfg.init, "initial state: max, min or pi");
    subs.push_back(s);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  cfg.cmd = app.get_subcommands().front()->get_name();

  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> outputs;
  try {
    if (cfg.cmd == "exact") outputs = run_exact(cfg);
    else if (cfg.cmd == "sample-pi") outputs = run_sample_pi(cfg);
    else if (cfg.cmd == "simulate") outputs = run_simulate(cfg);
    else if (cfg.cmd == "couple") outputs = run_couple(cfg);
    else if (cfg.cmd == "mix-bounds") outputs = run_mix_bounds(cfg);
    else if (cfg.cmd == "hydro") outputs = run_hydro(cfg);
    else if (cfg.cmd == "boundary") outputs = run_boundary(cfg);
    else if (cfg.cmd == "aux") outputs = run_aux(cfg);
    else if (cfg.cmd == "mgale-check") outputs = run_mgale_check(cfg);
    else if (cfg.cmd == "crossover-sweep") outputs = run_crossover_sweep(cfg);
  } catch (const wasep::CapExceeded& e) {
    std::fprintf(stderr, "error: %s (requires %lld states)\n", e.what(),
                 e.required);
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  try {
    wasep::write_manifest(cfg.out, to_json(cfg).dump(), outputs, wall);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
