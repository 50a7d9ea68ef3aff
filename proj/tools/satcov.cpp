// satcov: analytic LEO downlink coverage, ergodic spectral efficiency and
// optimal cluster size, with a built-in Monte Carlo cross-check. Emits CSV
// with a '#' header block carrying the tool version and config hash.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "satcov/config.hpp"
#include "satcov/coverage.hpp"
#include "satcov/distributions.hpp"
#include "satcov/montecarlo.hpp"
#include "satcov/quadrature.hpp"
#include "satcov/units.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_header(std::ostream& out, const satcov::ExperimentConfig& cfg) {
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, cfg.hash());
  out << "# satcov " << kVersion << "\n";
  out << "# config_hash " << hash << "\n";
  std::istringstream echo(cfg.canonical());
  std::string line;
  while (std::getline(echo, line)) out << "# " << line << "\n";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw satcov::ConfigError("cannot open output file: " + path);
  return out;
}

int resolve_threads(int flag_threads) {
  if (flag_threads > 0) return flag_threads;
  if (const char* env = std::getenv("SATCOV_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return 1;
}

void cmd_coverage(const satcov::ExperimentConfig& cfg,
                  const std::string& mode, const std::string& out_path) {
  const auto ring = cfg.ring();
  const auto budget = cfg.radio().link_budget(cfg.k);
  const auto fading = cfg.fading();
  const auto gammas_db = cfg.gamma_grid_db();
  const auto kappa = satcov::kappa_tight(fading.m());

  auto out = open_out(out_path);
  write_header(out, cfg);
  out << "gamma_db,probability,branch_few,branch_many,mode,delta\n";
  if (mode == "marginal") {
    for (double gdb : gammas_db) {
      const auto r = satcov::coverage(ring, budget, fading, cfg.k,
                                      satcov::db_to_linear(gdb));
      out << fmt(gdb) << ',' << fmt(r.probability) << ','
          << fmt(r.few_branch) << ',' << fmt(r.many_branch)
          << ",marginal,nan\n";
    }
    return;
  }
  for (double delta : cfg.delta_list) {
    for (double gdb : gammas_db) {
      const double g = satcov::db_to_linear(gdb);
      const satcov::CoverageResult r =
          (mode == "approx")
              ? satcov::coverage_cond_delta_approx(ring, budget, fading,
                                                   cfg.k, delta, g, kappa)
              : satcov::coverage_cond_delta(ring, budget, fading, cfg.k,
                                            delta, g);
      out << fmt(gdb) << ',' << fmt(r.probability) << ','
          << fmt(r.few_branch) << ',' << fmt(r.many_branch) << ',' << mode
          << ',' << fmt(delta) << "\n";
    }
  }
}

void cmd_validate(const satcov::ExperimentConfig& cfg, long trials,
                  int threads, const std::string& out_path) {
  if (trials <= 0)
    throw satcov::ConfigError("validate needs a positive trial count");
  const auto ring = cfg.ring();
  const auto budget = cfg.radio().link_budget(cfg.k);
  const auto fading = cfg.fading();
  const auto gammas_db = cfg.gamma_grid_db();
  const auto gammas = cfg.gamma_grid_linear();

  satcov::McParams mc{cfg.geometry(), cfg.density_per_km2(), budget,
                      fading, cfg.k, cfg.mode, cfg.seed, threads};
  const auto est = satcov::estimate_coverage(mc, gammas, trials);

  // Allowance on top of the 95% interval. The Kth-distance law conditions on
  // delta only through its support, so the marginalized analytic curve
  // carries a small model bias relative to the raw process.
  const double allowance = 0.02;
  auto out = open_out(out_path);
  write_header(out, cfg);
  out << "gamma_db,analytic,mc,mc_half_width,pass\n";
  double max_gap = 0.0;
  bool all_pass = true;
  for (size_t i = 0; i < gammas.size(); ++i) {
    const auto r = satcov::coverage(ring, budget, fading, cfg.k, gammas[i]);
    const double gap = std::abs(r.probability - est.per_gamma[i].value);
    max_gap = std::max(max_gap, gap);
    const bool pass = gap <= est.per_gamma[i].half_width_95 + allowance;
    all_pass = all_pass && pass;
    out << fmt(gammas_db[i]) << ',' << fmt(r.probability) << ','
        << fmt(est.per_gamma[i].value) << ','
        << fmt(est.per_gamma[i].half_width_95) << ',' << (pass ? 1 : 0)
        << "\n";
  }
  out << "# max_discrepancy " << fmt(max_gap) << "\n";
  if (!all_pass)
    throw ValidationFailure("analytic/MC discrepancy exceeds tolerance (max " +
                            fmt(max_gap) + ")");
}

void cmd_optimal_k(const satcov::ExperimentConfig& cfg,
                   const std::vector<double>& densities,
                   const std::string& out_path) {
  if (densities.empty())
    throw satcov::ConfigError("--densities needs at least one value");
  const auto radio = cfg.radio();
  const auto fading = cfg.fading();
  auto out = open_out(out_path);
  write_header(out, cfg);
  out << "density,n_t,k_star,ergodic_se_at_k_star\n";
  for (double mean_visible : densities) {
    satcov::ExperimentConfig local = cfg;
    local.mean_visible = mean_visible;
    const auto best =
        satcov::optimal_cluster_size(local.ring(), radio, fading);
    out << fmt(mean_visible) << ',' << radio.n_t << ',' << best.k_star
        << ',' << fmt(best.se) << "\n";
  }
}

void cmd_dists(const satcov::ExperimentConfig& cfg, const std::string& which,
               int threads, const std::string& out_path) {
  const auto ring = cfg.ring();
  const auto geom = cfg.geometry();
  const double delta = cfg.delta_list.front();
  const int bins = 40;
  const long trials = std::max<long>(cfg.trials, 1000);

  satcov::McParams mc{geom, cfg.density_per_km2(), cfg.radio().link_budget(
                          cfg.k), cfg.fading(), cfg.k, cfg.mode, cfg.seed,
                      threads};

  satcov::Histogram hist;
  std::function<double(double)> pdf;
  if (cfg.k == 1) {
    // Baseline: the only nontrivial law is the nearest distance given at
    // least one visible; build its histogram directly.
    pdf = [&](double r) {
      return satcov::nearest_pdf_given_some(ring, r);
    };
    hist.edges.resize(bins + 1);
    for (int i = 0; i <= bins; ++i)
      hist.edges[i] =
          geom.r_min() + (geom.r_max() - geom.r_min()) * i / bins;
    hist.counts.assign(bins, 0);
    for (long t = 0; t < trials; ++t) {
      auto rng = satcov::make_trial_rng(cfg.seed, t);
      const auto s = satcov::sample_constellation(geom, cfg.density_per_km2(),
                                                  cfg.mode, rng);
      if (s.total_visible == 0) continue;
      const double r1 = s.visible_distances_m.front() / satcov::kKmToM;
      int bin = static_cast<int>((r1 - hist.edges.front()) /
                                 (hist.edges.back() - hist.edges.front()) *
                                 bins);
      if (bin >= 0 && bin < bins) {
        ++hist.counts[bin];
        ++hist.total;
      }
    }
  } else {
    const auto stats = satcov::empirical_distance_stats(
        mc, trials, bins,
        which == "kth" ? std::optional<satcov::DeltaCondition>({delta, 0.01})
                       : std::nullopt);
    if (which == "nearest") {
      hist = stats.nearest_given_few;
      pdf = [&](double r) {
        return satcov::nearest_pdf_given_few(ring, cfg.k, r);
      };
    } else if (which == "kth") {
      hist = stats.kth_given_many;
      pdf = [&](double r) {
        return satcov::kth_pdf_given_many(ring, cfg.k, delta, r);
      };
    } else {
      hist = stats.delta_given_many;
      pdf = [&](double x) { return satcov::delta_pdf(ring, cfg.k, x); };
    }
  }

  auto out = open_out(out_path);
  write_header(out, cfg);
  out << "x,pdf,mc_histogram\n";
  for (int i = 0; i < bins; ++i) {
    const double lo = hist.edges[i];
    const double hi = hist.edges[i + 1];
    const double x = 0.5 * (lo + hi);
    const double density =
        hist.total > 0
            ? hist.counts[i] / (static_cast<double>(hist.total) * (hi - lo))
            : 0.0;
    out << fmt(x) << ',' << fmt(pdf(x)) << ',' << fmt(density) << "\n";
  }
  const auto [chi2, dof] = satcov::chi_square_statistic(hist, pdf);
  out << "# chi_square " << fmt(chi2) << " dof " << dof << "\n";
}

void cmd_ergodic_se(const satcov::ExperimentConfig& cfg,
                    const std::string& out_path) {
  const auto ring = cfg.ring();
  const auto radio = cfg.radio();
  const auto fading = cfg.fading();
  const auto sweep = satcov::ergodic_se_sweep(ring, radio, fading);
  auto out = open_out(out_path);
  write_header(out, cfg);
  out << "k,ergodic_se\n";
  for (const auto& e : sweep)
    out << e.k << ',' << fmt(e.se) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LEO downlink coverage and spectral-efficiency calculator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path = "out.csv";
  std::string mode = "exact";
  std::string which = "delta";
  long trials_flag = -1;
  int threads_flag = -1;
  long long seed_flag = -1;
  std::vector<double> delta_flag;
  std::vector<double> densities;

  app.add_option("--config", config_path, "experiment config file")
      ->required();
  app.add_option("--out", out_path, "output CSV path");
  app.add_option("--seed", seed_flag, "override run.seed");
  app.add_option("--threads", threads_flag,
                 "worker threads (or env SATCOV_THREADS)");

  auto* cov = app.add_subcommand("coverage", "analytic coverage curves");
  cov->add_option("--mode", mode, "exact|approx|marginal")
      ->check(CLI::IsMember({"exact", "approx", "marginal"}));
  cov->add_option("--delta", delta_flag, "override run.delta list");

  auto* val = app.add_subcommand("validate", "analytic vs Monte Carlo");
  val->add_option("--trials", trials_flag, "override run.trials");

  auto* opt = app.add_subcommand("optimal-k", "optimal cluster size sweep");
  opt->add_option("--densities", densities, "mean visible counts")
      ->required();

  auto* dst = app.add_subcommand("dists", "distance distributions");
  dst->add_option("--which", which, "nearest|kth|delta")
      ->check(CLI::IsMember({"nearest", "kth", "delta"}));
  dst->add_option("--trials", trials_flag, "override run.trials");

  app.add_subcommand("ergodic-se", "ergodic SE for every cluster size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    satcov::ExperimentConfig cfg = satcov::load_config(config_path);
    if (seed_flag >= 0) cfg.seed = static_cast<std::uint64_t>(seed_flag);
    if (!delta_flag.empty()) cfg.delta_list = delta_flag;
    const long trials = trials_flag >= 0 ? trials_flag : cfg.trials;
    const int threads = resolve_threads(threads_flag);

    if (app.got_subcommand(cov)) {
      cmd_coverage(cfg, mode, out_path);
    } else if (app.got_subcommand(val)) {
      cmd_validate(cfg, trials, threads, out_path);
    } else if (app.got_subcommand(opt)) {
      cmd_optimal_k(cfg, densities, out_path);
    } else if (app.got_subcommand(dst)) {
      satcov::ExperimentConfig local = cfg;
      local.trials = trials;
      cmd_dists(local, which, threads, out_path);
    } else {
      cmd_ergodic_se(cfg, out_path);
    }
  } catch (const satcov::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ValidationFailure& e) {
    std::cerr << "validation failure: " << e.what() << "\n";
    return kExitValidation;
  } catch (const satcov::QuadratureError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
