#include "datagame/cli.hpp"

#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "datagame/config.hpp"
#include "datagame/io.hpp"

namespace datagame::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSingular = 2;

struct PendingConfig {
  std::string config_path;
  std::string dump_path;
  RunConfig config;
  bool keep_flag_set = false;
};

// Registers the options shared by every subcommand. Flag values are applied
// after the config file so they win.
void add_common_options(CLI::App* cmd, PendingConfig& pending) {
  RunConfig& c = pending.config;
  cmd->add_option("--config", pending.config_path, "JSON config file; flags override file values");
  cmd->add_option("--dump-config", pending.dump_path, "write the effective config as JSON and continue");
  cmd->add_option("--a", c.params.a, "potential market size");
  cmd->add_option("--b", c.params.b, "cross-price elasticity");
  cmd->add_option("--theta", c.params.theta, "consumer sensitivity to business value");
  cmd->add_option("--eta", c.params.eta, "investment-cost coefficient");
  cmd->add_option("--r", c.params.r, "wholesale price per unit of data");
  cmd->add_option("--alpha1", c.rates.alpha1, "adjustment rate of p1");
  cmd->add_option("--alpha2", c.rates.alpha2, "adjustment rate of p2");
  cmd->add_option("--alpha3", c.rates.alpha3, "adjustment rate of s");
  cmd->add_option("--kappa", c.kappa, "hybrid-control gain in (0,1]");
  cmd->add_option("--x0", c.x0, "initial state p1,p2,s")->delimiter(',');
  cmd->add_option("--transient", c.orbit.n_transient, "discarded steps per orbit");
  cmd->add_option("--keep", c.orbit.n_keep, "kept post-transient samples")
      ->each([&pending](const std::string&) { pending.keep_flag_set = true; });
  cmd->add_option("--bound", c.orbit.divergence_bound, "divergence bound");
  cmd->add_option("--cycle-tol", c.detect.cycle_tol, "periodicity tolerance");
  cmd->add_option("--max-period", c.detect.max_period, "largest detected period");
  cmd->add_option("--lle-threshold", c.detect.lle_threshold, "LLE above this counts as chaotic");
  cmd->add_option("--lle-transient", c.lle.n_transient, "discarded steps before the LLE sum");
  cmd->add_option("--lle-steps", c.lle.n_sum, "LLE summation length");
  cmd->add_option("--match-tol", c.match_tol, "attractor identity tolerance for basins");
  cmd->add_option("--threads", c.threads, "worker threads (0 = hardware)");
  cmd->add_option("--seed", c.seed, "reserved; computations are deterministic");
  cmd->add_option("--out", c.out, "output path prefix");
  // bif1d sweep
  cmd->add_option("--axis", c.sweep.axis, "swept rate: alpha1|alpha2|alpha3");
  cmd->add_option("--lo", c.sweep.lo, "sweep lower endpoint");
  cmd->add_option("--hi", c.sweep.hi, "sweep upper endpoint");
  cmd->add_option("--n", c.sweep.n, "sweep points (inclusive endpoints)");
  cmd->add_option("--policy", c.sweep.policy, "initial-condition policy: fixed|follow");
  cmd->add_option("--with-lle", c.sweep.with_lle, "record the exponent per sweep point (true|false)");
  // scan2d grid
  cmd->add_option("--x-axis", c.grid.x_axis, "raster x rate: alpha1|alpha2|alpha3");
  cmd->add_option("--x-lo", c.grid.x_lo, "raster x lower bound");
  cmd->add_option("--x-hi", c.grid.x_hi, "raster x upper bound");
  cmd->add_option("--nx", c.grid.nx, "raster cells along x");
  cmd->add_option("--y-axis", c.grid.y_axis, "raster y rate: alpha1|alpha2|alpha3");
  cmd->add_option("--y-lo", c.grid.y_lo, "raster y lower bound");
  cmd->add_option("--y-hi", c.grid.y_hi, "raster y upper bound");
  cmd->add_option("--ny", c.grid.ny, "raster cells along y");
  cmd->add_option("--mode", c.grid.mode, "raster payload: period|lle");
  // basin window
  cmd->add_option("--p1-lo", c.basin.p1_lo, "basin window: p1(0) lower bound");
  cmd->add_option("--p1-hi", c.basin.p1_hi, "basin window: p1(0) upper bound");
  cmd->add_option("--p2-lo", c.basin.p2_lo, "basin window: p2(0) lower bound");
  cmd->add_option("--p2-hi", c.basin.p2_hi, "basin window: p2(0) upper bound");
  cmd->add_option("--basin-nx", c.basin.nx, "basin cells along p1(0)");
  cmd->add_option("--basin-ny", c.basin.ny, "basin cells along p2(0)");
  cmd->add_option("--s0", c.basin.s0, "basin initial business value s(0)");
  // stable-region voxels
  cmd->add_option("--a1-lo", c.region.a1_lo, "region alpha1 lower bound");
  cmd->add_option("--a1-hi", c.region.a1_hi, "region alpha1 upper bound");
  cmd->add_option("--n1", c.region.n1, "region voxels along alpha1");
  cmd->add_option("--a2-lo", c.region.a2_lo, "region alpha2 lower bound");
  cmd->add_option("--a2-hi", c.region.a2_hi, "region alpha2 upper bound");
  cmd->add_option("--n2", c.region.n2, "region voxels along alpha2");
  cmd->add_option("--a3-lo", c.region.a3_lo, "region alpha3 lower bound");
  cmd->add_option("--a3-hi", c.region.a3_hi, "region alpha3 upper bound");
  cmd->add_option("--n3", c.region.n3, "region voxels along alpha3");
}

// Re-parses the command line so that the config file is read first and the
// flags are overlaid on top of it.
int resolve_config(CLI::App& app, PendingConfig& pending, int argc, const char* const* argv, std::ostream& err) {
  if (!pending.config_path.empty()) {
    RunConfig base;
    base = load_config_file(pending.config_path, base);
    const bool keep_from_file = base.keep_explicit;
    pending.config = base;
    pending.keep_flag_set = false;
    app.clear();
    app.parse(argc, argv);  // flags overwrite file values
    pending.config.keep_explicit = keep_from_file || pending.keep_flag_set;
  } else {
    pending.config.keep_explicit = pending.keep_flag_set;
  }
  if (auto msg = validate(pending.config)) {
    err << "config error: " << *msg << '\n';
    return kExitConfig;
  }
  if (!pending.dump_path.empty()) {
    write_text_file(pending.dump_path, dump_config(pending.config));
  }
  return kExitOk;
}

long raster_keep(const RunConfig& c) {
  return c.keep_explicit ? c.orbit.n_keep : 64;  // rasters default to shorter tails
}

ScanSettings scan_settings(const RunConfig& c) {
  ScanSettings s;
  s.orbit = c.orbit;
  s.orbit.n_keep = raster_keep(c);
  s.detect = c.detect;
  s.lle = c.lle;
  s.lle.divergence_bound = c.orbit.divergence_bound;
  s.match_tol = c.match_tol;
  s.threads = c.threads;
  return s;
}

std::string regime_word(PriceRegime r) {
  switch (r) {
    case PriceRegime::P1Greater: return "p1>p2";
    case PriceRegime::P2Greater: return "p1<p2";
    case PriceRegime::Equal: return "p1=p2";
  }
  return "?";
}

std::string regime_word(ProfitRegime r) {
  switch (r) {
    case ProfitRegime::Pi1Greater: return "pi1>pi2";
    case ProfitRegime::Pi2Greater: return "pi1<pi2";
    case ProfitRegime::Equal: return "pi1=pi2";
  }
  return "?";
}

int cmd_equilibrium(const RunConfig& c, std::ostream& out) {
  const StrategyState eq = equilibrium_closed_form(c.params);
  const auto [pi1, pi2] = equilibrium_profits(c.params);
  out << "p1 " << format_double(eq.p1) << '\n';
  out << "p2 " << format_double(eq.p2) << '\n';
  out << "s " << format_double(eq.s) << '\n';
  out << "pi1 " << format_double(pi1) << '\n';
  out << "pi2 " << format_double(pi2) << '\n';
  out << "concavity " << (concavity_holds(c.params) ? "holds" : "fails") << '\n';
  if (concavity_holds(c.params)) {
    out << "price_regime " << regime_word(price_regime(c.params)) << '\n';
    out << "wholesale_threshold " << format_double(wholesale_threshold(c.params)) << '\n';
    out << "profit_regime " << regime_word(profit_regime(c.params)) << '\n';
  }
  return kExitOk;
}

int cmd_fixed_points(const RunConfig& c, std::ostream& out) {
  auto records = fixed_points(c.params);
  for (EquilibriumRecord& e : records) {
    e.stability = classify_equilibrium(c.params, c.rates, e);
  }
  const std::string csv = fixed_points_csv(records);
  out << csv;
  write_text_file(c.out + "_fixed_points.csv", csv);
  return kExitOk;
}

int cmd_orbit(const RunConfig& c, std::ostream& out) {
  const GameMap map = make_game_map(c.params, c.rates);
  const Vec3 x0{c.x0[0], c.x0[1], c.x0[2]};
  const OrbitResult<Vec3> orbit = simulate_orbit(map, x0, c.orbit);
  std::optional<double> lle;
  if (!orbit.diverged) lle = largest_lyapunov(map, x0, c.lle);
  const auto attractor = detect_attractor(orbit, c.detect, lle);
  out << "class " << class_label(attractor.kind, attractor.period) << '\n';
  if (lle) out << "lle " << format_double(*lle) << '\n';
  if (orbit.diverged) out << "diverged_at " << *orbit.diverged_at << '\n';
  write_text_file(c.out + "_orbit.csv", orbit_csv(orbit, c.orbit.n_transient));
  return kExitOk;
}

int cmd_bif1d(const RunConfig& c, std::ostream& out) {
  Bif1dSettings settings;
  settings.orbit = c.orbit;
  settings.detect = c.detect;
  settings.lle = c.lle;
  settings.lle.divergence_bound = c.orbit.divergence_bound;
  settings.with_lle = c.sweep.with_lle;
  settings.policy = parse_policy(c.sweep.policy);
  const SweepAxis sweep{parse_axis(c.sweep.axis), c.sweep.lo, c.sweep.hi, c.sweep.n};
  const auto points =
      bifurcation_scan_1d(c.params, c.rates, sweep, StrategyState{c.x0[0], c.x0[1], c.x0[2]}, settings);
  write_text_file(c.out + "_bif1d.csv", bif1d_csv(c.sweep.axis, points));
  long divergent = 0;
  for (const auto& p : points) {
    if (p.attractor.kind == AttractorKind::Divergent) ++divergent;
  }
  out << "points " << points.size() << '\n';
  out << "divergent " << divergent << '\n';
  return kExitOk;
}

void write_raster_outputs(const Raster& raster, const std::string& prefix, std::ostream& out) {
  write_text_file(prefix + ".csv", raster_csv(raster));
  write_text_file(prefix + ".pgm", raster_pgm(raster));
  write_text_file(prefix + ".txt", raster_catalog(raster));
  out << "classes " << raster.catalog.size() << '\n';
}

int cmd_scan2d(const RunConfig& c, std::ostream& out) {
  const GridAxis gx{c.grid.x_lo, c.grid.x_hi, c.grid.nx};
  const GridAxis gy{c.grid.y_lo, c.grid.y_hi, c.grid.ny};
  const Raster raster = scan_2d(c.params, c.rates, parse_axis(c.grid.x_axis), gx, parse_axis(c.grid.y_axis), gy,
                                parse_mode(c.grid.mode), StrategyState{c.x0[0], c.x0[1], c.x0[2]},
                                scan_settings(c));
  write_raster_outputs(raster, c.out + "_scan2d", out);
  return kExitOk;
}

int cmd_basin(const RunConfig& c, std::ostream& out) {
  const GridAxis gx{c.basin.p1_lo, c.basin.p1_hi, c.basin.nx};
  const GridAxis gy{c.basin.p2_lo, c.basin.p2_hi, c.basin.ny};
  const Raster raster = basin_raster(c.params, c.rates, gx, gy, c.basin.s0, scan_settings(c));
  write_raster_outputs(raster, c.out + "_basin", out);
  return kExitOk;
}

int cmd_stable_region(const RunConfig& c, std::ostream& out) {
  const auto voxels = stability_region_3d(c.params, {c.region.a1_lo, c.region.a1_hi, c.region.n1},
                                          {c.region.a2_lo, c.region.a2_hi, c.region.n2},
                                          {c.region.a3_lo, c.region.a3_hi, c.region.n3});
  write_text_file(c.out + "_stable_region.csv", voxels_csv(voxels));
  long stable = 0;
  for (const auto& v : voxels) stable += v.stable ? 1 : 0;
  out << "voxels " << voxels.size() << '\n';
  out << "stable " << stable << '\n';
  return kExitOk;
}

int cmd_lle(const RunConfig& c, std::ostream& out) {
  LleSettings settings = c.lle;
  settings.divergence_bound = c.orbit.divergence_bound;
  const double value = largest_lyapunov(make_game_map(c.params, c.rates), Vec3{c.x0[0], c.x0[1], c.x0[2]}, settings);
  out << "lle " << format_double(value) << '\n';
  return kExitOk;
}

int cmd_control_threshold(const RunConfig& c, std::ostream& out) {
  const ControlThresholdResult result = find_control_threshold(c.params, c.rates);
  out << "kappa_star " << format_double(result.kappa_star) << '\n';
  out << "already_stable " << (result.already_stable ? 1 : 0) << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"energy data-trading duopoly: equilibrium, dynamics, and chaos analysis"};
  app.require_subcommand(1);

  PendingConfig pending;
  std::function<int(const RunConfig&, std::ostream&)> handler;

  struct Command {
    const char* name;
    const char* help;
    int (*fn)(const RunConfig&, std::ostream&);
  };
  static constexpr Command kCommands[] = {
      {"equilibrium", "closed-form equilibrium, profits, and regime report", cmd_equilibrium},
      {"fixed-points", "the eight map equilibria with admissibility and stability", cmd_fixed_points},
      {"orbit", "simulate one orbit and classify its attractor", cmd_orbit},
      {"bif1d", "one-parameter bifurcation scan over an adjustment rate", cmd_bif1d},
      {"scan2d", "two-parameter bifurcation or LLE raster", cmd_scan2d},
      {"basin", "basin-of-attraction raster over initial prices", cmd_basin},
      {"stable-region", "Jury-stable voxels in (alpha1, alpha2, alpha3)", cmd_stable_region},
      {"lle", "largest Lyapunov exponent for the configured rates", cmd_lle},
      {"control-threshold", "largest stabilizing hybrid-control gain", cmd_control_threshold},
  };
  for (const Command& command : kCommands) {
    CLI::App* sub = app.add_subcommand(command.name, command.help);
    add_common_options(sub, pending);
    sub->callback([&handler, &command] { handler = command.fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    err << app.help();
    return kExitConfig;
  }

  try {
    if (const int code = resolve_config(app, pending, argc, argv, err); code != kExitOk) return code;
    return handler(pending.config, out);
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitConfig;
  } catch (const SingularParameterError& e) {
    err << "singular parameter: " << e.what() << '\n';
    return kExitSingular;
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << '\n';
    return kExitSingular;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace datagame::cli
