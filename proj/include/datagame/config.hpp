#pragma once

#include <array>
#include <optional>
#include <string>

#include "datagame/analysis.hpp"

namespace datagame {

// Sweep block for `bif1d` (inclusive endpoints).
struct SweepConfig {
  std::string axis = "alpha1";
  double lo = 0.05;
  double hi = 0.6;
  int n = 1101;
  std::string policy = "fixed";  // fixed | follow
  bool with_lle = true;
};

// Grid block for `scan2d` (cell centers).
struct Grid2dConfig {
  std::string x_axis = "alpha1";
  double x_lo = 0.05;
  double x_hi = 0.6;
  int nx = 300;
  std::string y_axis = "alpha2";
  double y_lo = 0.05;
  double y_hi = 0.6;
  int ny = 300;
  std::string mode = "period";  // period | lle
};

// Window block for `basin`.
struct BasinConfig {
  double p1_lo = 0.0;
  double p1_hi = 12.0;
  double p2_lo = 0.0;
  double p2_hi = 12.0;
  int nx = 200;
  int ny = 200;
  double s0 = 1.0;
};

// Voxel block for `stable-region`.
struct RegionConfig {
  double a1_lo = 0.01;
  double a1_hi = 0.6;
  int n1 = 30;
  double a2_lo = 0.01;
  double a2_hi = 0.6;
  int n2 = 30;
  double a3_lo = 0.01;
  double a3_hi = 0.6;
  int n3 = 30;
};

// Everything a run needs; file values are overlaid on the defaults and flag
// values are overlaid on both.
struct RunConfig {
  ModelParams params{2.0, 0.4, 0.2, 0.5, 0.6};
  AdjustmentRates rates{0.1, 0.1, 0.1};
  double kappa = 1.0;
  std::array<double, 3> x0{1.0, 1.0, 1.0};
  OrbitSettings orbit;        // keep defaults to 200 for 1D work, 64 for rasters
  bool keep_explicit = false; // set when the file or a flag pinned orbit.n_keep
  DetectSettings detect;
  LleSettings lle;
  double match_tol = 1e-3;
  SweepConfig sweep;
  Grid2dConfig grid;
  BasinConfig basin;
  RegionConfig region;
  int threads = 0;
  long seed = 0;  // reserved; every computation here is deterministic
  std::string out = "datagame";
};

// Parses the JSON config file, overlaying present keys onto `base`. Throws
// std::runtime_error with the offending path/key on malformed input.
RunConfig load_config_file(const std::string& path, const RunConfig& base);

// Serializes the effective config; parsing the result back yields an
// equivalent RunConfig.
std::string dump_config(const RunConfig& config);

// First violated constraint (Table-1 parameter ranges, positive rates,
// kappa in (0,1], structural grid/sweep requirements), or nullopt.
std::optional<std::string> validate(const RunConfig& config);

RateAxis parse_axis(const std::string& name);
ScanMode parse_mode(const std::string& name);
X0Policy parse_policy(const std::string& name);

}  // namespace datagame
