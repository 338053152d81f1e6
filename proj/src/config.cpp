#include "datagame/config.hpp"

#include <fstream>

#include "datagame/io.hpp"
#include "json.hpp"

namespace datagame {

namespace {

using nlohmann::json;

template <class T>
void read(const json& j, const char* key, T& into) {
  if (j.contains(key)) j.at(key).get_to(into);
}

}  // namespace

RunConfig load_config_file(const std::string& path, const RunConfig& base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("config parse error in " + path + ": " + e.what());
  }

  RunConfig c = base;
  try {
    if (j.contains("model")) {
      const json& m = j["model"];
      read(m, "a", c.params.a);
      read(m, "b", c.params.b);
      read(m, "theta", c.params.theta);
      read(m, "eta", c.params.eta);
      read(m, "r", c.params.r);
    }
    if (j.contains("rates")) {
      const json& m = j["rates"];
      read(m, "alpha1", c.rates.alpha1);
      read(m, "alpha2", c.rates.alpha2);
      read(m, "alpha3", c.rates.alpha3);
    }
    read(j, "kappa", c.kappa);
    read(j, "x0", c.x0);
    if (j.contains("orbit")) {
      const json& m = j["orbit"];
      read(m, "transient", c.orbit.n_transient);
      if (m.contains("keep")) {
        m.at("keep").get_to(c.orbit.n_keep);
        c.keep_explicit = true;
      }
      read(m, "divergence_bound", c.orbit.divergence_bound);
    }
    if (j.contains("detect")) {
      const json& m = j["detect"];
      read(m, "cycle_tol", c.detect.cycle_tol);
      read(m, "max_period", c.detect.max_period);
      read(m, "lle_threshold", c.detect.lle_threshold);
    }
    if (j.contains("lle")) {
      const json& m = j["lle"];
      read(m, "transient", c.lle.n_transient);
      read(m, "steps", c.lle.n_sum);
    }
    read(j, "match_tol", c.match_tol);
    if (j.contains("sweep")) {
      const json& m = j["sweep"];
      read(m, "axis", c.sweep.axis);
      read(m, "lo", c.sweep.lo);
      read(m, "hi", c.sweep.hi);
      read(m, "n", c.sweep.n);
      read(m, "policy", c.sweep.policy);
      read(m, "with_lle", c.sweep.with_lle);
    }
    if (j.contains("grid")) {
      const json& m = j["grid"];
      read(m, "x_axis", c.grid.x_axis);
      read(m, "x_lo", c.grid.x_lo);
      read(m, "x_hi", c.grid.x_hi);
      read(m, "nx", c.grid.nx);
      read(m, "y_axis", c.grid.y_axis);
      read(m, "y_lo", c.grid.y_lo);
      read(m, "y_hi", c.grid.y_hi);
      read(m, "ny", c.grid.ny);
      read(m, "mode", c.grid.mode);
    }
    if (j.contains("basin")) {
      const json& m = j["basin"];
      read(m, "p1_lo", c.basin.p1_lo);
      read(m, "p1_hi", c.basin.p1_hi);
      read(m, "p2_lo", c.basin.p2_lo);
      read(m, "p2_hi", c.basin.p2_hi);
      read(m, "nx", c.basin.nx);
      read(m, "ny", c.basin.ny);
      read(m, "s0", c.basin.s0);
    }
    if (j.contains("region")) {
      const json& m = j["region"];
      read(m, "a1_lo", c.region.a1_lo);
      read(m, "a1_hi", c.region.a1_hi);
      read(m, "n1", c.region.n1);
      read(m, "a2_lo", c.region.a2_lo);
      read(m, "a2_hi", c.region.a2_hi);
      read(m, "n2", c.region.n2);
      read(m, "a3_lo", c.region.a3_lo);
      read(m, "a3_hi", c.region.a3_hi);
      read(m, "n3", c.region.n3);
    }
    read(j, "threads", c.threads);
    read(j, "seed", c.seed);
    read(j, "out", c.out);
  } catch (const json::exception& e) {
    throw std::runtime_error("config type error in " + path + ": " + e.what());
  }
  return c;
}

std::string dump_config(const RunConfig& c) {
  json j;
  j["model"] = {{"a", c.params.a}, {"b", c.params.b}, {"theta", c.params.theta}, {"eta", c.params.eta}, {"r", c.params.r}};
  j["rates"] = {{"alpha1", c.rates.alpha1}, {"alpha2", c.rates.alpha2}, {"alpha3", c.rates.alpha3}};
  j["kappa"] = c.kappa;
  j["x0"] = c.x0;
  j["orbit"] = {{"transient", c.orbit.n_transient}, {"keep", c.orbit.n_keep}, {"divergence_bound", c.orbit.divergence_bound}};
  j["detect"] = {{"cycle_tol", c.detect.cycle_tol}, {"max_period", c.detect.max_period}, {"lle_threshold", c.detect.lle_threshold}};
  j["lle"] = {{"transient", c.lle.n_transient}, {"steps", c.lle.n_sum}};
  j["match_tol"] = c.match_tol;
  j["sweep"] = {{"axis", c.sweep.axis}, {"lo", c.sweep.lo},   {"hi", c.sweep.hi},
                {"n", c.sweep.n},       {"policy", c.sweep.policy}, {"with_lle", c.sweep.with_lle}};
  j["grid"] = {{"x_axis", c.grid.x_axis}, {"x_lo", c.grid.x_lo}, {"x_hi", c.grid.x_hi}, {"nx", c.grid.nx},
               {"y_axis", c.grid.y_axis}, {"y_lo", c.grid.y_lo}, {"y_hi", c.grid.y_hi}, {"ny", c.grid.ny},
               {"mode", c.grid.mode}};
  j["basin"] = {{"p1_lo", c.basin.p1_lo}, {"p1_hi", c.basin.p1_hi}, {"p2_lo", c.basin.p2_lo},
                {"p2_hi", c.basin.p2_hi}, {"nx", c.basin.nx},       {"ny", c.basin.ny},
                {"s0", c.basin.s0}};
  j["region"] = {{"a1_lo", c.region.a1_lo}, {"a1_hi", c.region.a1_hi}, {"n1", c.region.n1},
                 {"a2_lo", c.region.a2_lo}, {"a2_hi", c.region.a2_hi}, {"n2", c.region.n2},
                 {"a3_lo", c.region.a3_lo}, {"a3_hi", c.region.a3_hi}, {"n3", c.region.n3}};
  j["threads"] = c.threads;
  j["seed"] = c.seed;
  j["out"] = c.out;
  return j.dump(2) + "\n";
}

std::optional<std::string> validate(const RunConfig& c) {
  if (auto msg = validate(c.params)) return msg;
  if (!(c.rates.alpha1 > 0.0)) return std::string("alpha1 must satisfy alpha1 > 0");
  if (!(c.rates.alpha2 > 0.0)) return std::string("alpha2 must satisfy alpha2 > 0");
  if (!(c.rates.alpha3 > 0.0)) return std::string("alpha3 must satisfy alpha3 > 0");
  if (!(c.kappa > 0.0 && c.kappa <= 1.0)) return std::string("kappa must satisfy 0 < kappa <= 1");
  if (c.orbit.n_transient < 0) return std::string("orbit.transient must be >= 0");
  if (c.orbit.n_keep < 1) return std::string("orbit.keep must be >= 1");
  if (!(c.orbit.divergence_bound > 0.0)) return std::string("orbit.divergence_bound must be > 0");
  if (!(c.detect.cycle_tol > 0.0)) return std::string("detect.cycle_tol must be > 0");
  if (c.detect.max_period < 1) return std::string("detect.max_period must be >= 1");
  if (c.lle.n_sum < 1) return std::string("lle.steps must be >= 1");
  if (!(c.match_tol > 0.0)) return std::string("match_tol must be > 0");
  if (!(c.sweep.lo < c.sweep.hi)) return std::string("sweep.lo must be < sweep.hi");
  if (c.sweep.n < 2) return std::string("sweep.n must be >= 2");
  if (!(c.grid.x_lo < c.grid.x_hi)) return std::string("grid.x_lo must be < grid.x_hi");
  if (!(c.grid.y_lo < c.grid.y_hi)) return std::string("grid.y_lo must be < grid.y_hi");
  if (c.grid.nx < 1 || c.grid.ny < 1) return std::string("grid.nx and grid.ny must be >= 1");
  if (!(c.basin.p1_lo < c.basin.p1_hi)) return std::string("basin.p1_lo must be < basin.p1_hi");
  if (!(c.basin.p2_lo < c.basin.p2_hi)) return std::string("basin.p2_lo must be < basin.p2_hi");
  if (c.basin.nx < 1 || c.basin.ny < 1) return std::string("basin.nx and basin.ny must be >= 1");
  if (!(c.basin.s0 >= 0.0)) return std::string("basin.s0 must be >= 0");
  if (!(c.region.a1_lo < c.region.a1_hi) || !(c.region.a2_lo < c.region.a2_hi) || !(c.region.a3_lo < c.region.a3_hi))
    return std::string("region bounds must satisfy lo < hi on every axis");
  if (c.region.n1 < 1 || c.region.n2 < 1 || c.region.n3 < 1)
    return std::string("region.n1, region.n2, region.n3 must be >= 1");
  if (c.threads < 0) return std::string("threads must be >= 0");
  try {
    parse_axis(c.sweep.axis);
    parse_axis(c.grid.x_axis);
    parse_axis(c.grid.y_axis);
    parse_mode(c.grid.mode);
    parse_policy(c.sweep.policy);
  } catch (const std::exception& e) {
    return std::string(e.what());
  }
  return std::nullopt;
}

RateAxis parse_axis(const std::string& name) {
  if (name == "alpha1") return RateAxis::Alpha1;
  if (name == "alpha2") return RateAxis::Alpha2;
  if (name == "alpha3") return RateAxis::Alpha3;
  throw std::runtime_error("unknown rate axis '" + name + "' (expected alpha1|alpha2|alpha3)");
}

ScanMode parse_mode(const std::string& name) {
  if (name == "period") return ScanMode::Period;
  if (name == "lle") return ScanMode::Lle;
  throw std::runtime_error("unknown scan mode '" + name + "' (expected period|lle)");
}

X0Policy parse_policy(const std::string& name) {
  if (name == "fixed") return X0Policy::Fixed;
  if (name == "follow") return X0Policy::Follow;
  throw std::runtime_error("unknown x0 policy '" + name + "' (expected fixed|follow)");
}

}  // namespace datagame
