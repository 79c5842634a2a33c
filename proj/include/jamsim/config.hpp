#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "jamsim/analysis.hpp"
#include "jamsim/engine.hpp"
#include "jamsim/errors.hpp"

namespace jamsim {

using Json = nlohmann::ordered_json;

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const std::exception& e) {
    throw Error(Errc::config_error, path + ": " + e.what());
  }
}

namespace detail {

inline const Json& require(const Json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key))
    throw Error(Errc::config_error, std::string("missing key \"") + key + "\" in " + where);
  return j.at(key);
}

inline double positive_number(const Json& j, const char* key, const char* where) {
  const Json& v = require(j, key, where);
  if (!v.is_number() || !(v.get<double>() > 0.0))
    throw Error(Errc::config_error, std::string("key \"") + key + "\" in " + where +
                                        " must be a positive number");
  return v.get<double>();
}

inline std::vector<double> per_agent(const Json& v, int n, const char* key) {
  std::vector<double> out;
  if (v.is_number()) {
    out.assign(n, v.get<double>());
  } else if (v.is_array()) {
    if (static_cast<int>(v.size()) != n)
      throw Error(Errc::config_error,
                  std::string("key \"") + key + "\" must have one entry per agent");
    for (const auto& e : v) {
      if (!e.is_number())
        throw Error(Errc::config_error, std::string("key \"") + key + "\" must be numeric");
      out.push_back(e.get<double>());
    }
  } else {
    throw Error(Errc::config_error,
                std::string("key \"") + key + "\" must be a number or an array");
  }
  return out;
}

}  // namespace detail

inline Graph graph_from_json(const Json& j) {
  const Json& g = detail::require(j, "graph", "config");
  const int n = detail::require(g, "n", "graph").get<int>();
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : detail::require(g, "edges", "graph")) {
    if (!e.is_array() || e.size() != 2)
      throw Error(Errc::config_error, "graph.edges entries must be [i, j] pairs");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return Graph::build(n, edges);
}

inline ProtocolParams protocol_from_json(const Json& j, int n) {
  const Json& p = detail::require(j, "protocol", "config");
  ProtocolParams out;
  out.delta = detail::per_agent(detail::require(p, "delta", "protocol"), n, "protocol.delta");
  out.epsilon = detail::positive_number(p, "epsilon", "protocol");
  const Json& hold = detail::require(p, "T", "protocol");
  if (hold.is_string()) {
    const std::string rule = hold.get<std::string>();
    if (rule.rfind("delta/", 0) != 0)
      throw Error(Errc::config_error, "protocol.T string must look like \"delta/1.01\"");
    double divisor = 0.0;
    try {
      divisor = std::stod(rule.substr(6));
    } catch (const std::exception&) {
      throw Error(Errc::config_error, "protocol.T rule has a malformed divisor");
    }
    if (!(divisor > 1.0))
      throw Error(Errc::config_error, "protocol.T divisor must exceed 1 so that T < delta");
    out.hold.reserve(out.delta.size());
    for (double d : out.delta) out.hold.push_back(d / divisor);
  } else {
    out.hold = detail::per_agent(hold, n, "protocol.T");
  }
  return out;
}

inline AttackConfig attack_from_json(const Json& j) {
  const Json& a = detail::require(j, "attack", "config");
  const std::string kind = detail::require(a, "kind", "attack").get<std::string>();
  if (kind == "explicit") {
    std::vector<std::pair<double, double>> iv;
    if (a.contains("intervals")) {
      for (const auto& e : a.at("intervals")) {
        if (!e.is_array() || e.size() != 2)
          throw Error(Errc::config_error, "attack.intervals entries must be [start, duration]");
        iv.emplace_back(e[0].get<double>(), e[1].get<double>());
      }
    }
    const double kappa = a.value("kappa", 0.0);
    const double rho = a.value("rho", 0.5);
    return explicit_attack(AttackIntervals::build(iv, kappa, rho));
  }
  if (kind == "periodic") {
    const double rho = detail::positive_number(a, "rho", "attack");
    const double sigma = detail::positive_number(a, "sigma", "attack");
    AttackConfig c = periodic_attack(rho, sigma, a.value("kappa", -1.0));
    c.kappa_from_config = a.contains("kappa");
    return c;
  }
  if (kind == "aware") {
    const double rho = detail::positive_number(a, "rho", "attack");
    const double kappa = detail::require(a, "kappa", "attack").get<double>();
    return aware_attack(kappa, rho);
  }
  throw Error(Errc::config_error, "attack.kind must be \"explicit\", \"periodic\", or \"aware\"");
}

inline RunConfig run_config_from_json(const Json& j) {
  RunConfig cfg{graph_from_json(j), {}, {}, {}, 0.0, 0};
  cfg.protocol = protocol_from_json(j, cfg.graph.size());
  cfg.attack = attack_from_json(j);
  cfg.horizon = j.contains("horizon") ? detail::positive_number(j, "horizon", "config") : 0.0;
  cfg.seed = j.value("seed", std::uint64_t{0});
  const Json& x0 = detail::require(j, "x0", "config");
  if (x0.is_string()) {
    if (x0.get<std::string>() != "uniform")
      throw Error(Errc::config_error, "x0 must be an array or the string \"uniform\"");
  } else {
    cfg.x0 = detail::per_agent(x0, cfg.graph.size(), "x0");
  }
  if (auto bad = validate_params(cfg.protocol, cfg.graph))
    throw Error(Errc::config_error, bad->message());
  return cfg;
}

inline std::vector<std::uint64_t> seeds_from_json(const Json& j, std::uint64_t master) {
  const Json& s = detail::require(j, "seeds", "config");
  if (s.is_number_unsigned() || s.is_number_integer()) {
    const auto count = s.get<long long>();
    if (count < 2) throw Error(Errc::config_error, "seeds count must be at least 2");
    return derive_seeds(master, static_cast<std::size_t>(count));
  }
  if (s.is_array()) {
    std::vector<std::uint64_t> out;
    for (const auto& e : s) out.push_back(e.get<std::uint64_t>());
    if (out.size() < 2) throw Error(Errc::config_error, "seeds list must have at least 2 entries");
    return out;
  }
  throw Error(Errc::config_error, "seeds must be a count or a list");
}

struct SweepConfig {
  RunConfig base;
  std::vector<double> rho_axis;
  std::vector<double> second_axis;  // sigma (periodic) or kappa (aware)
  bool second_is_kappa = false;
  std::vector<std::uint64_t> seeds;
  bool use_first_entry = false;
};

inline SweepConfig sweep_config_from_json(const Json& j) {
  SweepConfig sw{run_config_from_json(j), {}, {}, false, {}, false};
  sw.seeds = seeds_from_json(j, sw.base.seed);
  sw.use_first_entry = j.value("use_first_entry", false);
  const Json& axes = detail::require(j, "sweep", "config");
  for (const auto& e : detail::require(axes, "rho", "sweep")) sw.rho_axis.push_back(e.get<double>());
  if (axes.contains("sigma") && axes.contains("kappa"))
    throw Error(Errc::config_error, "sweep takes either a sigma axis or a kappa axis, not both");
  if (axes.contains("sigma")) {
    if (sw.base.attack.kind != AttackKind::periodic)
      throw Error(Errc::config_error, "a sigma axis needs a periodic attack");
    for (const auto& e : axes.at("sigma")) sw.second_axis.push_back(e.get<double>());
  } else if (axes.contains("kappa")) {
    if (sw.base.attack.kind != AttackKind::aware)
      throw Error(Errc::config_error, "a kappa axis needs an aware attack");
    sw.second_is_kappa = true;
    for (const auto& e : axes.at("kappa")) sw.second_axis.push_back(e.get<double>());
  } else {
    throw Error(Errc::config_error, "sweep needs a sigma or kappa axis");
  }
  if (sw.rho_axis.empty() || sw.second_axis.empty())
    throw Error(Errc::config_error, "sweep axes must be non-empty");
  return sw;
}

}  // namespace jamsim
