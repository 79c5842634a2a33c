#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "jamsim/analysis.hpp"
#include "jamsim/engine.hpp"
#include "jamsim/errors.hpp"

namespace jamsim {

/// 17 significant digits: enough to make text output byte-reproducible and
/// round-trip exact for doubles.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write " + path);
  out << content;
  if (!out) throw Error(Errc::io_error, "write failed for " + path);
}

inline std::string trajectory_csv(const Trajectory& tr) {
  std::string out = "t";
  for (int i = 0; i < tr.n; ++i) out += ",x" + std::to_string(i);
  for (int i = 0; i < tr.n; ++i) out += ",u" + std::to_string(i);
  out += "\n";
  for (std::size_t m = 0; m < tr.size(); ++m) {
    out += format_double(tr.times[m]);
    for (int i = 0; i < tr.n; ++i) out += "," + format_double(tr.state(m, i));
    for (int i = 0; i < tr.n; ++i) out += "," + std::to_string(tr.input(m, i));
    out += "\n";
  }
  return out;
}

inline std::string attempts_csv(const Trajectory& tr) {
  std::string out = "agent,slot,time,phi,ave\n";
  for (const auto& a : tr.attempts) {
    out += std::to_string(a.agent) + "," + std::to_string(a.slot) + "," +
           format_double(a.time) + "," + (a.success ? "1" : "0") + ",";
    if (a.success) out += format_double(a.neighbor_offset);
    out += "\n";
  }
  return out;
}

inline const char* attack_kind_name(AttackKind k) {
  switch (k) {
    case AttackKind::explicit_intervals: return "explicit";
    case AttackKind::periodic: return "periodic";
    case AttackKind::aware: return "aware";
  }
  return "unknown";
}

inline Json summary_json(const Trajectory& tr, const ConsensusTimes& ct) {
  Json j;
  j["first_entry"] = ct.first_entry ? Json(*ct.first_entry) : Json(nullptr);
  j["settling"] = ct.settling ? Json(*ct.settling) : Json(nullptr);
  j["num_events"] = tr.num_events;
  j["num_breakpoints"] = tr.size();
  j["seed"] = tr.seed;
  j["attack_kind"] = attack_kind_name(tr.attack_kind);
  j["params"] = Json{{"n", tr.n},
                     {"horizon", tr.horizon},
                     {"attack_count", tr.attacks.count()},
                     {"kappa", tr.attacks.kappa()},
                     {"rho", tr.attacks.rho()}};
  return j;
}

struct SweepRow {
  double rho = 0.0;
  double second = 0.0;
  McSummary summary;
};

inline std::string sweep_csv(const std::vector<SweepRow>& rows, bool second_is_kappa) {
  std::string out = std::string("rho,") + (second_is_kappa ? "kappa" : "sigma") +
                    ",m_C,s_C,runs,unsettled\n";
  for (const auto& r : rows) {
    out += format_double(r.rho) + "," + format_double(r.second) + ",";
    out += std::isnan(r.summary.mean) ? "" : format_double(r.summary.mean);
    out += ",";
    out += std::isnan(r.summary.stddev) ? "" : format_double(r.summary.stddev);
    out += "," + std::to_string(r.summary.runs) + "," + std::to_string(r.summary.unsettled) + "\n";
  }
  return out;
}

}  // namespace jamsim
