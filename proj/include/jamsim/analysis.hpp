#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "jamsim/engine.hpp"
#include "jamsim/errors.hpp"

namespace jamsim {

/// Derived quantities for the success-probability bounds. gamma is the
/// number of slots grouped into one analysis block: the smallest k with
/// k * delta strictly larger than the longest continuous jam kappa/(1-rho).
struct BoundParams {
  double kappa = 0.0;
  double rho = 0.0;
  double delta = 0.0;
  long long gamma = 1;
  double delta_lower = 0.0;   // kappa / (1 - rho), longest continuous jam
  double delta_hat = 0.0;     // gamma * delta, block length
  double delta_tilde = 0.0;   // (1 - rho)(delta_hat - delta_lower) / (gamma + 1)
  double q = 0.0;             // delta_tilde / delta
  double block_bound = 0.0;   // 2 q^gamma; may underflow to 0 for huge gamma
  double log_block_bound = 0.0;  // log(2) + gamma log(q), always finite
};

inline BoundParams bound_params(double kappa, double rho, double delta) {
  if (!(kappa >= 0.0) || !(rho > 0.0) || !(rho < 1.0) || !(delta > 0.0))
    throw Error(Errc::domain_error, "bound_params needs kappa >= 0, rho in (0,1), delta > 0");
  BoundParams b;
  b.kappa = kappa;
  b.rho = rho;
  b.delta = delta;
  b.delta_lower = kappa / (1.0 - rho);
  // Strict inequality: an exact integer boundary rolls to the next k.
  long long g = std::max<long long>(1, static_cast<long long>(std::floor(b.delta_lower / delta)));
  while (g > 1 && (g - 1) * delta > b.delta_lower) --g;
  while (g * delta <= b.delta_lower) ++g;
  b.gamma = g;
  b.delta_hat = static_cast<double>(g) * delta;
  b.delta_tilde = (1.0 - rho) * (b.delta_hat - b.delta_lower) / (static_cast<double>(g) + 1.0);
  b.q = b.delta_tilde / delta;
  b.block_bound = 2.0 * std::pow(b.q, static_cast<double>(g));
  b.log_block_bound = std::log(2.0) + static_cast<double>(g) * std::log(b.q);
  return b;
}

struct PhiHatSeries {
  std::vector<int> blocks;
  long long dropped = 0;  // trailing attempts not forming a full block
};

/// Groups per-slot success flags into gamma-slot blocks; a block succeeds
/// when one or more of its attempts succeeded.
inline PhiHatSeries phi_hat_series(const std::vector<int>& phi, long long gamma) {
  if (gamma < 1) throw Error(Errc::domain_error, "gamma must be at least 1");
  PhiHatSeries out;
  const long long full = static_cast<long long>(phi.size()) / gamma;
  out.dropped = static_cast<long long>(phi.size()) - full * gamma;
  out.blocks.reserve(static_cast<std::size_t>(full));
  for (long long b = 0; b < full; ++b) {
    int any = 0;
    for (long long j = b * gamma; j < (b + 1) * gamma; ++j)
      if (phi[static_cast<std::size_t>(j)]) any = 1;
    out.blocks.push_back(any);
  }
  return out;
}

/// P[at least M of N blocks succeed] >= 1 - sum_{m<M} C(N,m) (1-2q^gamma)^{N-m}.
/// Exact binomial coefficients up to N = 40, log-domain beyond; the result
/// may be negative (still a valid lower bound) and is returned unclamped.
inline double prop3_lower_bound(long long N, long long M, double q, long long gamma) {
  if (N < 1 || M < 0 || M > N || !(q > 0.0) || !(q < 1.0) || gamma < 1)
    throw Error(Errc::domain_error, "prop3_lower_bound needs N >= 1, 0 <= M <= N, q in (0,1)");
  const double b = 2.0 * std::pow(q, static_cast<double>(gamma));
  double sum = 0.0;
  for (long long m = 0; m < M; ++m) {
    if (N <= 40) {
      double comb = 1.0;
      for (long long j = 0; j < m; ++j)
        comb = comb * static_cast<double>(N - j) / static_cast<double>(j + 1);
      sum += comb * std::pow(1.0 - b, static_cast<double>(N - m));
    } else {
      const double log_comb = std::lgamma(static_cast<double>(N + 1)) -
                              std::lgamma(static_cast<double>(m + 1)) -
                              std::lgamma(static_cast<double>(N - m + 1));
      sum += std::exp(log_comb + static_cast<double>(N - m) * std::log1p(-b));
    }
  }
  return 1.0 - sum;
}

/// Per-slot success flags by agent, in slot order, extracted from the run's
/// attempt log.
inline std::vector<std::vector<int>> phi_by_agent(const Trajectory& tr) {
  std::vector<std::vector<int>> phi(tr.n);
  for (const auto& rec : tr.attempts) {
    auto& seq = phi[rec.agent];
    if (rec.slot != static_cast<long long>(seq.size()))
      throw Error(Errc::out_of_order_event, "attempt log has a slot gap");
    seq.push_back(rec.success ? 1 : 0);
  }
  return phi;
}

struct Prop3Check {
  long long N = 0;
  long long M = 0;
  double bound = 0.0;
  double empirical = 0.0;
  long long samples = 0;
  bool ok = false;
};

struct BoundCheckReport {
  double block_bound = 0.0;
  std::vector<double> agent_frequency;
  std::vector<long long> agent_blocks;
  bool frequency_ok = true;  // every agent >= block_bound - 3 standard errors
  std::vector<Prop3Check> prop3;

  bool all_ok() const {
    if (!frequency_ok) return false;
    for (const auto& c : prop3)
      if (!c.ok) return false;
    return true;
  }
};

/// Empirical verification of the per-block success bound and the tail
/// bound, over a batch of aware-attack runs sharing one (kappa, rho, delta).
/// For every agent, the pooled block success frequency must clear
/// 2 q^gamma minus three standard errors, and for every (N, M) pair the
/// fraction of runs with at least M successful blocks among the first N
/// must clear the tail bound.
inline BoundCheckReport empirical_bound_check(const std::vector<Trajectory>& runs,
                                              const BoundParams& bp,
                                              const std::vector<std::pair<long long, long long>>&
                                                  tail_cases = {},
                                              long long min_blocks = 100) {
  if (runs.empty()) throw Error(Errc::insufficient_samples, "no runs supplied");
  int n = runs.front().n;
  BoundCheckReport rep;
  rep.block_bound = bp.block_bound;
  rep.agent_frequency.assign(n, 0.0);
  rep.agent_blocks.assign(n, 0);

  std::vector<std::vector<std::vector<int>>> blocks(runs.size());
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto phi = phi_by_agent(runs[r]);
    blocks[r].resize(n);
    for (int i = 0; i < n; ++i) blocks[r][i] = phi_hat_series(phi[i], bp.gamma).blocks;
  }

  for (int i = 0; i < n; ++i) {
    long long total = 0, hits = 0;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      total += static_cast<long long>(blocks[r][i].size());
      for (int v : blocks[r][i]) hits += v;
    }
    if (total < min_blocks)
      throw Error(Errc::insufficient_samples,
                  "agent " + std::to_string(i) + " has only " + std::to_string(total) + " blocks");
    const double freq = static_cast<double>(hits) / static_cast<double>(total);
    const double se = std::sqrt(freq * (1.0 - freq) / static_cast<double>(total));
    rep.agent_frequency[i] = freq;
    rep.agent_blocks[i] = total;
    if (freq < bp.block_bound - 3.0 * se) rep.frequency_ok = false;
  }

  for (const auto& [N, M] : tail_cases) {
    Prop3Check check;
    check.N = N;
    check.M = M;
    check.bound = prop3_lower_bound(N, M, bp.q, bp.gamma);
    long long samples = 0, hits = 0;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      for (int i = 0; i < n; ++i) {
        const auto& bl = blocks[r][i];
        if (static_cast<long long>(bl.size()) < N) continue;
        long long sum = 0;
        for (long long k = 0; k < N; ++k) sum += bl[static_cast<std::size_t>(k)];
        ++samples;
        if (sum >= M) ++hits;
      }
    }
    if (samples == 0) throw Error(Errc::insufficient_samples, "no runs long enough for N blocks");
    check.samples = samples;
    check.empirical = static_cast<double>(hits) / static_cast<double>(samples);
    check.ok = check.empirical >= check.bound;
    rep.prop3.push_back(check);
  }
  return rep;
}

struct McSummary {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double stddev = std::numeric_limits<double>::quiet_NaN();
  int runs = 0;
  int unsettled = 0;
  std::vector<std::optional<double>> per_run;
};

/// Seeded Monte Carlo over independent runs. Results are keyed by seed
/// index, so the summary is identical for any worker count and any seed
/// permutation permutes per_run alone. Statistics cover settled runs only;
/// the sample (n-1) standard deviation is reported.
inline McSummary monte_carlo(const RunConfig& base, const std::vector<std::uint64_t>& seeds,
                             int workers = 1, bool use_first_entry = false) {
  if (seeds.size() < 2) throw Error(Errc::domain_error, "monte_carlo needs at least 2 seeds");
  McSummary out;
  out.runs = static_cast<int>(seeds.size());
  out.per_run.assign(seeds.size(), std::nullopt);

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= seeds.size()) return;
      RunConfig cfg = base;
      cfg.seed = seeds[j];
      const Trajectory tr = simulate(cfg);
      const ConsensusTimes ct = consensus_times(tr, base.graph, base.protocol.epsilon);
      out.per_run[j] = use_first_entry ? ct.first_entry : ct.settling;
    }
  };
  const int count = std::max(1, std::min<int>(workers, static_cast<int>(seeds.size())));
  if (count == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(count));
    for (int w = 0; w < count; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  double sum = 0.0;
  int settled = 0;
  for (const auto& v : out.per_run) {
    if (v) {
      sum += *v;
      ++settled;
    } else {
      ++out.unsettled;
    }
  }
  if (settled == 0) throw Error(Errc::all_runs_unsettled, "no run settled within the horizon");
  out.mean = sum / settled;
  if (settled >= 2) {
    double ss = 0.0;
    for (const auto& v : out.per_run)
      if (v) ss += (*v - out.mean) * (*v - out.mean);
    out.stddev = std::sqrt(ss / (settled - 1));
  }
  return out;
}

/// Derived per-run seeds for a batch, keyed by the master seed.
inline std::vector<std::uint64_t> derive_seeds(std::uint64_t master, std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t j = 0; j < count; ++j)
    seeds[j] = hash_draw(master, Stream::run_seeds, static_cast<std::uint64_t>(j), 0);
  return seeds;
}

}  // namespace jamsim
