#pragma once

// Threshold arithmetic and Monte Carlo parameter sweeps.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace shotgun {

/// Value of r at which q^(r^d) = n^d for d >= 2, and q^r = n^2 for d = 1.
double critical_r(int d, int n, int q);

/// log(q^(r^d)) / log(n^d) - 1. Positive above the threshold.
double implied_epsilon(int d, int n, int q, int r);

enum class SweepMode : std::uint8_t { kOriented, kSymmetric };

struct SweepTasks {
  bool assemble = true;
  bool spoil = false;
  bool openness = false;
};

struct SweepSpec {
  std::vector<int> d;
  std::vector<int> n;
  std::vector<int> q;
  std::vector<int> r;
  int trials = 1;
  std::uint64_t seed = 0;
  SweepMode mode = SweepMode::kOriented;
  SweepTasks tasks;
  /// Cells with more vertices are skipped (every trial counted as skipped).
  std::uint64_t max_vertices = std::uint64_t{1} << 22;
  /// Candidate-set budget and largest set size for the multiset spoiler.
  std::uint64_t spoil_budget = 100000;
  int spoil_max_size = 2;
  /// 0 picks std::thread::hardware_concurrency().
  int threads = 0;

  /// Throws InvalidConfig on an empty grid, trials < 1 or bad values.
  void validate() const;
};

/// Parses a key=value spec (one pair per line, '#' starts a comment).
/// Keys: d, n, q, r (comma separated integers or a..b ranges), trials, seed,
/// mode (oriented|symmetric), tasks (comma separated subset of
/// assemble, spoil, openness), max_vertices, spoil_budget, spoil_max_size,
/// threads. Throws InvalidConfig.
SweepSpec parse_sweep_spec(std::string_view text);

struct SweepRow {
  int d = 0;
  int n = 0;
  int q = 0;
  int r = 0;
  double implied_epsilon = 0;
  int trials = 0;
  int skipped = 0;
  // NaN when the task was not run.
  double assemble_success_rate = 0;
  double spoil_success_rate = 0;
  double mean_open_fraction = 0;
  double mean_determined_after_step2 = 0;
};

/// One row per valid (d, n, q, r) cell (cells with r > n or an invalid
/// config are dropped), sorted by (d, n, q, r). Deterministic in the spec.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// Seed of trial `trial` in cell (d, n, q, r).
std::uint64_t trial_seed(std::uint64_t base, int d, int n, int q, int r, int trial);

inline constexpr std::string_view kSweepCsvHeader =
    "d,n,q,r,implied_epsilon,trials,assemble_success_rate,spoil_success_rate,mean_open_fraction,"
    "mean_determined_after_step2";

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace shotgun
