#include "shotgun/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "shotgun/assembler.hpp"
#include "shotgun/errors.hpp"
#include "shotgun/lattice.hpp"
#include "shotgun/profile.hpp"
#include "shotgun/rng.hpp"
#include "shotgun/spoiler.hpp"
#include "shotgun/symmetry.hpp"

namespace shotgun {

double critical_r(int d, int n, int q) {
  const double ratio = std::log(static_cast<double>(n)) / std::log(static_cast<double>(q));
  if (d == 1) return 2.0 * ratio;
  return std::pow(static_cast<double>(d) * ratio, 1.0 / static_cast<double>(d));
}

double implied_epsilon(int d, int n, int q, int r) {
  const double volume = std::pow(static_cast<double>(r), static_cast<double>(d));
  const double exponent = d == 1 ? 2.0 : static_cast<double>(d);
  return volume * std::log(static_cast<double>(q)) / (exponent * std::log(static_cast<double>(n))) - 1.0;
}

void SweepSpec::validate() const {
  if (d.empty() || n.empty() || q.empty() || r.empty()) throw InvalidConfig("sweep grid is empty");
  if (trials < 1) throw InvalidConfig("trials must be at least 1");
  if (spoil_max_size < 1) throw InvalidConfig("spoil_max_size must be at least 1");
  if (threads < 0) throw InvalidConfig("threads must be non-negative");
  if (!tasks.assemble && !tasks.spoil && !tasks.openness) throw InvalidConfig("no sweep task selected");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view text, std::string_view key) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw InvalidConfig("bad value '" + std::string(text) + "' for " + std::string(key));
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::vector<int> parse_int_list(std::string_view value, std::string_view key) {
  std::vector<int> out;
  for (std::string_view item : split(value, ',')) {
    if (item.empty()) continue;
    if (const auto dots = item.find(".."); dots != std::string_view::npos) {
      const int lo = parse_number<int>(item.substr(0, dots), key);
      const int hi = parse_number<int>(item.substr(dots + 2), key);
      if (hi < lo) throw InvalidConfig("empty range for " + std::string(key));
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(parse_number<int>(item, key));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

SweepSpec parse_sweep_spec(std::string_view text) {
  SweepSpec spec;
  std::size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw InvalidConfig("line " + std::to_string(line_no) + ": expected key=value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key == "d") {
      spec.d = parse_int_list(value, key);
    } else if (key == "n") {
      spec.n = parse_int_list(value, key);
    } else if (key == "q") {
      spec.q = parse_int_list(value, key);
    } else if (key == "r") {
      spec.r = parse_int_list(value, key);
    } else if (key == "trials") {
      spec.trials = parse_number<int>(value, key);
    } else if (key == "seed") {
      spec.seed = parse_number<std::uint64_t>(value, key);
    } else if (key == "mode") {
      if (value == "oriented")
        spec.mode = SweepMode::kOriented;
      else if (value == "symmetric")
        spec.mode = SweepMode::kSymmetric;
      else
        throw InvalidConfig("mode must be oriented or symmetric");
    } else if (key == "tasks") {
      spec.tasks = SweepTasks{false, false, false};
      for (std::string_view task : split(value, ',')) {
        if (task == "assemble")
          spec.tasks.assemble = true;
        else if (task == "spoil")
          spec.tasks.spoil = true;
        else if (task == "openness")
          spec.tasks.openness = true;
        else if (!task.empty())
          throw InvalidConfig("unknown task '" + std::string(task) + "'");
      }
    } else if (key == "max_vertices") {
      spec.max_vertices = parse_number<std::uint64_t>(value, key);
    } else if (key == "spoil_budget") {
      spec.spoil_budget = parse_number<std::uint64_t>(value, key);
    } else if (key == "spoil_max_size") {
      spec.spoil_max_size = parse_number<int>(value, key);
    } else if (key == "threads") {
      spec.threads = parse_number<int>(value, key);
    } else {
      throw InvalidConfig("unknown key '" + std::string(key) + "'");
    }
  }
  spec.validate();
  return spec;
}

std::uint64_t trial_seed(std::uint64_t base, int d, int n, int q, int r, int trial) {
  std::uint64_t cell = derive_seed(base, static_cast<std::uint64_t>(d));
  cell = derive_seed(cell, static_cast<std::uint64_t>(n));
  cell = derive_seed(cell, static_cast<std::uint64_t>(q));
  cell = derive_seed(cell, static_cast<std::uint64_t>(r));
  return derive_seed(cell, static_cast<std::uint64_t>(trial));
}

namespace {

struct TrialOutcome {
  bool skipped = false;
  bool assembled = false;
  bool spoiled = false;
  double open_fraction = 0;
  double determined_after_step2 = 0;
};

bool run_spoiler(const Labeling& labeling, const SweepSpec& spec, std::uint64_t seed) {
  const LatticeConfig& config = labeling.config();
  const bool symmetric = spec.mode == SweepMode::kSymmetric;
  const int parts = symmetric ? 8 : 6;
  if (config.d() == 1 && config.n() >= parts * config.r())
    return symmetric ? spoil_1d_symmetric(labeling).has_value() : spoil_1d(labeling).has_value();
  return find_multiset_swap(labeling, spec.spoil_max_size, spec.spoil_budget, derive_seed(seed, 1), symmetric)
      .has_value();
}

TrialOutcome run_trial(const LatticeConfig& config, const SweepSpec& spec, std::uint64_t seed) {
  TrialOutcome out;
  if (config.vertex_count() > spec.max_vertices) {
    out.skipped = true;
    return out;
  }
  const bool symmetric = spec.mode == SweepMode::kSymmetric;
  const Labeling truth = sample_labeling(config, seed);
  if (spec.tasks.assemble) {
    if (symmetric) {
      const AssemblyResult result = assemble_symmetric(shatter_symmetric(truth));
      out.assembled = result.labeling && equal_up_to_isomorphism(*result.labeling, truth);
      out.determined_after_step2 = static_cast<double>(result.report.determined_after_step[1]);
    } else {
      const AssemblyResult result = assemble(shatter(truth));
      out.assembled = result.labeling && *result.labeling == truth;
      out.determined_after_step2 = static_cast<double>(result.report.determined_after_step[1]);
    }
    out.determined_after_step2 /= static_cast<double>(config.vertex_count());
  }
  if (spec.tasks.spoil) out.spoiled = run_spoiler(truth, spec, seed);
  if (spec.tasks.openness) out.open_fraction = openness_stats(truth, symmetric).open_fraction();
  return out;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<LatticeConfig> cells;
  for (int d : spec.d)
    for (int n : spec.n)
      for (int q : spec.q)
        for (int r : spec.r) {
          try {
            cells.push_back(LatticeConfig::make(d, n, q, r));
          } catch (const InvalidConfig&) {
          }
        }
  std::sort(cells.begin(), cells.end(), [](const LatticeConfig& a, const LatticeConfig& b) {
    return std::tuple(a.d(), a.n(), a.q(), a.r()) < std::tuple(b.d(), b.n(), b.q(), b.r());
  });

  const std::size_t trials = static_cast<std::size_t>(spec.trials);
  const std::size_t jobs = cells.size() * trials;
  std::vector<TrialOutcome> outcomes(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      const LatticeConfig& c = cells[job / trials];
      const int trial = static_cast<int>(job % trials);
      outcomes[job] = run_trial(c, spec, trial_seed(spec.seed, c.d(), c.n(), c.q(), c.r(), trial));
    }
  };
  unsigned workers = spec.threads > 0 ? static_cast<unsigned>(spec.threads) : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(jobs, 1))));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<SweepRow> rows;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const LatticeConfig& config = cells[c];
    SweepRow row;
    row.d = config.d();
    row.n = config.n();
    row.q = config.q();
    row.r = config.r();
    row.implied_epsilon = implied_epsilon(row.d, row.n, row.q, row.r);
    row.trials = spec.trials;
    double assembled = 0;
    double spoiled = 0;
    double open = 0;
    double determined = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      const TrialOutcome& o = outcomes[c * trials + t];
      if (o.skipped) {
        ++row.skipped;
        continue;
      }
      assembled += o.assembled ? 1 : 0;
      spoiled += o.spoiled ? 1 : 0;
      open += o.open_fraction;
      determined += o.determined_after_step2;
    }
    const int ran = row.trials - row.skipped;
    const double denom = ran > 0 ? static_cast<double>(ran) : nan;
    row.assemble_success_rate = spec.tasks.assemble ? assembled / denom : nan;
    row.mean_determined_after_step2 = spec.tasks.assemble ? determined / denom : nan;
    row.spoil_success_rate = spec.tasks.spoil ? spoiled / denom : nan;
    row.mean_open_fraction = spec.tasks.openness ? open / denom : nan;
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::string fixed6(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

}  // namespace

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepCsvHeader << '\n';
  for (const SweepRow& row : rows) {
    out << row.d << ',' << row.n << ',' << row.q << ',' << row.r << ',' << fixed6(row.implied_epsilon) << ','
        << row.trials << ',' << fixed6(row.assemble_success_rate) << ',' << fixed6(row.spoil_success_rate) << ','
        << fixed6(row.mean_open_fraction) << ',' << fixed6(row.mean_determined_after_step2) << '\n';
  }
}

}  // namespace shotgun
