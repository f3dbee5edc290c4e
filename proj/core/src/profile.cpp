#include "shotgun/profile.hpp"

#include <numeric>

#include "shotgun/errors.hpp"

namespace shotgun {

namespace {

// Encoding header shared by every full pattern of extent `e`.
std::string pattern_header(const Extent& e) {
  std::string header;
  header.push_back(static_cast<char>(e.dim));
  for (int i = 0; i < e.dim; ++i) {
    header.push_back(static_cast<char>(e[i] & 0xFF));
    header.push_back(static_cast<char>((e[i] >> 8) & 0xFF));
  }
  return header;
}

}  // namespace

Profile::Profile(LatticeConfig config, Counts counts, ProfileKind kind)
    : config_(config), counts_(std::move(counts)), kind_(kind) {
  const Extent shard = config_.shard_extent();
  std::uint64_t total = 0;
  for (const auto& [key, count] : counts_) {
    if (count == 0) throw FormatError("profile multiplicities must be positive");
    const Pattern p = decode_pattern(key);
    if (p.sides() != shard) throw FormatError("profile key is not a full r-box pattern");
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p.raw(i) >= config_.q()) throw FormatError("profile key has a label outside [1, q]");
    total += count;
  }
  if (total != config_.shard_count())
    throw FormatError("profile total multiplicity " + std::to_string(total) + " differs from (n-r+1)^d = " +
                      std::to_string(config_.shard_count()));
}

std::uint64_t Profile::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0},
                         [](std::uint64_t acc, const auto& kv) { return acc + kv.second; });
}

Profile shatter(const Labeling& labeling) {
  const LatticeConfig& config = labeling.config();
  const Extent shard = config.shard_extent();
  const auto offsets = relative_offsets(config.lattice_extent(), shard);
  const std::string header = pattern_header(shard);
  const auto raw = labeling.raw();

  Profile::Counts counts;
  std::string key = header;
  key.resize(header.size() + offsets.size());
  for (const BoxRegion& box : enumerate_boxes(config, config.r())) {
    const auto base = static_cast<std::ptrdiff_t>(config.index_of(box.corner));
    for (std::size_t j = 0; j < offsets.size(); ++j)
      key[header.size() + j] = static_cast<char>(raw[static_cast<std::size_t>(base + offsets[j])]);
    ++counts[key];
  }
  return Profile(config, std::move(counts), ProfileKind::kOriented);
}

bool profiles_equal(const Profile& a, const Profile& b) {
  if (!(a.config() == b.config())) throw ConfigMismatch("profiles come from different configurations");
  return a.kind() == b.kind() && a.counts() == b.counts();
}

std::uint64_t PuncturedProfile::component_total(std::size_t j) const {
  std::uint64_t total = 0;
  for (const auto& [key, count] : components.at(j)) total += count;
  return total;
}

bool in_punctured_domain(const LatticeConfig& config, const Vertex& u) {
  for (int i = 0; i < config.d(); ++i)
    if (u[i] < config.r() || u[i] > config.n() - config.r()) return false;
  return true;
}

PuncturedProfile punctured_profile(const Labeling& labeling, const std::vector<Vertex>& points) {
  const LatticeConfig& config = labeling.config();
  const Extent shard = config.shard_extent();
  const std::size_t cells = shard.volume();

  PuncturedProfile out;
  out.components.resize(cells);
  for (const Vertex& u : points) {
    if (!in_punctured_domain(config, u)) throw PreconditionError("punctured vertex lies outside Lambda'_n");
    std::size_t j = 0;
    for_each_offset(shard, [&](const Vertex& o) {
      Vertex corner = u;
      for (int i = 0; i < config.d(); ++i) corner[i] -= o[i];
      const Pattern full = extract_pattern(labeling, BoxRegion{corner, shard});
      std::vector<std::uint8_t> mask(cells, 1);
      mask[j] = 0;
      const Pattern punctured(shard, {full.raw_cells().begin(), full.raw_cells().end()}, std::move(mask));
      ++out.components[j][encode_pattern(punctured)];
      ++j;
    });
  }
  return out;
}

std::vector<Vertex> grid_points(const Labeling& labeling, int k) {
  const LatticeConfig& config = labeling.config();
  if (k < 1 || k > config.q()) throw PreconditionError("label k must be in [1, q]");
  const int step = 2 * config.r();
  const int first = ((config.r() + step - 1) / step) * step;
  const int last = config.n() - config.r();
  std::vector<Vertex> out;
  if (first > last) return out;
  const int per_axis = (last - first) / step + 1;
  for_each_offset(Extent::cube(config.d(), per_axis), [&](const Vertex& g) {
    Vertex v;
    for (int i = 0; i < config.d(); ++i) v[i] = first + g[i] * step;
    if (labeling.label(v) == k) out.push_back(v);
  });
  return out;
}

}  // namespace shotgun
