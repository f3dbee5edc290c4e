#include "shotgun/assembler.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <numeric>

#include "shotgun/rng.hpp"

namespace shotgun {

std::string_view to_string(FailureReason reason) {
  switch (reason) {
    case FailureReason::kNone:
      return "none";
    case FailureReason::kCornerNotFound:
      return "corner-not-found";
    case FailureReason::kStalled:
      return "stalled";
    case FailureReason::kConflict:
      return "conflict";
  }
  return "unknown";
}

PartialLabeling::PartialLabeling(LatticeConfig config)
    : config_(config), raw_(config.vertex_count(), 0), determined_(config.vertex_count(), 0) {}

bool PartialLabeling::assign(std::size_t index, std::uint8_t raw) {
  if (determined_[index]) {
    if (raw_[index] != raw)
      throw AssemblyError(FailureReason::kConflict,
                          "conflicting value for vertex " + std::to_string(index) + ": determined " +
                              std::to_string(raw_[index] + 1) + ", derived " + std::to_string(raw + 1));
    return false;
  }
  if (raw >= config_.q()) throw AssemblyError(FailureReason::kConflict, "derived label outside [1, q]");
  raw_[index] = raw;
  determined_[index] = 1;
  ++determined_count_;
  return true;
}

std::optional<Labeling> PartialLabeling::to_labeling() const {
  if (!complete()) return std::nullopt;
  return Labeling(config_, raw_);
}

namespace {

std::string cube_header(int dim, int side) {
  std::string header;
  header.push_back(static_cast<char>(dim));
  for (int i = 0; i < dim; ++i) {
    header.push_back(static_cast<char>(side & 0xFF));
    header.push_back(static_cast<char>((side >> 8) & 0xFF));
  }
  return header;
}

Vertex offset_bits(int dim, int e) {
  Vertex v;
  for (int i = 0; i < dim; ++i) v[i] = (e >> (dim - 1 - i)) & 1;
  return v;
}

// Lattice geometry shared by the three phases.
struct Geometry {
  explicit Geometry(const LatticeConfig& config)
      : config(config),
        d(config.d()),
        n(config.n()),
        r(config.r()),
        k(config.r() - 1),
        lattice(config.lattice_extent()),
        shard(Extent::cube(d, r)),
        sub(Extent::cube(d, k)),
        shard_corners(Extent::cube(d, n - r + 1)),
        sub_corners(Extent::cube(d, n - k + 1)),
        rel_shard(relative_offsets(lattice, shard)),
        rel_sub(relative_offsets(lattice, sub)),
        sub_header(cube_header(d, k)) {}

  bool shard_corner_valid(const Vertex& c) const {
    for (int i = 0; i < d; ++i)
      if (c[i] < 0 || c[i] > n - r) return false;
    return true;
  }

  std::string sub_key(const PartialLabeling& partial, const Vertex& a) const {
    std::string key = sub_header;
    const auto base = static_cast<std::ptrdiff_t>(config.index_of(a));
    for (std::ptrdiff_t off : rel_sub) key.push_back(static_cast<char>(partial.raw_at(static_cast<std::size_t>(base + off))));
    return key;
  }

  bool sub_determined(const PartialLabeling& partial, const Vertex& a) const {
    const auto base = static_cast<std::ptrdiff_t>(config.index_of(a));
    for (std::ptrdiff_t off : rel_sub)
      if (!partial.is_determined(static_cast<std::size_t>(base + off))) return false;
    return true;
  }

  // Visit the corners, inside `corners`, of the boxes of side `side` that
  // contain vertex v.
  template <typename F>
  void for_each_covering(const Vertex& v, int side, const Extent& corners, F&& f) const {
    Vertex lo;
    Extent span;
    span.dim = d;
    for (int i = 0; i < d; ++i) {
      lo[i] = std::max(0, v[i] - side + 1);
      const int hi = std::min(v[i], corners[i] - 1);
      span.sides[static_cast<std::size_t>(i)] = hi - lo[i] + 1;
      if (hi < lo[i]) return;
    }
    for_each_offset(span, [&](const Vertex& x) {
      Vertex c;
      for (int i = 0; i < d; ++i) c[i] = lo[i] + x[i];
      f(c);
    });
  }

  LatticeConfig config;
  int d;
  int n;
  int r;
  int k;
  Extent lattice;
  Extent shard;
  Extent sub;
  Extent shard_corners;
  Extent sub_corners;
  std::vector<std::ptrdiff_t> rel_shard;
  std::vector<std::ptrdiff_t> rel_sub;
  std::string sub_header;
};

bool inside(const BoxRegion& outer, const Vertex& corner, int side, int dim) {
  for (int i = 0; i < dim; ++i)
    if (corner[i] < outer.corner[i] || corner[i] + side > outer.corner[i] + outer.sides[i]) return false;
  return true;
}

bool entry_unique(const SubboxIndex::Entry& entry, int offsets) {
  bool seen = false;
  for (int e = 0; e < offsets; ++e) {
    if (entry.totals[static_cast<std::size_t>(e)] > 1) return false;
    seen = seen || entry.totals[static_cast<std::size_t>(e)] == 1;
  }
  return seen;
}

// Worklist propagation of extend_from_unique. Tracks, for every (r-1)-box,
// how many of its cells are still undetermined.
class Percolator {
 public:
  Percolator(PartialLabeling& partial, const SubboxIndex& index, const BoxRegion* confine, PercolationStats* stats)
      : partial_(partial), index_(index), geo_(index.config()), confine_(confine), stats_(stats) {
    const std::size_t positions = geo_.sub_corners.volume();
    missing_.assign(positions, 0);
    state_.assign(positions, kIdle);
    for (std::size_t p = 0; p < positions; ++p) {
      const Vertex a = offset_vertex(geo_.sub_corners, p);
      const auto base = static_cast<std::ptrdiff_t>(geo_.config.index_of(a));
      std::uint32_t missing = 0;
      for (std::ptrdiff_t off : geo_.rel_sub)
        if (!partial_.is_determined(static_cast<std::size_t>(base + off))) ++missing;
      missing_[p] = missing;
      if (missing == 0 && in_scope(a)) enqueue(p);
    }
  }

  void run(WorklistOrder order, std::uint64_t seed) {
    CounterRng rng(seed);
    while (!queue_.empty()) {
      std::size_t p = 0;
      switch (order) {
        case WorklistOrder::kFifo:
          p = queue_.front();
          queue_.pop_front();
          break;
        case WorklistOrder::kLifo:
          p = queue_.back();
          queue_.pop_back();
          break;
        case WorklistOrder::kRandom: {
          const auto pick = static_cast<std::size_t>(rng.uniform(queue_.size()));
          std::swap(queue_[pick], queue_.back());
          p = queue_.back();
          queue_.pop_back();
          break;
        }
      }
      state_[p] = kExplored;
      extend(offset_vertex(geo_.sub_corners, p));
    }
  }

  std::size_t extend(const Vertex& a) {
    if (stats_) ++stats_->explored;
    const std::string key = geo_.sub_key(partial_, a);
    const SubboxIndex::Entry* entry = index_.find(key);
    if (entry == nullptr || !entry_unique(*entry, index_.offset_count())) return 0;
    if (index_.kind() == ProfileKind::kCanonical && automorphic(key)) return 0;
    if (stats_) {
      ++stats_->pivots;
      if (automorphic(key)) ++stats_->automorphic_pivots;
    }
    std::size_t written = 0;
    for (const SubboxIndex::Placement& pl : entry->placements) {
      const Vertex e = index_.offset_vector(pl.offset);
      Vertex c = a;
      for (int i = 0; i < geo_.d; ++i) c[i] -= e[i];
      if (!geo_.shard_corner_valid(c)) continue;
      if (confine_ != nullptr && !inside(*confine_, c, geo_.r, geo_.d)) continue;
      const auto& cells = index_.variants()[pl.variant].cells;
      const auto base = static_cast<std::ptrdiff_t>(geo_.config.index_of(c));
      for (std::size_t j = 0; j < cells.size(); ++j) {
        const auto idx = static_cast<std::size_t>(base + geo_.rel_shard[j]);
        if (partial_.assign(idx, cells[j])) {
          ++written;
          on_determined(idx);
        }
      }
    }
    return written;
  }

 private:
  enum : std::uint8_t { kIdle, kQueued, kExplored };

  bool in_scope(const Vertex& a) const { return confine_ == nullptr || inside(*confine_, a, geo_.k, geo_.d); }

  void enqueue(std::size_t p) {
    state_[p] = kQueued;
    queue_.push_back(static_cast<std::uint32_t>(p));
  }

  void on_determined(std::size_t idx) {
    const Vertex v = geo_.config.vertex_at(idx);
    geo_.for_each_covering(v, geo_.k, geo_.sub_corners, [&](const Vertex& a) {
      const std::size_t p = linear_offset(geo_.sub_corners, a);
      if (--missing_[p] == 0 && state_[p] == kIdle && in_scope(a)) enqueue(p);
    });
  }

  bool automorphic(const std::string& key) {
    auto it = automorphism_cache_.find(key);
    if (it == automorphism_cache_.end()) it = automorphism_cache_.emplace(key, has_automorphism(decode_pattern(key))).first;
    return it->second;
  }

  PartialLabeling& partial_;
  const SubboxIndex& index_;
  Geometry geo_;
  const BoxRegion* confine_;
  PercolationStats* stats_;
  std::vector<std::uint32_t> missing_;
  std::vector<std::uint8_t> state_;
  std::deque<std::uint32_t> queue_;
  std::unordered_map<std::string, bool> automorphism_cache_;
};

BoxRegion corner_region(const Geometry& geo, const Vertex& bits) {
  const int side = std::min(2 * geo.r, geo.n);
  BoxRegion region = BoxRegion::cube(Vertex{}, geo.d, side);
  for (int i = 0; i < geo.d; ++i) region.corner[i] = bits[i] ? geo.n - side : 0;
  return region;
}

bool region_complete(const PartialLabeling& partial, const BoxRegion& region) {
  bool complete = true;
  for_each_offset(region.sides, [&](const Vertex& x) {
    Vertex v = x;
    for (int i = 0; i < region.sides.dim; ++i) v[i] += region.corner[i];
    complete = complete && partial.is_determined(v);
  });
  return complete;
}

void write_variant(PartialLabeling& partial, const Geometry& geo, const Vertex& corner,
                   const std::vector<std::uint8_t>& cells) {
  const auto base = static_cast<std::ptrdiff_t>(geo.config.index_of(corner));
  for (std::size_t j = 0; j < cells.size(); ++j) partial.assign(static_cast<std::size_t>(base + geo.rel_shard[j]), cells[j]);
}

PartialLabeling oriented_corner(const SubboxIndex& index, const Geometry& geo) {
  PartialLabeling partial(geo.config);
  const int offsets = index.offset_count();
  std::array<std::vector<const std::string*>, SubboxIndex::kMaxOffsets> candidates;
  for (const auto& [key, entry] : index.entries()) {
    unsigned seen = 0;
    for (int e = 0; e < offsets; ++e)
      if (entry.totals[static_cast<std::size_t>(e)] > 0) seen |= 1u << e;
    if (std::popcount(seen) == 1) candidates[static_cast<std::size_t>(std::countr_zero(seen))].push_back(&key);
  }

  int anchored = 0;
  bool completed = false;
  for (int e = 0; e < offsets; ++e) {
    if (candidates[static_cast<std::size_t>(e)].size() != 1) continue;
    const Vertex bits = index.offset_vector(e);
    Vertex anchor;
    for (int i = 0; i < geo.d; ++i) anchor[i] = bits[i] ? geo.n - geo.k : 0;
    const Pattern corner = decode_pattern(*candidates[static_cast<std::size_t>(e)].front());
    const auto base = static_cast<std::ptrdiff_t>(geo.config.index_of(anchor));
    for (std::size_t j = 0; j < corner.size(); ++j) partial.assign(static_cast<std::size_t>(base + geo.rel_sub[j]), corner.raw(j));
    ++anchored;

    const BoxRegion region = corner_region(geo, bits);
    Percolator grow(partial, index, &region, nullptr);
    grow.run(WorklistOrder::kFifo, 0);
    completed = completed || region_complete(partial, region);
  }
  if (anchored == 0) throw AssemblyError(FailureReason::kCornerNotFound, "no corner (r-1)-pattern identified");
  if (!completed) throw AssemblyError(FailureReason::kStalled, "corner growth did not complete any corner 2r-box");
  return partial;
}

PartialLabeling canonical_corner(const SubboxIndex& index, const Geometry& geo) {
  PartialLabeling partial(geo.config);
  const auto& variants = index.variants();

  // Occurrences of each (r-1)-pattern class over all (shard, sub-box) pairs.
  std::map<std::string, std::uint64_t> class_count;
  std::map<std::string, std::uint32_t> class_shard;
  for (const auto& variant : variants) {
    if (variant.transform != 0) continue;
    for (int e = 0; e < index.offset_count(); ++e) {
      std::vector<std::uint8_t> cells;
      for (std::uint32_t j : index.subbox_cells(e)) cells.push_back(variant.cells[j]);
      const std::string key = encode_pattern(canonical_form(Pattern(geo.sub, std::move(cells))));
      class_count[key] += variant.multiplicity;
      class_shard.emplace(key, variant.shard);
    }
  }
  const std::string* chosen = nullptr;
  for (const auto& [key, count] : class_count) {
    if (count == 1) {
      chosen = &key;
      break;
    }
  }
  if (chosen == nullptr) throw AssemblyError(FailureReason::kCornerNotFound, "no corner (r-1)-pattern class identified");

  const std::uint32_t shard = class_shard.at(*chosen);
  for (const auto& variant : variants) {
    if (variant.shard != shard) continue;
    std::vector<std::uint8_t> cells;
    for (std::uint32_t j : index.subbox_cells(0)) cells.push_back(variant.cells[j]);
    if (encode_pattern(canonical_form(Pattern(geo.sub, std::move(cells)))) != *chosen) continue;
    write_variant(partial, geo, Vertex{}, variant.cells);
    break;
  }

  const BoxRegion region = corner_region(geo, Vertex{});
  Percolator grow(partial, index, &region, nullptr);
  grow.run(WorklistOrder::kFifo, 0);
  if (!region_complete(partial, region))
    throw AssemblyError(FailureReason::kStalled, "corner growth did not complete the corner 2r-box");
  return partial;
}

}  // namespace

SubboxIndex::SubboxIndex(const Profile& profile) : config_(profile.config()), kind_(profile.kind()) {
  const int d = config_.d();
  const int r = config_.r();
  const Extent shard = Extent::cube(d, r);
  const Extent sub = Extent::cube(d, r - 1);
  for (int e = 0; e < offset_count(); ++e) {
    const Vertex bits = offset_vector(e);
    auto& cells = subbox_cells_[static_cast<std::size_t>(e)];
    for_each_offset(sub, [&](const Vertex& x) {
      Vertex y = x;
      for (int i = 0; i < d; ++i) y[i] += bits[i];
      cells.push_back(static_cast<std::uint32_t>(linear_offset(shard, y)));
    });
  }

  const std::string header = cube_header(d, r - 1);
  const auto& group = hyperoctahedral_group(d);
  const std::size_t orientations = kind_ == ProfileKind::kCanonical ? group.size() : 1;
  std::uint32_t shard_id = 0;
  for (const auto& [key, multiplicity] : profile.counts()) {
    const Pattern base = decode_pattern(key);
    std::vector<std::vector<std::uint8_t>> seen;
    for (std::size_t t = 0; t < orientations; ++t) {
      const Pattern oriented = t == 0 ? base : transform_pattern(base, group[t]);
      std::vector<std::uint8_t> cells(oriented.raw_cells().begin(), oriented.raw_cells().end());
      if (std::find(seen.begin(), seen.end(), cells) != seen.end()) continue;
      seen.push_back(cells);

      const auto id = static_cast<std::uint32_t>(variants_.size());
      for (int e = 0; e < offset_count(); ++e) {
        std::string sub_key = header;
        for (std::uint32_t j : subbox_cells_[static_cast<std::size_t>(e)]) sub_key.push_back(static_cast<char>(cells[j]));
        Entry& entry = entries_[sub_key];
        entry.placements.push_back({id, static_cast<std::uint8_t>(e)});
        entry.totals[static_cast<std::size_t>(e)] += multiplicity;
      }
      variants_.push_back({std::move(cells), multiplicity, shard_id, static_cast<std::uint32_t>(t)});
    }
    ++shard_id;
  }

  const auto q = static_cast<std::size_t>(config_.q());
  by_cell_value_.resize(shard.volume() * q);
  for (std::uint32_t id = 0; id < variants_.size(); ++id) {
    const auto& cells = variants_[id].cells;
    for (std::size_t j = 0; j < cells.size(); ++j) by_cell_value_[j * q + cells[j]].push_back(id);
  }
}

Vertex SubboxIndex::offset_vector(int e) const { return offset_bits(config_.d(), e); }

const SubboxIndex::Entry* SubboxIndex::find(std::string_view key) const {
  const auto it = entries_.find(std::string(key));
  return it == entries_.end() ? nullptr : &it->second;
}

std::span<const std::uint32_t> SubboxIndex::variants_with(std::size_t cell, std::uint8_t raw) const {
  return by_cell_value_[cell * static_cast<std::size_t>(config_.q()) + raw];
}

SubboxIndex build_subbox_index(const Profile& profile) { return SubboxIndex(profile); }

bool is_unique_subbox(const Pattern& pattern, const SubboxIndex& index) {
  if (pattern.is_masked() || pattern.sides() != index.subbox_extent())
    throw PreconditionError("uniqueness is defined for full (r-1)-box patterns");
  const SubboxIndex::Entry* entry = index.find(encode_pattern(pattern));
  if (entry == nullptr || !entry_unique(*entry, index.offset_count())) return false;
  return index.kind() != ProfileKind::kCanonical || !has_automorphism(pattern);
}

PartialLabeling step1_corner(const SubboxIndex& index) {
  const Geometry geo(index.config());
  if (geo.n == geo.r) {
    // The only r-box is the lattice itself.
    PartialLabeling partial(geo.config);
    write_variant(partial, geo, Vertex{}, index.variants().front().cells);
    return partial;
  }
  return index.kind() == ProfileKind::kCanonical ? canonical_corner(index, geo) : oriented_corner(index, geo);
}

std::size_t extend_from_unique(PartialLabeling& partial, const BoxRegion& pivot, const SubboxIndex& index,
                               const BoxRegion* confine) {
  const Geometry geo(index.config());
  if (pivot.sides != geo.sub || !pivot.within(geo.config))
    throw PreconditionError("pivot must be an (r-1)-box inside the lattice");
  if (!geo.sub_determined(partial, pivot.corner)) throw PreconditionError("pivot box is not fully determined");
  Percolator single(partial, index, confine, nullptr);
  return single.extend(pivot.corner);
}

PartialLabeling step2_percolate(PartialLabeling partial, const SubboxIndex& index, WorklistOrder order,
                                std::uint64_t seed, PercolationStats* stats) {
  Percolator worklist(partial, index, nullptr, stats);
  worklist.run(order, seed);
  return partial;
}

PartialLabeling step3_finish(PartialLabeling partial, const SubboxIndex& index, std::uint64_t* filled) {
  const Geometry geo(index.config());
  const auto& variants = index.variants();
  const std::size_t volume = geo.shard.volume();
  const std::size_t boxes = geo.shard_corners.volume();
  std::uint64_t written = 0;

  std::vector<std::uint32_t> known(boxes, 0);
  std::vector<std::uint8_t> queued(boxes, 0);
  std::deque<std::uint32_t> queue;
  auto mixed = [&](std::size_t b) { return known[b] > 0 && known[b] < volume; };

  for (std::size_t b = 0; b < boxes; ++b) {
    const auto base = static_cast<std::ptrdiff_t>(geo.config.index_of(offset_vertex(geo.shard_corners, b)));
    for (std::ptrdiff_t off : geo.rel_shard)
      if (partial.is_determined(static_cast<std::size_t>(base + off))) ++known[b];
    if (mixed(b)) {
      queued[b] = 1;
      queue.push_back(static_cast<std::uint32_t>(b));
    }
  }

  std::vector<std::uint32_t> candidates;
  while (!queue.empty()) {
    const std::size_t b = queue.front();
    queue.pop_front();
    queued[b] = 0;
    if (!mixed(b)) continue;
    const Vertex c = offset_vertex(geo.shard_corners, b);
    const auto base = static_cast<std::ptrdiff_t>(geo.config.index_of(c));
    auto cell_index = [&](std::size_t j) { return static_cast<std::size_t>(base + geo.rel_shard[j]); };

    // Seed the candidate list from a determined sub-box if there is one,
    // otherwise from the rarest determined (cell, value) pair.
    candidates.clear();
    bool seeded = false;
    for (int e = 0; e < index.offset_count() && !seeded; ++e) {
      Vertex a = c;
      const Vertex bits = index.offset_vector(e);
      for (int i = 0; i < geo.d; ++i) a[i] += bits[i];
      if (!geo.sub_determined(partial, a)) continue;
      seeded = true;
      if (const SubboxIndex::Entry* entry = index.find(geo.sub_key(partial, a))) {
        for (const auto& pl : entry->placements)
          if (pl.offset == e) candidates.push_back(pl.variant);
      }
    }
    if (!seeded) {
      std::span<const std::uint32_t> rarest;
      bool have = false;
      for (std::size_t j = 0; j < volume; ++j) {
        if (!partial.is_determined(cell_index(j))) continue;
        const auto list = index.variants_with(j, partial.raw_at(cell_index(j)));
        if (!have || list.size() < rarest.size()) {
          rarest = list;
          have = true;
        }
      }
      candidates.assign(rarest.begin(), rarest.end());
    }
    std::erase_if(candidates, [&](std::uint32_t id) {
      const auto& cells = variants[id].cells;
      for (std::size_t j = 0; j < volume; ++j) {
        const std::size_t idx = cell_index(j);
        if (partial.is_determined(idx) && partial.raw_at(idx) != cells[j]) return true;
      }
      return false;
    });
    if (candidates.empty())
      throw AssemblyError(FailureReason::kConflict, "no shard agrees with the determined cells of an r-box");

    for (std::size_t j = 0; j < volume; ++j) {
      const std::size_t idx = cell_index(j);
      if (partial.is_determined(idx)) continue;
      const std::uint8_t value = variants[candidates.front()].cells[j];
      const bool agreed = std::all_of(candidates.begin(), candidates.end(),
                                      [&](std::uint32_t id) { return variants[id].cells[j] == value; });
      if (!agreed || !partial.assign(idx, value)) continue;
      ++written;
      geo.for_each_covering(geo.config.vertex_at(idx), geo.r, geo.shard_corners, [&](const Vertex& other) {
        const std::size_t ob = linear_offset(geo.shard_corners, other);
        ++known[ob];
        if (mixed(ob) && !queued[ob]) {
          queued[ob] = 1;
          queue.push_back(static_cast<std::uint32_t>(ob));
        }
      });
    }
  }
  if (filled) *filled = written;
  return partial;
}

namespace {

AssemblyResult run_assembly(const Profile& profile) {
  AssemblyResult result;
  AssemblyReport& report = result.report;
  const SubboxIndex index(profile);
  PercolationStats stats;
  try {
    PartialLabeling partial = step1_corner(index);
    report.determined_after_step[0] = partial.determined_count();
    partial = step2_percolate(std::move(partial), index, WorklistOrder::kFifo, 0, &stats);
    report.determined_after_step[1] = partial.determined_count();
    for (;;) {
      std::uint64_t filled = 0;
      partial = step3_finish(std::move(partial), index, &filled);
      report.step3_filled += filled;
      if (filled == 0 || partial.complete()) break;
      const std::size_t before = partial.determined_count();
      partial = step2_percolate(std::move(partial), index, WorklistOrder::kFifo, 0, &stats);
      if (partial.determined_count() == before) {
        // step 3 may still have work unlocked by its own writes
        continue;
      }
    }
    report.determined_after_step[2] = partial.determined_count();
    if (partial.complete()) {
      Labeling labeling = *partial.to_labeling();
      const Profile check =
          profile.kind() == ProfileKind::kCanonical ? shatter_symmetric(labeling) : shatter(labeling);
      if (!(check == profile))
        throw AssemblyError(FailureReason::kConflict, "recovered labeling does not reproduce the profile");
      result.labeling = std::move(labeling);
      report.success = true;
    } else {
      report.failure_reason = FailureReason::kStalled;
    }
  } catch (const AssemblyError& err) {
    report.failure_reason = err.reason();
    result.labeling.reset();
    report.success = false;
  }
  report.step2_explored_boxes = stats.explored;
  report.automorphic_pivots = stats.automorphic_pivots;
  for (std::size_t s = 1; s < report.determined_after_step.size(); ++s)
    report.determined_after_step[s] = std::max(report.determined_after_step[s], report.determined_after_step[s - 1]);
  return result;
}

}  // namespace

AssemblyResult assemble(const Profile& profile) {
  if (profile.kind() != ProfileKind::kOriented) throw PreconditionError("assemble expects an oriented profile");
  return run_assembly(profile);
}

AssemblyResult assemble_symmetric(const Profile& profile) {
  if (profile.kind() != ProfileKind::kCanonical)
    throw PreconditionError("assemble_symmetric expects a canonical profile");
  return run_assembly(profile);
}

std::vector<int> partition_starts(int n, int r) {
  const int side = std::min(2 * r, n);
  std::vector<int> starts;
  for (int s = 0; s + side <= n; s += r) starts.push_back(s);
  if (starts.empty() || starts.back() != n - side) starts.push_back(n - side);
  return starts;
}

OpennessStats openness_stats(const Labeling& labeling, bool symmetric) {
  const LatticeConfig& config = labeling.config();
  const Geometry geo(config);
  const std::size_t positions = geo.sub_corners.volume();
  const auto raw = labeling.raw();

  std::vector<std::string> keys(positions);
  std::unordered_map<std::string, std::uint32_t> occurrences;
  for (std::size_t p = 0; p < positions; ++p) {
    const auto base = static_cast<std::ptrdiff_t>(config.index_of(offset_vertex(geo.sub_corners, p)));
    std::string key = geo.sub_header;
    for (std::ptrdiff_t off : geo.rel_sub) key.push_back(static_cast<char>(raw[static_cast<std::size_t>(base + off)]));
    if (symmetric) key = encode_pattern(canonical_form(decode_pattern(key)));
    ++occurrences[key];
    keys[p] = std::move(key);
  }
  std::vector<std::uint8_t> unique(positions, 0);
  std::unordered_map<std::string, bool> automorphic;
  for (std::size_t p = 0; p < positions; ++p) {
    bool ok = occurrences[keys[p]] == 1;
    if (ok && symmetric) {
      auto it = automorphic.find(keys[p]);
      if (it == automorphic.end()) it = automorphic.emplace(keys[p], has_automorphism(decode_pattern(keys[p]))).first;
      ok = !it->second;
    }
    unique[p] = ok ? 1 : 0;
  }

  const std::vector<int> starts = partition_starts(geo.n, geo.r);
  const int side = std::min(2 * geo.r, geo.n);
  const Extent grid = Extent::cube(geo.d, static_cast<int>(starts.size()));
  const Extent inner = Extent::cube(geo.d, side - geo.k + 1);

  OpennessStats stats;
  std::vector<Vertex> closed;
  for_each_offset(grid, [&](const Vertex& g) {
    Vertex corner;
    for (int i = 0; i < geo.d; ++i) corner[i] = starts[static_cast<std::size_t>(g[i])];
    bool open = true;
    for_each_offset(inner, [&](const Vertex& x) {
      Vertex a = corner;
      for (int i = 0; i < geo.d; ++i) a[i] += x[i];
      open = open && unique[linear_offset(geo.sub_corners, a)] != 0;
    });
    ++stats.total_boxes;
    if (open)
      ++stats.open_boxes;
    else
      closed.push_back(corner);
  });

  // Weakly connected components of closed boxes.
  std::vector<std::size_t> parent(closed.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  const int reach = 4 * geo.r + side - 1;  // max corner difference within distance 4r
  for (std::size_t a = 0; a < closed.size(); ++a) {
    for (std::size_t b = a + 1; b < closed.size(); ++b) {
      bool near = true;
      for (int i = 0; i < geo.d && near; ++i) near = std::abs(closed[a][i] - closed[b][i]) <= reach;
      if (near) parent[find(a)] = find(b);
    }
  }
  std::unordered_map<std::size_t, std::pair<Vertex, Vertex>> bounds;
  for (std::size_t a = 0; a < closed.size(); ++a) {
    auto [it, fresh] = bounds.try_emplace(find(a), closed[a], closed[a]);
    for (int i = 0; i < geo.d; ++i) {
      it->second.first[i] = std::min(it->second.first[i], closed[a][i]);
      it->second.second[i] = std::max(it->second.second[i], closed[a][i]);
    }
  }
  stats.closed_component_count = bounds.size();
  for (const auto& [root, box] : bounds) {
    std::uint64_t extent = 0;
    for (int i = 0; i < geo.d; ++i)
      extent = std::max<std::uint64_t>(extent, static_cast<std::uint64_t>(box.second[i] - box.first[i] + side));
    stats.max_closed_component_diameter = std::max(stats.max_closed_component_diameter, extent);
  }
  return stats;
}

}  // namespace shotgun
