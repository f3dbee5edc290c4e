#include "shotgun/lattice.hpp"

#include <algorithm>
#include <limits>

#include "shotgun/errors.hpp"
#include "shotgun/rng.hpp"

namespace shotgun {

namespace {

// Largest lattice we agree to allocate (one byte per vertex).
constexpr std::uint64_t kMaxVertices = std::uint64_t{1} << 31;

bool checked_power(std::uint64_t base, int exp, std::uint64_t cap, std::uint64_t& out) {
  std::uint64_t acc = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && acc > cap / base) return false;
    acc *= base;
  }
  out = acc;
  return true;
}

}  // namespace

Extent Extent::cube(int dim, int side) {
  Extent e;
  e.dim = dim;
  for (int i = 0; i < dim; ++i) e.sides[static_cast<std::size_t>(i)] = side;
  return e;
}

std::size_t Extent::volume() const {
  std::size_t v = 1;
  for (int i = 0; i < dim; ++i) v *= static_cast<std::size_t>(std::max(0, (*this)[i]));
  return v;
}

bool Extent::is_cube() const {
  for (int i = 1; i < dim; ++i)
    if ((*this)[i] != (*this)[0]) return false;
  return true;
}

std::size_t linear_offset(const Extent& e, const Vertex& x) {
  std::size_t idx = 0;
  for (int i = 0; i < e.dim; ++i) idx = idx * static_cast<std::size_t>(e[i]) + static_cast<std::size_t>(x[i]);
  return idx;
}

Vertex offset_vertex(const Extent& e, std::size_t index) {
  Vertex x;
  for (int i = e.dim - 1; i >= 0; --i) {
    const auto side = static_cast<std::size_t>(e[i]);
    x[i] = static_cast<std::int32_t>(index % side);
    index /= side;
  }
  return x;
}

LatticeConfig LatticeConfig::make(int d, int n, int q, int r) {
  if (d < 1 || d > kMaxDim) throw InvalidConfig("dimension d must be in [1, 4], got " + std::to_string(d));
  if (q < 2 || q > kMaxAlphabet) throw InvalidConfig("alphabet size q must be in [2, 256], got " + std::to_string(q));
  if (n < 2 || n > std::numeric_limits<std::uint16_t>::max())
    throw InvalidConfig("side length n must be in [2, 65535], got " + std::to_string(n));
  if (r < 2 || r > n)
    throw InvalidConfig("observation size r must satisfy 2 <= r <= n, got r=" + std::to_string(r) +
                        " n=" + std::to_string(n));
  std::uint64_t vertices = 0;
  if (!checked_power(static_cast<std::uint64_t>(n), d, kMaxVertices, vertices))
    throw InvalidConfig("lattice too large: n^d exceeds 2^31 vertices");
  return LatticeConfig(d, n, q, r, static_cast<std::size_t>(vertices));
}

std::size_t LatticeConfig::box_count(int s) const {
  if (s > n_ || s < 1) return 0;
  std::size_t count = 1;
  for (int i = 0; i < d_; ++i) count *= static_cast<std::size_t>(n_ - s + 1);
  return count;
}

bool LatticeConfig::contains(const Vertex& v) const {
  for (int i = 0; i < d_; ++i)
    if (v[i] < 0 || v[i] >= n_) return false;
  return true;
}

std::size_t LatticeConfig::index_of(const Vertex& v) const { return linear_offset(lattice_extent(), v); }

Vertex LatticeConfig::vertex_at(std::size_t index) const { return offset_vertex(lattice_extent(), index); }

bool BoxRegion::contains(const Vertex& v) const {
  for (int i = 0; i < sides.dim; ++i)
    if (v[i] < corner[i] || v[i] >= corner[i] + sides[i]) return false;
  return true;
}

bool BoxRegion::within(const LatticeConfig& config) const {
  if (sides.dim != config.d()) return false;
  for (int i = 0; i < sides.dim; ++i) {
    if (sides[i] < 1 || corner[i] < 0) return false;
    if (static_cast<std::int64_t>(corner[i]) + sides[i] > config.n()) return false;
  }
  return true;
}

Pattern::Pattern(Extent sides, std::vector<std::uint8_t> raw, std::vector<std::uint8_t> mask)
    : sides_(sides), raw_(std::move(raw)), mask_(std::move(mask)) {
  if (sides_.dim < 1 || sides_.dim > kMaxDim) throw PreconditionError("pattern dimension must be in [1, 4]");
  for (int i = 0; i < sides_.dim; ++i)
    if (sides_[i] < 1) throw PreconditionError("pattern sides must be >= 1");
  if (raw_.size() != sides_.volume()) throw PreconditionError("pattern cell count does not match its sides");
  if (!mask_.empty() && mask_.size() != raw_.size()) throw PreconditionError("pattern mask size mismatch");
  for (auto& m : mask_) m = m ? 1 : 0;
}

Pattern Pattern::from_labels(Extent sides, std::span<const int> labels) {
  std::vector<std::uint8_t> raw;
  raw.reserve(labels.size());
  for (int label : labels) {
    if (label < 1 || label > kMaxAlphabet) throw PreconditionError("pattern labels must be in [1, 256]");
    raw.push_back(static_cast<std::uint8_t>(label - 1));
  }
  return Pattern(sides, std::move(raw));
}

Pattern Pattern::sub_pattern(const BoxRegion& region) const {
  if (region.sides.dim != dim()) throw OutOfBounds("sub-pattern dimension mismatch");
  for (int i = 0; i < dim(); ++i)
    if (region.corner[i] < 0 || region.sides[i] < 1 || region.corner[i] + region.sides[i] > sides_[i])
      throw OutOfBounds("sub-pattern region outside the pattern");
  std::vector<std::uint8_t> raw;
  std::vector<std::uint8_t> mask;
  raw.reserve(region.sides.volume());
  if (is_masked()) mask.reserve(region.sides.volume());
  for_each_offset(region.sides, [&](const Vertex& x) {
    Vertex y = x;
    for (int i = 0; i < dim(); ++i) y[i] += region.corner[i];
    const std::size_t idx = linear_offset(sides_, y);
    raw.push_back(raw_[idx]);
    if (is_masked()) mask.push_back(mask_[idx]);
  });
  return Pattern(region.sides, std::move(raw), std::move(mask));
}

bool operator==(const Pattern& a, const Pattern& b) {
  if (a.sides_ != b.sides_ || a.mask_ != b.mask_) return false;
  for (std::size_t i = 0; i < a.raw_.size(); ++i)
    if (a.present(i) && a.raw_[i] != b.raw_[i]) return false;
  return true;
}

std::string encode_pattern(const Pattern& pattern) {
  const Extent& sides = pattern.sides();
  std::string out;
  const std::size_t cells = pattern.size();
  out.reserve(1 + 2 * static_cast<std::size_t>(sides.dim) + (pattern.is_masked() ? (cells + 7) / 8 : 0) + cells);
  out.push_back(static_cast<char>(sides.dim));
  for (int i = 0; i < sides.dim; ++i) {
    if (sides[i] > std::numeric_limits<std::uint16_t>::max())
      throw PreconditionError("pattern side exceeds the 16-bit encoding range");
    const auto s = static_cast<std::uint16_t>(sides[i]);
    out.push_back(static_cast<char>(s & 0xFF));
    out.push_back(static_cast<char>(s >> 8));
  }
  if (pattern.is_masked()) {
    const std::size_t start = out.size();
    out.append((cells + 7) / 8, '\0');
    for (std::size_t i = 0; i < cells; ++i)
      if (pattern.present(i)) out[start + i / 8] = static_cast<char>(out[start + i / 8] | (1 << (i % 8)));
  }
  for (std::size_t i = 0; i < cells; ++i)
    if (pattern.present(i)) out.push_back(static_cast<char>(pattern.raw(i)));
  return out;
}

Pattern decode_pattern(std::string_view bytes, bool masked) {
  auto byte = [&](std::size_t i) { return static_cast<std::uint8_t>(bytes[i]); };
  if (bytes.empty()) throw FormatError("empty pattern encoding");
  Extent sides;
  sides.dim = byte(0);
  if (sides.dim < 1 || sides.dim > kMaxDim) throw FormatError("pattern encoding has invalid dimension");
  std::size_t pos = 1;
  if (bytes.size() < pos + 2 * static_cast<std::size_t>(sides.dim)) throw FormatError("truncated pattern header");
  for (int i = 0; i < sides.dim; ++i) {
    sides.sides[static_cast<std::size_t>(i)] = byte(pos) | (byte(pos + 1) << 8);
    if (sides[i] == 0) throw FormatError("pattern encoding has a zero side");
    pos += 2;
  }
  const std::size_t cells = sides.volume();
  std::vector<std::uint8_t> mask;
  if (masked) {
    const std::size_t mask_bytes = (cells + 7) / 8;
    if (bytes.size() < pos + mask_bytes) throw FormatError("truncated pattern mask");
    mask.resize(cells);
    for (std::size_t i = 0; i < cells; ++i) mask[i] = (byte(pos + i / 8) >> (i % 8)) & 1;
    for (std::size_t i = cells; i < mask_bytes * 8; ++i)
      if ((byte(pos + i / 8) >> (i % 8)) & 1) throw FormatError("nonzero padding in pattern mask");
    pos += mask_bytes;
  }
  std::vector<std::uint8_t> raw(cells, 0);
  for (std::size_t i = 0; i < cells; ++i) {
    if (masked && !mask[i]) continue;
    if (pos >= bytes.size()) throw FormatError("truncated pattern cells");
    raw[i] = byte(pos++);
  }
  if (pos != bytes.size()) throw FormatError("trailing bytes after pattern cells");
  return Pattern(sides, std::move(raw), std::move(mask));
}

Labeling::Labeling(LatticeConfig config, std::vector<std::uint8_t> raw)
    : config_(config), raw_(std::move(raw)) {
  if (raw_.size() != config_.vertex_count())
    throw InvalidConfig("labeling has " + std::to_string(raw_.size()) + " cells, expected " +
                        std::to_string(config_.vertex_count()));
  for (auto v : raw_)
    if (v >= config_.q()) throw InvalidConfig("label out of range [1, q]");
}

Labeling Labeling::from_labels(LatticeConfig config, std::span<const int> labels) {
  std::vector<std::uint8_t> raw;
  raw.reserve(labels.size());
  for (int label : labels) {
    if (label < 1 || label > config.q()) throw InvalidConfig("label out of range [1, q]");
    raw.push_back(static_cast<std::uint8_t>(label - 1));
  }
  return Labeling(config, std::move(raw));
}

Labeling Labeling::constant(LatticeConfig config, int label) {
  if (label < 1 || label > config.q()) throw InvalidConfig("label out of range [1, q]");
  return Labeling(config, std::vector<std::uint8_t>(config.vertex_count(), static_cast<std::uint8_t>(label - 1)));
}

Labeling sample_labeling(const LatticeConfig& config, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<std::uint8_t> raw(config.vertex_count());
  const auto q = static_cast<std::uint64_t>(config.q());
  for (auto& cell : raw) cell = static_cast<std::uint8_t>(rng.uniform(q));
  return Labeling(config, std::move(raw));
}

std::vector<std::ptrdiff_t> relative_offsets(const Extent& lattice, const Extent& box) {
  std::vector<std::ptrdiff_t> out;
  out.reserve(box.volume());
  for_each_offset(box, [&](const Vertex& x) { out.push_back(static_cast<std::ptrdiff_t>(linear_offset(lattice, x))); });
  return out;
}

Pattern extract_pattern(const Labeling& labeling, const BoxRegion& region) {
  const LatticeConfig& config = labeling.config();
  if (!region.within(config)) throw OutOfBounds("region lies outside the lattice");
  const auto base = static_cast<std::ptrdiff_t>(config.index_of(region.corner));
  const auto raw = labeling.raw();
  std::vector<std::uint8_t> cells;
  cells.reserve(region.sides.volume());
  for (std::ptrdiff_t off : relative_offsets(config.lattice_extent(), region.sides))
    cells.push_back(raw[static_cast<std::size_t>(base + off)]);
  return Pattern(region.sides, std::move(cells));
}

std::vector<BoxRegion> enumerate_boxes(const LatticeConfig& config, int s) {
  if (s < 1 || s > config.n())
    throw PreconditionError("box side s must satisfy 1 <= s <= n, got " + std::to_string(s));
  std::vector<BoxRegion> boxes;
  boxes.reserve(config.box_count(s));
  const Extent corners = Extent::cube(config.d(), config.n() - s + 1);
  for_each_offset(corners, [&](const Vertex& c) { boxes.push_back(BoxRegion::cube(c, config.d(), s)); });
  return boxes;
}

}  // namespace shotgun
