#pragma once

// Coordinates, problem parameters, labelings and labeled box patterns.
//
// Conventions used everywhere in the library:
//   * coordinates are 0-based, Lambda_n = {0..n-1}^d;
//   * row-major order, last coordinate varies fastest;
//   * labels are 1..q at the API surface and stored as 0..q-1 ("raw").

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace shotgun {

inline constexpr int kMaxDim = 4;
inline constexpr int kMaxAlphabet = 256;

/// A point of Z^d; coordinates past the dimension are kept at zero.
struct Vertex {
  std::array<std::int32_t, kMaxDim> coords{};

  constexpr std::int32_t& operator[](int i) { return coords[static_cast<std::size_t>(i)]; }
  constexpr std::int32_t operator[](int i) const { return coords[static_cast<std::size_t>(i)]; }

  friend constexpr auto operator<=>(const Vertex&, const Vertex&) = default;
};

/// Side lengths of a d-dimensional box.
struct Extent {
  int dim = 0;
  std::array<std::int32_t, kMaxDim> sides{};

  static Extent cube(int dim, int side);

  constexpr std::int32_t operator[](int i) const { return sides[static_cast<std::size_t>(i)]; }
  std::size_t volume() const;
  bool is_cube() const;

  friend constexpr bool operator==(const Extent&, const Extent&) = default;
};

/// Row-major linear offset of `x` inside a box of extent `e`.
std::size_t linear_offset(const Extent& e, const Vertex& x);
/// Inverse of linear_offset.
Vertex offset_vertex(const Extent& e, std::size_t index);

/// Visit every offset of `e` in row-major order.
template <typename F>
void for_each_offset(const Extent& e, F&& f) {
  if (e.volume() == 0) return;
  Vertex x;
  for (;;) {
    f(static_cast<const Vertex&>(x));
    int i = e.dim - 1;
    while (i >= 0) {
      if (++x[i] < e[i]) break;
      x[i] = 0;
      --i;
    }
    if (i < 0) return;
  }
}

/// Problem parameters (d, n, q, r). Always valid once constructed.
class LatticeConfig {
 public:
  /// Throws InvalidConfig unless 1 <= d <= 4, 2 <= q <= 256, 2 <= r <= n,
  /// n <= 65535 and n^d fits in memory-addressable range.
  static LatticeConfig make(int d, int n, int q, int r);

  int d() const { return d_; }
  int n() const { return n_; }
  int q() const { return q_; }
  int r() const { return r_; }

  std::size_t vertex_count() const { return vertex_count_; }
  /// (n - r + 1)^d
  std::size_t shard_count() const { return box_count(r_); }
  /// (n - s + 1)^d; 0 when s > n.
  std::size_t box_count(int s) const;

  Extent lattice_extent() const { return Extent::cube(d_, n_); }
  Extent shard_extent() const { return Extent::cube(d_, r_); }

  bool contains(const Vertex& v) const;
  std::size_t index_of(const Vertex& v) const;
  Vertex vertex_at(std::size_t index) const;

  /// Same lattice, different observation size.
  LatticeConfig with_r(int r) const { return make(d_, n_, q_, r); }

  friend bool operator==(const LatticeConfig&, const LatticeConfig&) = default;

 private:
  LatticeConfig(int d, int n, int q, int r, std::size_t vertex_count)
      : d_(d), n_(n), q_(q), r_(r), vertex_count_(vertex_count) {}

  int d_;
  int n_;
  int q_;
  int r_;
  std::size_t vertex_count_;
};

/// Axis-aligned box `corner + [0, sides)`.
struct BoxRegion {
  Vertex corner;
  Extent sides;

  static BoxRegion cube(const Vertex& corner, int dim, int side) {
    return {corner, Extent::cube(dim, side)};
  }

  bool contains(const Vertex& v) const;
  /// True iff the box lies inside {0..n-1}^d.
  bool within(const LatticeConfig& config) const;

  friend bool operator==(const BoxRegion&, const BoxRegion&) = default;
};

/// A labeled box shape, re-based to the origin. A pattern may carry a
/// presence mask; absent cells are ignored by equality and encoding.
class Pattern {
 public:
  Pattern() = default;
  /// `raw` holds 0-based labels in row-major order; `mask` is empty for a
  /// full pattern or one byte (0/1) per cell.
  Pattern(Extent sides, std::vector<std::uint8_t> raw, std::vector<std::uint8_t> mask = {});

  /// Build from 1-based labels.
  static Pattern from_labels(Extent sides, std::span<const int> labels);

  const Extent& sides() const { return sides_; }
  int dim() const { return sides_.dim; }
  std::size_t size() const { return raw_.size(); }

  bool is_masked() const { return !mask_.empty(); }
  bool present(std::size_t i) const { return mask_.empty() || mask_[i] != 0; }
  /// 1-based label; 0 for an absent cell.
  int label(std::size_t i) const { return present(i) ? raw_[i] + 1 : 0; }
  int label(const Vertex& x) const { return label(linear_offset(sides_, x)); }
  std::uint8_t raw(std::size_t i) const { return raw_[i]; }

  std::span<const std::uint8_t> raw_cells() const { return raw_; }
  std::span<const std::uint8_t> mask() const { return mask_; }

  /// Sub-pattern of `region` (given in pattern-local coordinates).
  Pattern sub_pattern(const BoxRegion& region) const;

  friend bool operator==(const Pattern& a, const Pattern& b);

 private:
  Extent sides_;
  std::vector<std::uint8_t> raw_;
  std::vector<std::uint8_t> mask_;
};

/// Byte encoding of a pattern. Layout: 1 byte d; d side lengths as u16
/// little-endian; a row-major presence bitmap (LSB-first, zero padded) if
/// the pattern is masked; then label-1 for every present cell.
std::string encode_pattern(const Pattern& pattern);

/// Inverse of encode_pattern. `masked` must match the encoder's input since
/// the mask flag is not stored in the byte string. Throws FormatError.
Pattern decode_pattern(std::string_view bytes, bool masked = false);

/// A full assignment of labels to Lambda_n.
class Labeling {
 public:
  /// `raw` are 0-based labels, row-major; throws InvalidConfig on size or
  /// range violations.
  Labeling(LatticeConfig config, std::vector<std::uint8_t> raw);

  static Labeling from_labels(LatticeConfig config, std::span<const int> labels);
  static Labeling constant(LatticeConfig config, int label);

  const LatticeConfig& config() const { return config_; }
  std::size_t size() const { return raw_.size(); }

  int label(const Vertex& v) const { return raw_[config_.index_of(v)] + 1; }
  int label_at(std::size_t index) const { return raw_[index] + 1; }
  std::span<const std::uint8_t> raw() const { return raw_; }

  /// Same labels, different observation size r.
  Labeling with_r(int r) const { return Labeling(config_.with_r(r), raw_); }

  friend bool operator==(const Labeling& a, const Labeling& b) {
    return a.config_ == b.config_ && a.raw_ == b.raw_;
  }

 private:
  LatticeConfig config_;
  std::vector<std::uint8_t> raw_;
};

/// i.i.d. uniform labels; cell i (row-major) takes the i-th draw of
/// CounterRng(seed) reduced to [1, q].
Labeling sample_labeling(const LatticeConfig& config, std::uint64_t seed);

/// Labels of `region`, re-based to the origin. Throws OutOfBounds.
Pattern extract_pattern(const Labeling& labeling, const BoxRegion& region);

/// All s-boxes of Lambda_n in row-major corner order. Throws
/// PreconditionError unless 1 <= s <= n.
std::vector<BoxRegion> enumerate_boxes(const LatticeConfig& config, int s);

/// Row-major linear offsets (relative to the box corner) of the cells of a
/// box with extent `box` inside a lattice with extent `lattice`.
std::vector<std::ptrdiff_t> relative_offsets(const Extent& lattice, const Extent& box);

}  // namespace shotgun
