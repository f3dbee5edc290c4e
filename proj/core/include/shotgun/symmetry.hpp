#pragma once

// Rotations and reflections of d-dimensional boxes (the hyperoctahedral
// group), canonical forms of patterns under that group, and the symmetric
// observation model in which each shard is known only up to isomorphism.

#include <array>
#include <cstdint>
#include <vector>

#include "shotgun/lattice.hpp"
#include "shotgun/profile.hpp"

namespace shotgun {

/// Signed axis permutation acting on positions of a cube of side k:
///   t(x)_i = flip_i ? (k - 1 - x_{perm_i}) : x_{perm_i}.
/// With this convention the 2x2 pattern [[1,2],[3,4]] under the quarter turn
/// perm = (1, 0), flips = (0, 1) becomes [[3,1],[4,2]].
class BoxTransform {
 public:
  static BoxTransform identity(int dim);
  /// perm must be a permutation of 0..dim-1; flips has one entry per axis.
  BoxTransform(int dim, std::array<std::uint8_t, kMaxDim> perm, std::array<bool, kMaxDim> flips);

  int dim() const { return dim_; }
  int perm(int i) const { return perm_[static_cast<std::size_t>(i)]; }
  bool flip(int i) const { return flips_[static_cast<std::size_t>(i)]; }
  bool is_identity() const;

  /// Image of position x inside a box with extent `e` (the image box has
  /// extent e' with e'_i = e_{perm_i}).
  Vertex apply(const Vertex& x, const Extent& e) const;
  Extent image_extent(const Extent& e) const;

  /// (this o inner)(x) = this(inner(x)).
  BoxTransform compose(const BoxTransform& inner) const;
  BoxTransform inverse() const;

  friend bool operator==(const BoxTransform&, const BoxTransform&) = default;

 private:
  int dim_ = 0;
  std::array<std::uint8_t, kMaxDim> perm_{};
  std::array<bool, kMaxDim> flips_{};
};

/// All 2^d * d! elements; the identity comes first, the rest follow in
/// lexicographic (permutation, flip mask) order.
const std::vector<BoxTransform>& hyperoctahedral_group(int dim);

/// Moves the cell at x to t(x). Throws PreconditionError unless t's
/// dimension matches and the sides are invariant under t's permutation.
Pattern transform_pattern(const Pattern& pattern, const BoxTransform& t);

/// Orbit element with the lexicographically smallest encoding.
Pattern canonical_form(const Pattern& pattern);

/// True iff some non-identity transform fixes the pattern.
bool has_automorphism(const Pattern& pattern);

/// Global transform of the cubic lattice: result(t(v)) = labeling(v).
Labeling transform_labeling(const Labeling& labeling, const BoxTransform& t);

/// True iff b = a composed with one of the global box transforms.
/// Throws ConfigMismatch if the configs differ.
bool equal_up_to_isomorphism(const Labeling& a, const Labeling& b);

/// Like shatter, but each shard is replaced by its canonical form.
Profile shatter_symmetric(const Labeling& labeling);

}  // namespace shotgun
