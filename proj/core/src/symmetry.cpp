#include "shotgun/symmetry.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

#include "shotgun/errors.hpp"

namespace shotgun {

BoxTransform BoxTransform::identity(int dim) {
  std::array<std::uint8_t, kMaxDim> perm{};
  for (int i = 0; i < kMaxDim; ++i) perm[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
  return BoxTransform(dim, perm, {});
}

BoxTransform::BoxTransform(int dim, std::array<std::uint8_t, kMaxDim> perm, std::array<bool, kMaxDim> flips)
    : dim_(dim), perm_(perm), flips_(flips) {
  if (dim < 1 || dim > kMaxDim) throw PreconditionError("transform dimension must be in [1, 4]");
  std::array<bool, kMaxDim> seen{};
  for (int i = 0; i < dim; ++i) {
    const int p = perm_[static_cast<std::size_t>(i)];
    if (p >= dim || seen[static_cast<std::size_t>(p)]) throw PreconditionError("transform axes are not a permutation");
    seen[static_cast<std::size_t>(p)] = true;
  }
  // Unused slots are normalised so that equality only sees the live axes.
  for (int i = dim; i < kMaxDim; ++i) {
    perm_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
    flips_[static_cast<std::size_t>(i)] = false;
  }
}

bool BoxTransform::is_identity() const {
  for (int i = 0; i < dim_; ++i)
    if (perm(i) != i || flip(i)) return false;
  return true;
}

Extent BoxTransform::image_extent(const Extent& e) const {
  Extent out;
  out.dim = e.dim;
  for (int i = 0; i < dim_; ++i) out.sides[static_cast<std::size_t>(i)] = e[perm(i)];
  return out;
}

Vertex BoxTransform::apply(const Vertex& x, const Extent& e) const {
  Vertex y;
  for (int i = 0; i < dim_; ++i) {
    const int src = perm(i);
    y[i] = flip(i) ? e[src] - 1 - x[src] : x[src];
  }
  return y;
}

BoxTransform BoxTransform::compose(const BoxTransform& inner) const {
  if (inner.dim_ != dim_) throw PreconditionError("composing transforms of different dimension");
  std::array<std::uint8_t, kMaxDim> axes{};
  std::array<bool, kMaxDim> signs{};
  for (int i = 0; i < dim_; ++i) {
    const int mid = perm(i);
    axes[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(inner.perm(mid));
    signs[static_cast<std::size_t>(i)] = flip(i) != inner.flip(mid);
  }
  return BoxTransform(dim_, axes, signs);
}

BoxTransform BoxTransform::inverse() const {
  std::array<std::uint8_t, kMaxDim> perm{};
  std::array<bool, kMaxDim> flips{};
  for (int i = 0; i < dim_; ++i) {
    perm[static_cast<std::size_t>(perm_[static_cast<std::size_t>(i)])] = static_cast<std::uint8_t>(i);
    flips[static_cast<std::size_t>(perm_[static_cast<std::size_t>(i)])] = flip(i);
  }
  return BoxTransform(dim_, perm, flips);
}

namespace {

std::vector<BoxTransform> build_group(int dim) {
  std::vector<BoxTransform> group;
  std::array<std::uint8_t, kMaxDim> perm{};
  std::iota(perm.begin(), perm.begin() + dim, std::uint8_t{0});
  do {
    for (unsigned mask = 0; mask < (1u << dim); ++mask) {
      std::array<bool, kMaxDim> flips{};
      for (int i = 0; i < dim; ++i) flips[static_cast<std::size_t>(i)] = (mask >> (dim - 1 - i)) & 1u;
      group.emplace_back(dim, perm, flips);
    }
  } while (std::next_permutation(perm.begin(), perm.begin() + dim));
  return group;
}

void require_compatible(const Extent& e, const BoxTransform& t) {
  if (t.dim() != e.dim) throw PreconditionError("transform and pattern dimensions differ");
  for (int i = 0; i < e.dim; ++i)
    if (e[t.perm(i)] != e[i]) throw PreconditionError("pattern sides are not invariant under the transform");
}

}  // namespace

const std::vector<BoxTransform>& hyperoctahedral_group(int dim) {
  static std::once_flag once;
  static std::array<std::vector<BoxTransform>, kMaxDim + 1> groups;
  std::call_once(once, [] {
    for (int d = 1; d <= kMaxDim; ++d) groups[static_cast<std::size_t>(d)] = build_group(d);
  });
  if (dim < 1 || dim > kMaxDim) throw PreconditionError("group dimension must be in [1, 4]");
  return groups[static_cast<std::size_t>(dim)];
}

Pattern transform_pattern(const Pattern& pattern, const BoxTransform& t) {
  const Extent& e = pattern.sides();
  require_compatible(e, t);
  std::vector<std::uint8_t> raw(pattern.size());
  std::vector<std::uint8_t> mask(pattern.is_masked() ? pattern.size() : 0);
  std::size_t i = 0;
  for_each_offset(e, [&](const Vertex& x) {
    const std::size_t j = linear_offset(e, t.apply(x, e));
    raw[j] = pattern.raw(i);
    if (pattern.is_masked()) mask[j] = pattern.present(i) ? 1 : 0;
    ++i;
  });
  return Pattern(e, std::move(raw), std::move(mask));
}

Pattern canonical_form(const Pattern& pattern) {
  if (!pattern.sides().is_cube()) throw PreconditionError("canonical form needs a cubic pattern");
  Pattern best = pattern;
  std::string best_key = encode_pattern(pattern);
  for (const BoxTransform& t : hyperoctahedral_group(pattern.dim())) {
    Pattern image = transform_pattern(pattern, t);
    std::string key = encode_pattern(image);
    if (key < best_key) {
      best_key = std::move(key);
      best = std::move(image);
    }
  }
  return best;
}

bool has_automorphism(const Pattern& pattern) {
  if (!pattern.sides().is_cube()) throw PreconditionError("automorphism test needs a cubic pattern");
  for (const BoxTransform& t : hyperoctahedral_group(pattern.dim()))
    if (!t.is_identity() && transform_pattern(pattern, t) == pattern) return true;
  return false;
}

Labeling transform_labeling(const Labeling& labeling, const BoxTransform& t) {
  const LatticeConfig& config = labeling.config();
  const Extent e = config.lattice_extent();
  require_compatible(e, t);
  std::vector<std::uint8_t> raw(labeling.size());
  const auto src = labeling.raw();
  std::size_t i = 0;
  for_each_offset(e, [&](const Vertex& x) { raw[linear_offset(e, t.apply(x, e))] = src[i++]; });
  return Labeling(config, std::move(raw));
}

bool equal_up_to_isomorphism(const Labeling& a, const Labeling& b) {
  if (!(a.config() == b.config())) throw ConfigMismatch("labelings come from different configurations");
  for (const BoxTransform& t : hyperoctahedral_group(a.config().d()))
    if (transform_labeling(a, t) == b) return true;
  return false;
}

Profile shatter_symmetric(const Labeling& labeling) {
  Profile::Counts counts;
  const Profile oriented = shatter(labeling);
  for (const auto& [key, count] : oriented.counts())
    counts[encode_pattern(canonical_form(decode_pattern(key)))] += count;
  return Profile(labeling.config(), std::move(counts), ProfileKind::kCanonical);
}

}  // namespace shotgun
