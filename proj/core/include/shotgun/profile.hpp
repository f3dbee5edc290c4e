#pragma once

// The anonymous observation model: the multiset of r-box patterns of a
// labeling, and punctured profiles around label-k grid points.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "shotgun/lattice.hpp"

namespace shotgun {

enum class ProfileKind : std::uint8_t {
  kOriented,   // shards recorded as observed
  kCanonical,  // each shard replaced by its rotation/reflection canonical form
};

/// Multiset of encoded r-box patterns. Keys are ordered by encoding bytes.
class Profile {
 public:
  using Counts = std::map<std::string, std::uint64_t>;

  /// Validates: every key decodes to a full (r,...,r) pattern with labels in
  /// [1, q], multiplicities are positive, and they sum to (n-r+1)^d.
  Profile(LatticeConfig config, Counts counts, ProfileKind kind = ProfileKind::kOriented);

  const LatticeConfig& config() const { return config_; }
  const Counts& counts() const { return counts_; }
  ProfileKind kind() const { return kind_; }
  std::uint64_t total() const;
  std::size_t distinct() const { return counts_.size(); }

  friend bool operator==(const Profile& a, const Profile& b) {
    return a.config_ == b.config_ && a.kind_ == b.kind_ && a.counts_ == b.counts_;
  }

 private:
  LatticeConfig config_;
  Counts counts_;
  ProfileKind kind_;
};

/// counts[p] = number of r-boxes B with sigma|_B = p.
Profile shatter(const Labeling& labeling);

/// Exact multiset equality. Throws ConfigMismatch if the configs differ.
bool profiles_equal(const Profile& a, const Profile& b);

/// One tally per relative offset o of the punctured vertex inside its r-box
/// (row-major over {0..r-1}^d). Component j counts the r-box with corner
/// u - o_j, with the cell at u masked out, over u in the chosen set.
struct PuncturedProfile {
  std::vector<std::map<std::string, std::uint64_t>> components;

  std::uint64_t component_total(std::size_t j) const;

  friend bool operator==(const PuncturedProfile&, const PuncturedProfile&) = default;
};

/// Lambda'_n = {u : r <= u_i <= n - r}.
bool in_punctured_domain(const LatticeConfig& config, const Vertex& u);

/// Throws PreconditionError if some u lies outside Lambda'_n.
PuncturedProfile punctured_profile(const Labeling& labeling, const std::vector<Vertex>& points);

/// Vertices of Lambda'_n carrying label k whose coordinates are all
/// multiples of 2r, in row-major order. Distinct points are at l-infinity
/// distance >= 2r, so their r-box neighbourhoods are disjoint.
std::vector<Vertex> grid_points(const Labeling& labeling, int k);

}  // namespace shotgun
