#pragma once

// Non-identifiability certificates: pairs of distinct labelings with the
// same profile, found by explicit search, plus the exhaustive oracle.

#include <cstdint>
#include <optional>
#include <vector>

#include "shotgun/lattice.hpp"
#include "shotgun/profile.hpp"

namespace shotgun {

/// d = 1 interval swap. The labeling is split as K1 J K2 J' K3 where J lies
/// strictly between B1 and B3 and J' strictly between B4 and B6;
/// `permuted` is K1 J' K2 J K3.
struct SwapCertificate1D {
  BoxRegion b1;
  BoxRegion b3;
  BoxRegion b4;
  BoxRegion b6;
  BoxRegion j;
  BoxRegion j_prime;
  Labeling permuted;
};

/// Label swap: every vertex of v1 carries label 1, every vertex of v2 label
/// 2, and the punctured profiles of the two sets agree.
struct SwapCertificateND {
  std::vector<Vertex> v1;
  std::vector<Vertex> v2;
  Labeling permuted;
};

/// Requires d = 1 and n >= 6r (PreconditionError otherwise). Candidate
/// r-intervals are all r-intervals inside each sixth of the lattice.
std::optional<SwapCertificate1D> spoil_1d(const Labeling& labeling);

/// Variant on eight intervals: the swap runs on I2..I7, and I1, I8 must not
/// be equal up to reversal. The returned labeling is not a reversal of the
/// original. Requires d = 1 and n >= 8r.
std::optional<SwapCertificate1D> spoil_1d_symmetric(const Labeling& labeling);

/// First u in grid_points(sigma, 1) (row-major) whose punctured profile
/// equals that of some w in grid_points(sigma, 2); the first such w is
/// taken. With `symmetric`, pairs whose swap yields an isomorphic labeling
/// are skipped.
std::optional<SwapCertificateND> find_singleton_swap(const Labeling& labeling, bool symmetric = false);

/// Exact search over sets of size 1 and 2, then random sets of size up to
/// `max_size` drawn from CounterRng(seed), until `budget` candidate sets have
/// been evaluated. Every hit is confirmed exactly. Throws PreconditionError
/// if max_size < 1.
std::optional<SwapCertificateND> find_multiset_swap(const Labeling& labeling, int max_size, std::uint64_t budget,
                                                    std::uint64_t seed = 0, bool symmetric = false);

/// Exchanges labels 1 and 2 on v1 and v2. Throws PreconditionError unless
/// sigma = 1 on v1 and sigma = 2 on v2.
Labeling apply_swap(const Labeling& labeling, const std::vector<Vertex>& v1, const std::vector<Vertex>& v2);

/// a != b and shatter(a) == shatter(b). Throws ConfigMismatch.
bool verify_nonidentifiable(const Labeling& a, const Labeling& b);

/// Same, for the rotation/reflection model: a and b are not isomorphic and
/// their canonical profiles agree.
bool verify_nonidentifiable_symmetric(const Labeling& a, const Labeling& b);

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;

/// Enumerates all q^(n^d) labelings. Throws InstanceTooLarge above `cap` and
/// ConfigMismatch if the labeling belongs to another config.
bool brute_force_identifiable(const LatticeConfig& config, const Labeling& labeling,
                              std::uint64_t cap = kDefaultEnumerationCap);

/// First labeling in enumeration order (raw labels read as a base-q number,
/// last cell least significant) that differs from `labeling` but has the
/// same profile. Same errors as brute_force_identifiable.
std::optional<Labeling> brute_force_twin(const LatticeConfig& config, const Labeling& labeling,
                                         std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace shotgun
