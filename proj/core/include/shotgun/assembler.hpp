#pragma once

// Reconstruction of a labeling from its empirical profile.
//
// The assembler reads nothing but a Profile. It determines a cell only when
// every labeling with that profile (and with the cells already determined)
// must carry the same value there, so a successful run always returns the
// ground truth (oriented profiles) or an isomorphic copy of it (canonical
// profiles). The three phases are:
//
//   1. corner   - an (r-1)-pattern that occurs at exactly one sub-box offset
//                 of the shards can only sit at the matching corner of the
//                 lattice; it is anchored there and grown through the 2r-box
//                 at that corner;
//   2. percolate - every fully determined (r-1)-box whose pattern is unique
//                 among the shards pins down each r-box that contains it;
//   3. finish   - for an r-box with some determined cells, every shard that
//                 agrees with those cells is a candidate; cells on which all
//                 candidates agree are determined.
//
// Phases 2 and 3 alternate until neither makes progress.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "shotgun/errors.hpp"
#include "shotgun/lattice.hpp"
#include "shotgun/profile.hpp"
#include "shotgun/symmetry.hpp"

namespace shotgun {

enum class FailureReason : std::uint8_t { kNone, kCornerNotFound, kStalled, kConflict };

std::string_view to_string(FailureReason reason);

class AssemblyError : public Error {
 public:
  AssemblyError(FailureReason reason, const std::string& what) : Error(what), reason_(reason) {}
  FailureReason reason() const { return reason_; }

 private:
  FailureReason reason_;
};

/// A labeling under construction: labels plus a determined mask.
class PartialLabeling {
 public:
  explicit PartialLabeling(LatticeConfig config);

  const LatticeConfig& config() const { return config_; }

  bool is_determined(std::size_t index) const { return determined_[index] != 0; }
  bool is_determined(const Vertex& v) const { return is_determined(config_.index_of(v)); }
  /// 1-based label, or 0 when undetermined.
  int label_at(std::size_t index) const { return is_determined(index) ? raw_[index] + 1 : 0; }
  int label(const Vertex& v) const { return label_at(config_.index_of(v)); }
  std::uint8_t raw_at(std::size_t index) const { return raw_[index]; }

  std::size_t determined_count() const { return determined_count_; }
  bool complete() const { return determined_count_ == raw_.size(); }
  std::span<const std::uint8_t> determined_mask() const { return determined_; }

  /// Writes a 0-based label. Returns true if the cell was newly determined;
  /// throws AssemblyError(kConflict) if it was determined with another value.
  bool assign(std::size_t index, std::uint8_t raw);

  std::optional<Labeling> to_labeling() const;

 private:
  LatticeConfig config_;
  std::vector<std::uint8_t> raw_;
  std::vector<std::uint8_t> determined_;
  std::size_t determined_count_ = 0;
};

/// Index from (r-1)-patterns to the shards containing them, per corner
/// offset e in {0,1}^d (offsets numbered row-major, first axis most
/// significant). For canonical profiles every orientation of every shard is
/// indexed, so the shard lists range over oriented "variants".
class SubboxIndex {
 public:
  static constexpr int kMaxOffsets = 1 << kMaxDim;

  /// One oriented r-box pattern that may be placed in the lattice.
  struct Variant {
    std::vector<std::uint8_t> cells;  // raw labels, row-major
    std::uint64_t multiplicity = 0;   // of the underlying profile shard
    std::uint32_t shard = 0;          // position of the shard in profile order
    std::uint32_t transform = 0;      // index into hyperoctahedral_group(d)
  };

  struct Placement {
    std::uint32_t variant;
    std::uint8_t offset;
  };

  struct Entry {
    std::vector<Placement> placements;
    std::array<std::uint64_t, kMaxOffsets> totals{};
  };

  explicit SubboxIndex(const Profile& profile);

  const LatticeConfig& config() const { return config_; }
  ProfileKind kind() const { return kind_; }
  int offset_count() const { return 1 << config_.d(); }
  Extent subbox_extent() const { return Extent::cube(config_.d(), config_.r() - 1); }
  /// Corner offset e as a vector in {0,1}^d.
  Vertex offset_vector(int e) const;

  const std::vector<Variant>& variants() const { return variants_; }
  const std::unordered_map<std::string, Entry>& entries() const { return entries_; }
  /// nullptr if the pattern never occurs.
  const Entry* find(std::string_view key) const;

  /// Row-major indices, inside an r-box, of the cells of its sub-box at e.
  std::span<const std::uint32_t> subbox_cells(int e) const { return subbox_cells_[static_cast<std::size_t>(e)]; }

  /// Variants whose cell j carries raw label v.
  std::span<const std::uint32_t> variants_with(std::size_t cell, std::uint8_t raw) const;

 private:
  LatticeConfig config_;
  ProfileKind kind_;
  std::vector<Variant> variants_;
  std::unordered_map<std::string, Entry> entries_;
  std::array<std::vector<std::uint32_t>, kMaxOffsets> subbox_cells_;
  std::vector<std::vector<std::uint32_t>> by_cell_value_;  // [cell * q + value]
};

SubboxIndex build_subbox_index(const Profile& profile);

/// Observable uniqueness: the pattern occurs at most once at every corner
/// offset and at least once overall. Over a canonical profile the pattern
/// must additionally be free of automorphisms. Throws PreconditionError
/// unless the pattern is a full (r-1,...,r-1) pattern.
bool is_unique_subbox(const Pattern& pattern, const SubboxIndex& index);

enum class WorklistOrder : std::uint8_t { kFifo, kLifo, kRandom };

struct PercolationStats {
  std::uint64_t explored = 0;            // (r-1)-boxes popped from the worklist
  std::uint64_t pivots = 0;              // of which passed the uniqueness test
  std::uint64_t automorphic_pivots = 0;  // pivots whose pattern has an automorphism
};

/// Anchors every corner whose (r-1)-pattern is identified by the index and
/// grows it through the 2r-box at that corner. Throws AssemblyError with
/// kCornerNotFound (no corner identified) or kStalled (no corner 2r-box
/// completed).
PartialLabeling step1_corner(const SubboxIndex& index);

/// Uses the fully determined (r-1)-box `pivot` to pin down each r-box that
/// contains it, provided the pivot is unique. When `confine` is given only
/// r-boxes inside it are written. Returns the number of newly determined
/// cells. Throws PreconditionError if the pivot is not a fully determined
/// (r-1)-box inside the lattice.
std::size_t extend_from_unique(PartialLabeling& partial, const BoxRegion& pivot, const SubboxIndex& index,
                               const BoxRegion* confine = nullptr);

/// Worklist closure of extend_from_unique over all fully determined
/// (r-1)-boxes. The final determined set does not depend on `order`.
PartialLabeling step2_percolate(PartialLabeling partial, const SubboxIndex& index,
                                WorklistOrder order = WorklistOrder::kFifo, std::uint64_t seed = 0,
                                PercolationStats* stats = nullptr);

/// Candidate-agreement completion, iterated to a fixpoint. `filled`
/// receives the number of cells determined by this call.
PartialLabeling step3_finish(PartialLabeling partial, const SubboxIndex& index, std::uint64_t* filled = nullptr);

struct AssemblyReport {
  bool success = false;
  std::array<std::uint64_t, 3> determined_after_step{};
  std::uint64_t step2_explored_boxes = 0;
  std::uint64_t step3_filled = 0;
  FailureReason failure_reason = FailureReason::kNone;
  std::uint64_t automorphic_pivots = 0;
};

struct AssemblyResult {
  std::optional<Labeling> labeling;
  AssemblyReport report;
};

/// Full recovery from an oriented profile. Throws PreconditionError for a
/// canonical profile.
AssemblyResult assemble(const Profile& profile);

/// Recovery up to rotation/reflection from a canonical profile.
AssemblyResult assemble_symmetric(const Profile& profile);

struct OpennessStats {
  std::uint64_t open_boxes = 0;
  std::uint64_t total_boxes = 0;
  std::uint64_t closed_component_count = 0;
  /// Largest l-infinity extent, in vertices, of a weakly connected closed
  /// component (0 when every box is open).
  std::uint64_t max_closed_component_diameter = 0;

  double open_fraction() const {
    return total_boxes == 0 ? 1.0 : static_cast<double>(open_boxes) / static_cast<double>(total_boxes);
  }
};

/// Ground-truth diagnostic over the shifted partitions of Lambda_n into
/// 2r-boxes: a box is open when all (r-1)-boxes inside it are unique in the
/// whole lattice (and, if `symmetric`, unique up to rotation/reflection and
/// free of automorphisms). Closed boxes at l-infinity distance <= 4r are
/// joined into components.
OpennessStats openness_stats(const Labeling& labeling, bool symmetric = false);

/// Corners of the 2r-box partition family along one axis.
std::vector<int> partition_starts(int n, int r);

}  // namespace shotgun
