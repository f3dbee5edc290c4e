#include "shotgun/spoiler.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <string_view>
#include <unordered_map>

#include "shotgun/errors.hpp"
#include "shotgun/rng.hpp"
#include "shotgun/symmetry.hpp"

namespace shotgun {

namespace {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

Labeling from_raw(const LatticeConfig& config, std::string_view raw) {
  return Labeling(config, std::vector<std::uint8_t>(raw.begin(), raw.end()));
}

std::optional<SwapCertificate1D> spoil_intervals(const Labeling& labeling, int parts, bool symmetric) {
  const LatticeConfig& config = labeling.config();
  if (config.d() != 1) throw PreconditionError("interval swap requires d = 1");
  const int n = config.n();
  const int r = config.r();
  if (n < parts * r) throw PreconditionError("interval swap requires n >= " + std::to_string(parts) + "r");
  const int m = n / parts;
  const auto span = labeling.raw();
  const std::string_view raw(reinterpret_cast<const char*>(span.data()), span.size());
  const int first = symmetric ? 1 : 0;  // I_1 of the swap is the (first+1)-th part
  auto part_start = [&](int j) { return (first + j - 1) * m; };

  if (symmetric) {
    const std::string_view head = raw.substr(0, static_cast<std::size_t>(m));
    const std::string_view tail = raw.substr(static_cast<std::size_t>(7 * m), static_cast<std::size_t>(m));
    const std::string reversed(tail.rbegin(), tail.rend());
    if (head == tail || head == reversed) return std::nullopt;
  }

  // All pairs (a, b) of r-intervals, a in part ja and b in part jb, with
  // equal labels, ordered by a then b.
  auto matching_pairs = [&](int ja, int jb) {
    std::unordered_map<std::string_view, std::vector<int>> by_pattern;
    for (int b = part_start(jb); b <= part_start(jb) + m - r; ++b)
      by_pattern[raw.substr(static_cast<std::size_t>(b), static_cast<std::size_t>(r))].push_back(b);
    std::vector<std::pair<int, int>> pairs;
    for (int a = part_start(ja); a <= part_start(ja) + m - r; ++a) {
      const auto it = by_pattern.find(raw.substr(static_cast<std::size_t>(a), static_cast<std::size_t>(r)));
      if (it == by_pattern.end()) continue;
      for (int b : it->second) pairs.emplace_back(a, b);
    }
    return pairs;
  };

  const auto right = matching_pairs(3, 6);
  if (right.empty()) return std::nullopt;
  const auto [b3, b6] = right.front();

  for (const auto& [b1, b4] : matching_pairs(1, 4)) {
    // J and J' start right after B1 and B4 and are at least m long.
    const std::string_view j_head = raw.substr(static_cast<std::size_t>(b1 + r), static_cast<std::size_t>(m));
    const std::string_view jp_head = raw.substr(static_cast<std::size_t>(b4 + r), static_cast<std::size_t>(m));
    if (j_head == jp_head) continue;

    auto piece = [&](int from, int to) { return raw.substr(static_cast<std::size_t>(from), static_cast<std::size_t>(to - from)); };
    std::string permuted;
    permuted.reserve(raw.size());
    permuted.append(piece(0, b1 + r));
    permuted.append(piece(b4 + r, b6));
    permuted.append(piece(b3, b4 + r));
    permuted.append(piece(b1 + r, b3));
    permuted.append(piece(b6, n));

    SwapCertificate1D cert{BoxRegion::cube(Vertex{{b1}}, 1, r),
                           BoxRegion::cube(Vertex{{b3}}, 1, r),
                           BoxRegion::cube(Vertex{{b4}}, 1, r),
                           BoxRegion::cube(Vertex{{b6}}, 1, r),
                           BoxRegion::cube(Vertex{{b1 + r}}, 1, b3 - b1 - r),
                           BoxRegion::cube(Vertex{{b4 + r}}, 1, b6 - b4 - r),
                           from_raw(config, permuted)};
    const bool ok = symmetric ? verify_nonidentifiable_symmetric(labeling, cert.permuted)
                              : verify_nonidentifiable(labeling, cert.permuted);
    if (ok) return cert;
  }
  return std::nullopt;
}

// Encodings of the r^d punctured r-boxes around u, one per relative offset.
std::vector<std::string> punctured_keys(const Labeling& labeling, const Vertex& u) {
  const PuncturedProfile single = punctured_profile(labeling, {u});
  std::vector<std::string> keys;
  keys.reserve(single.components.size());
  for (const auto& component : single.components) keys.push_back(component.begin()->first);
  return keys;
}

struct GridSide {
  std::vector<Vertex> points;
  std::vector<std::vector<std::string>> keys;
  std::vector<std::vector<std::uint64_t>> hashes;  // per point, per component
};

GridSide grid_side(const Labeling& labeling, int k) {
  GridSide side;
  side.points = grid_points(labeling, k);
  for (const Vertex& u : side.points) {
    side.keys.push_back(punctured_keys(labeling, u));
    std::vector<std::uint64_t> h;
    for (std::size_t j = 0; j < side.keys.back().size(); ++j)
      h.push_back(mix64(fnv1a(side.keys.back()[j]) + j * kGoldenGamma));
    side.hashes.push_back(std::move(h));
  }
  return side;
}

// Order-independent hash of the punctured profile of a set of grid points.
std::uint64_t set_hash(const GridSide& side, std::span<const std::uint32_t> members) {
  std::uint64_t total = 0;
  const std::size_t components = side.hashes.empty() ? 0 : side.hashes.front().size();
  for (std::size_t j = 0; j < components; ++j) {
    std::uint64_t sum = 0;
    for (std::uint32_t i : members) sum += side.hashes[i][j];
    total += mix64(sum ^ (j * kGoldenGamma));
  }
  return total;
}

std::optional<SwapCertificateND> confirm(const Labeling& labeling, const GridSide& ones, const GridSide& twos,
                                         std::span<const std::uint32_t> u, std::span<const std::uint32_t> w,
                                         bool symmetric) {
  std::vector<Vertex> v1;
  std::vector<Vertex> v2;
  for (std::uint32_t i : u) v1.push_back(ones.points[i]);
  for (std::uint32_t i : w) v2.push_back(twos.points[i]);
  std::sort(v1.begin(), v1.end());
  std::sort(v2.begin(), v2.end());
  if (!(punctured_profile(labeling, v1) == punctured_profile(labeling, v2))) return std::nullopt;
  Labeling permuted = apply_swap(labeling, v1, v2);
  const bool ok = symmetric ? verify_nonidentifiable_symmetric(labeling, permuted)
                            : verify_nonidentifiable(labeling, permuted);
  if (!ok) return std::nullopt;
  return SwapCertificateND{std::move(v1), std::move(v2), std::move(permuted)};
}

std::optional<SwapCertificateND> singleton_pass(const Labeling& labeling, const GridSide& ones, const GridSide& twos,
                                                bool symmetric) {
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_hash;
  for (std::uint32_t i = 0; i < twos.points.size(); ++i) by_hash[set_hash(twos, {&i, 1})].push_back(i);
  for (std::uint32_t i = 0; i < ones.points.size(); ++i) {
    const auto it = by_hash.find(set_hash(ones, {&i, 1}));
    if (it == by_hash.end()) continue;
    for (std::uint32_t w : it->second) {
      if (ones.keys[i] != twos.keys[w]) continue;
      if (auto cert = confirm(labeling, ones, twos, {&i, 1}, {&w, 1}, symmetric)) return cert;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<SwapCertificate1D> spoil_1d(const Labeling& labeling) { return spoil_intervals(labeling, 6, false); }

std::optional<SwapCertificate1D> spoil_1d_symmetric(const Labeling& labeling) {
  return spoil_intervals(labeling, 8, true);
}

std::optional<SwapCertificateND> find_singleton_swap(const Labeling& labeling, bool symmetric) {
  const GridSide ones = grid_side(labeling, 1);
  const GridSide twos = grid_side(labeling, 2);
  return singleton_pass(labeling, ones, twos, symmetric);
}

std::optional<SwapCertificateND> find_multiset_swap(const Labeling& labeling, int max_size, std::uint64_t budget,
                                                    std::uint64_t seed, bool symmetric) {
  if (max_size < 1) throw PreconditionError("max_size must be at least 1");
  const GridSide ones = grid_side(labeling, 1);
  const GridSide twos = grid_side(labeling, 2);
  if (auto cert = singleton_pass(labeling, ones, twos, symmetric)) return cert;
  const auto n1 = static_cast<std::uint32_t>(ones.points.size());
  const auto n2 = static_cast<std::uint32_t>(twos.points.size());
  if (max_size < 2 || n1 < 2 || n2 < 2) return std::nullopt;

  std::uint64_t spent = 0;
  {
    std::unordered_map<std::uint64_t, std::array<std::uint32_t, 2>> first_pair;
    for (std::uint32_t a = 0; a < n1 && spent < budget; ++a)
      for (std::uint32_t b = a + 1; b < n1 && spent < budget; ++b, ++spent) {
        const std::array<std::uint32_t, 2> u{a, b};
        first_pair.emplace(set_hash(ones, u), u);
      }
    for (std::uint32_t a = 0; a < n2 && spent < budget; ++a)
      for (std::uint32_t b = a + 1; b < n2 && spent < budget; ++b, ++spent) {
        const std::array<std::uint32_t, 2> w{a, b};
        const auto it = first_pair.find(set_hash(twos, w));
        if (it == first_pair.end()) continue;
        if (auto cert = confirm(labeling, ones, twos, it->second, w, symmetric)) return cert;
      }
  }
  if (max_size < 3 || n1 < 3 || n2 < 3) return std::nullopt;

  // Birthday search over random sets of size 3..max_size.
  CounterRng rng(seed);
  const int top = std::min<int>(max_size, static_cast<int>(std::min(n1, n2)));
  std::vector<std::uint32_t> pool1(n1);
  std::vector<std::uint32_t> pool2(n2);
  std::iota(pool1.begin(), pool1.end(), 0u);
  std::iota(pool2.begin(), pool2.end(), 0u);
  auto draw = [&](std::vector<std::uint32_t>& pool, int size) {
    for (int i = 0; i < size; ++i) {
      const auto pick = i + static_cast<std::size_t>(rng.uniform(pool.size() - static_cast<std::size_t>(i)));
      std::swap(pool[static_cast<std::size_t>(i)], pool[pick]);
    }
    std::vector<std::uint32_t> out(pool.begin(), pool.begin() + size);
    std::sort(out.begin(), out.end());
    return out;
  };
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> seen1;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> seen2;
  while (spent + 2 <= budget) {
    const int size = 3 + static_cast<int>(rng.uniform(static_cast<std::uint64_t>(top - 2)));
    auto u = draw(pool1, size);
    auto w = draw(pool2, size);
    spent += 2;
    const std::uint64_t hu = set_hash(ones, u);
    const std::uint64_t hw = set_hash(twos, w);
    if (hu == hw)
      if (auto cert = confirm(labeling, ones, twos, u, w, symmetric)) return cert;
    if (const auto it = seen2.find(hu); it != seen2.end())
      if (auto cert = confirm(labeling, ones, twos, u, it->second, symmetric)) return cert;
    if (const auto it = seen1.find(hw); it != seen1.end())
      if (auto cert = confirm(labeling, ones, twos, it->second, w, symmetric)) return cert;
    seen1.emplace(hu, std::move(u));
    seen2.emplace(hw, std::move(w));
  }
  return std::nullopt;
}

Labeling apply_swap(const Labeling& labeling, const std::vector<Vertex>& v1, const std::vector<Vertex>& v2) {
  const LatticeConfig& config = labeling.config();
  std::vector<std::uint8_t> raw(labeling.raw().begin(), labeling.raw().end());
  auto flip = [&](const std::vector<Vertex>& set, int from, int to) {
    for (const Vertex& v : set) {
      if (!config.contains(v)) throw PreconditionError("swap vertex outside the lattice");
      const std::size_t i = config.index_of(v);
      if (labeling.label_at(i) != from)
        throw PreconditionError("swap vertex does not carry label " + std::to_string(from));
      raw[i] = static_cast<std::uint8_t>(to - 1);
    }
  };
  flip(v1, 1, 2);
  flip(v2, 2, 1);
  return Labeling(config, std::move(raw));
}

bool verify_nonidentifiable(const Labeling& a, const Labeling& b) {
  if (!(a.config() == b.config())) throw ConfigMismatch("labelings come from different configurations");
  return !(a == b) && profiles_equal(shatter(a), shatter(b));
}

bool verify_nonidentifiable_symmetric(const Labeling& a, const Labeling& b) {
  if (!(a.config() == b.config())) throw ConfigMismatch("labelings come from different configurations");
  return !equal_up_to_isomorphism(a, b) && profiles_equal(shatter_symmetric(a), shatter_symmetric(b));
}

namespace {

// Sorted integer codes of all r-boxes; two labelings have equal profiles
// iff their code vectors are equal.
class ProfileCoder {
 public:
  explicit ProfileCoder(const LatticeConfig& config)
      : q_(static_cast<std::uint64_t>(config.q())),
        rel_(relative_offsets(config.lattice_extent(), config.shard_extent())) {
    for (const BoxRegion& box : enumerate_boxes(config, config.r())) bases_.push_back(config.index_of(box.corner));
    codes_.resize(bases_.size());
  }

  const std::vector<std::uint64_t>& operator()(std::span<const std::uint8_t> raw) {
    for (std::size_t b = 0; b < bases_.size(); ++b) {
      std::uint64_t code = 0;
      for (std::ptrdiff_t off : rel_) code = code * q_ + raw[bases_[b] + static_cast<std::size_t>(off)];
      codes_[b] = code;
    }
    std::sort(codes_.begin(), codes_.end());
    return codes_;
  }

 private:
  std::uint64_t q_;
  std::vector<std::ptrdiff_t> rel_;
  std::vector<std::size_t> bases_;
  std::vector<std::uint64_t> codes_;
};

}  // namespace

std::optional<Labeling> brute_force_twin(const LatticeConfig& config, const Labeling& labeling, std::uint64_t cap) {
  if (!(labeling.config() == config)) throw ConfigMismatch("labeling does not belong to the configuration");
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < config.vertex_count(); ++i) {
    if (total > cap / static_cast<std::uint64_t>(config.q()))
      throw InstanceTooLarge("q^(n^d) exceeds the enumeration cap of " + std::to_string(cap));
    total *= static_cast<std::uint64_t>(config.q());
  }

  ProfileCoder coder(config);
  const std::vector<std::uint64_t> target = coder(labeling.raw());
  const auto truth = labeling.raw();
  std::vector<std::uint8_t> raw(config.vertex_count(), 0);
  const auto q = static_cast<std::uint8_t>(config.q() - 1);
  for (std::uint64_t count = 0; count < total; ++count) {
    if (!std::equal(raw.begin(), raw.end(), truth.begin()) && coder(raw) == target) return Labeling(config, raw);
    for (std::size_t i = raw.size(); i-- > 0;) {
      if (raw[i] < q) {
        ++raw[i];
        break;
      }
      raw[i] = 0;
    }
  }
  return std::nullopt;
}

bool brute_force_identifiable(const LatticeConfig& config, const Labeling& labeling, std::uint64_t cap) {
  return !brute_force_twin(config, labeling, cap).has_value();
}

}  // namespace shotgun
