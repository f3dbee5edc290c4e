#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "shotgun/errors.hpp"
#include "shotgun/rng.hpp"
#include "shotgun/spoiler.hpp"
#include "shotgun/symmetry.hpp"

using namespace shotgun;

namespace {

Labeling line(int q, int r, std::vector<int> labels) {
  return Labeling::from_labels(LatticeConfig::make(1, static_cast<int>(labels.size()), q, r), labels);
}

std::size_t cells_changed(const Labeling& a, const Labeling& b) {
  std::size_t diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff += a.raw()[i] != b.raw()[i];
  return diff;
}

void expect_valid(const Labeling& original, const SwapCertificate1D& cert) {
  EXPECT_EQ(extract_pattern(original, cert.b1), extract_pattern(original, cert.b4));
  EXPECT_EQ(extract_pattern(original, cert.b3), extract_pattern(original, cert.b6));
  EXPECT_FALSE(cert.permuted == original);
  EXPECT_TRUE(profiles_equal(shatter(original), shatter(cert.permuted)));
  // J sits strictly between B1 and B3, J' strictly between B4 and B6
  EXPECT_EQ(cert.j.corner[0], cert.b1.corner[0] + cert.b1.sides[0]);
  EXPECT_EQ(cert.j.corner[0] + cert.j.sides[0], cert.b3.corner[0]);
  EXPECT_EQ(cert.j_prime.corner[0], cert.b4.corner[0] + cert.b4.sides[0]);
  EXPECT_EQ(cert.j_prime.corner[0] + cert.j_prime.sides[0], cert.b6.corner[0]);
}

void expect_valid(const Labeling& original, const SwapCertificateND& cert) {
  EXPECT_FALSE(cert.v1.empty());
  EXPECT_EQ(cert.v1.size(), cert.v2.size());
  for (const Vertex& u : cert.v1) EXPECT_EQ(original.label(u), 1);
  for (const Vertex& w : cert.v2) EXPECT_EQ(original.label(w), 2);
  EXPECT_EQ(punctured_profile(original, cert.v1), punctured_profile(original, cert.v2));
  EXPECT_EQ(cert.permuted, apply_swap(original, cert.v1, cert.v2));
  EXPECT_TRUE(verify_nonidentifiable(original, cert.permuted));
}

// Multiset of patterns of the r-boxes that contain one of `points`.
std::map<std::string, std::int64_t> touching(const Labeling& l, const std::vector<Vertex>& points) {
  std::map<std::string, std::int64_t> out;
  for (const BoxRegion& box : enumerate_boxes(l.config(), l.config().r()))
    if (std::any_of(points.begin(), points.end(), [&](const Vertex& p) { return box.contains(p); }))
      ++out[encode_pattern(extract_pattern(l, box))];
  return out;
}

}  // namespace

TEST(Spoil1D, Preconditions) {
  EXPECT_THROW(spoil_1d(sample_labeling(LatticeConfig::make(1, 11, 2, 2), 1)), PreconditionError);
  EXPECT_THROW(spoil_1d(sample_labeling(LatticeConfig::make(2, 12, 2, 2), 1)), PreconditionError);
  EXPECT_THROW(spoil_1d_symmetric(sample_labeling(LatticeConfig::make(1, 15, 2, 2), 1)), PreconditionError);
}

TEST(Spoil1D, ConstantLabelingNotFound) {
  const Labeling l = Labeling::constant(LatticeConfig::make(1, 60, 2, 3), 1);
  EXPECT_FALSE(spoil_1d(l).has_value());
  EXPECT_FALSE(spoil_1d_symmetric(l).has_value());
}

TEST(Spoil1D, CertificatesVerify) {
  CounterRng rng(30);
  int found = 0;
  for (int t = 0; t < 50; ++t) {
    const Labeling l = sample_labeling(LatticeConfig::make(1, 300, 2, 4), rng());
    const auto cert = spoil_1d(l);
    if (!cert) continue;
    ++found;
    expect_valid(l, *cert);
  }
  EXPECT_GT(found, 40);
}

TEST(Spoil1D, MonteCarloSubcritical) {
  // d = 1, q = 2, n = 4096, r = 14, 100 seeds.
  const auto c = LatticeConfig::make(1, 4096, 2, 14);
  int found = 0;
  for (int t = 0; t < 100; ++t) {
    const Labeling l = sample_labeling(c, derive_seed(31, static_cast<std::uint64_t>(t)));
    const auto cert = spoil_1d(l);
    if (!cert) continue;
    ++found;
    EXPECT_TRUE(verify_nonidentifiable(l, cert->permuted));
  }
  EXPECT_GE(found, 90);
}

TEST(Spoil1D, SymmetricVariantAvoidsReversal) {
  CounterRng rng(32);
  int found = 0;
  for (int t = 0; t < 30; ++t) {
    const Labeling l = sample_labeling(LatticeConfig::make(1, 400, 2, 4), rng());
    const auto cert = spoil_1d_symmetric(l);
    if (!cert) continue;
    ++found;
    expect_valid(l, *cert);
    EXPECT_FALSE(equal_up_to_isomorphism(l, cert->permuted));
    EXPECT_TRUE(verify_nonidentifiable_symmetric(l, cert->permuted));
  }
  EXPECT_GT(found, 20);
}

TEST(ApplySwap, Basics) {
  const Labeling l = line(3, 2, {1, 2, 3, 1, 2, 1});
  EXPECT_EQ(apply_swap(l, {}, {}), l);
  const std::vector<Vertex> v1{Vertex{{0}}, Vertex{{3}}};
  const std::vector<Vertex> v2{Vertex{{1}}};
  const Labeling s = apply_swap(l, v1, v2);
  EXPECT_EQ(s, line(3, 2, {2, 1, 3, 2, 2, 1}));
  EXPECT_EQ(cells_changed(l, s), v1.size() + v2.size());
  EXPECT_EQ(apply_swap(s, v2, v1), l);
  EXPECT_THROW(apply_swap(l, {Vertex{{1}}}, {}), PreconditionError);
  EXPECT_THROW(apply_swap(l, {}, {Vertex{{2}}}), PreconditionError);
}

TEST(ApplySwap, LocalityOfProfileChange) {
  CounterRng rng(33);
  for (int t = 0; t < 30; ++t) {
    const Labeling l = sample_labeling(LatticeConfig::make(2, 40, 2, 2), rng());
    const auto ones = grid_points(l, 1);
    const auto twos = grid_points(l, 2);
    if (ones.empty() || twos.empty()) continue;
    const std::vector<Vertex> v1{ones[rng.uniform(ones.size())]};
    const std::vector<Vertex> v2{twos[rng.uniform(twos.size())]};
    const Labeling s = apply_swap(l, v1, v2);
    std::vector<Vertex> both = v1;
    both.insert(both.end(), v2.begin(), v2.end());
    // shatter(l) - shatter(s) == touching(l) - touching(s)
    std::map<std::string, std::int64_t> lhs;
    const Profile before = shatter(l);
    const Profile after = shatter(s);
    for (const auto& [k, c] : before.counts()) lhs[k] += static_cast<std::int64_t>(c);
    for (const auto& [k, c] : after.counts()) lhs[k] -= static_cast<std::int64_t>(c);
    std::map<std::string, std::int64_t> rhs = touching(l, both);
    for (const auto& [k, c] : touching(s, both)) rhs[k] -= c;
    std::erase_if(lhs, [](const auto& kv) { return kv.second == 0; });
    std::erase_if(rhs, [](const auto& kv) { return kv.second == 0; });
    EXPECT_EQ(lhs, rhs);
    if (punctured_profile(l, v1) == punctured_profile(l, v2)) EXPECT_TRUE(lhs.empty());
  }
}

TEST(SingletonSwap, NoLabelTwoGridPoint) {
  const Labeling l = Labeling::constant(LatticeConfig::make(2, 30, 2, 2), 1);
  EXPECT_FALSE(find_singleton_swap(l).has_value());
}

TEST(SingletonSwap, MonteCarloSubcritical) {
  // d = 2, q = 2, r = 2, n = 256, 100 seeds.
  const auto c = LatticeConfig::make(2, 256, 2, 2);
  int found = 0;
  for (int t = 0; t < 100; ++t) {
    const Labeling l = sample_labeling(c, derive_seed(34, static_cast<std::uint64_t>(t)));
    const auto cert = find_singleton_swap(l);
    if (!cert) continue;
    ++found;
    if (t < 5) expect_valid(l, *cert);
    EXPECT_EQ(cells_changed(l, cert->permuted), 2u);
  }
  EXPECT_GE(found, 80);
}

TEST(SingletonSwap, SymmetricFlagGivesNonIsomorphicTwin) {
  const auto c = LatticeConfig::make(2, 64, 2, 2);
  for (int t = 0; t < 5; ++t) {
    const Labeling l = sample_labeling(c, derive_seed(35, static_cast<std::uint64_t>(t)));
    const auto cert = find_singleton_swap(l, true);
    ASSERT_TRUE(cert.has_value());
    EXPECT_FALSE(equal_up_to_isomorphism(l, cert->permuted));
    EXPECT_TRUE(verify_nonidentifiable_symmetric(l, cert->permuted));
  }
}

TEST(MultisetSwap, SizeOneMatchesSingleton) {
  CounterRng rng(36);
  for (int t = 0; t < 20; ++t) {
    const Labeling l = sample_labeling(LatticeConfig::make(2, 48, 2, 2), rng());
    const auto single = find_singleton_swap(l);
    const auto multi = find_multiset_swap(l, 1, 1000000);
    ASSERT_EQ(single.has_value(), multi.has_value());
    if (!single) continue;
    EXPECT_EQ(single->v1, multi->v1);
    EXPECT_EQ(single->v2, multi->v2);
    EXPECT_EQ(single->permuted, multi->permuted);
  }
}

TEST(MultisetSwap, RejectsBadSize) {
  EXPECT_THROW(find_multiset_swap(sample_labeling(LatticeConfig::make(2, 20, 2, 2), 1), 0, 10), PreconditionError);
}

TEST(MultisetSwap, CertificatesVerify) {
  // d = 2, q = 2, r = 2, n = 64, max_size = 4; success rate is a measurement.
  const auto c = LatticeConfig::make(2, 64, 2, 2);
  int found = 0;
  for (int t = 0; t < 20; ++t) {
    const Labeling l = sample_labeling(c, derive_seed(37, static_cast<std::uint64_t>(t)));
    const auto cert = find_multiset_swap(l, 4, 100000, static_cast<std::uint64_t>(t));
    if (!cert) continue;
    ++found;
    expect_valid(l, *cert);
  }
  RecordProperty("found", found);
  EXPECT_GT(found, 0);
}

TEST(MultisetSwap, FindsPairsWhereSingletonsFail) {
  // Sparse grid: few label-1/label-2 points, so singletons rarely collide
  // but size-2 sets still can.
  CounterRng rng(38);
  int singles = 0;
  int pairs = 0;
  for (int t = 0; t < 40; ++t) {
    const Labeling l = sample_labeling(LatticeConfig::make(2, 96, 3, 2), rng());
    const bool s = find_singleton_swap(l).has_value();
    const auto m = find_multiset_swap(l, 2, 200000);
    singles += s;
    if (m) {
      expect_valid(l, *m);
      pairs += 1;
    }
    if (s) EXPECT_TRUE(m.has_value());
  }
  EXPECT_GE(pairs, singles);
}

TEST(VerifyNonidentifiable, Examples) {
  const Labeling a = line(2, 2, {1, 2, 2, 1});
  EXPECT_FALSE(verify_nonidentifiable(a, a));
  EXPECT_TRUE(verify_nonidentifiable(a, line(2, 2, {2, 1, 2, 2})));
  EXPECT_FALSE(verify_nonidentifiable(line(2, 2, {1, 2, 1, 2}), line(2, 2, {2, 1, 2, 1})));
  EXPECT_THROW(verify_nonidentifiable(a, line(3, 2, {1, 2, 2, 1})), ConfigMismatch);
}

TEST(VerifyNonidentifiableSymmetric, ReversalIsNotATwin) {
  const Labeling a = line(2, 2, {1, 1, 2, 1, 2});
  const Labeling rev = line(2, 2, {2, 1, 2, 1, 1});
  EXPECT_FALSE(verify_nonidentifiable_symmetric(a, rev));
  EXPECT_FALSE(verify_nonidentifiable_symmetric(a, a));
}

TEST(BruteForce, Examples) {
  const auto c = LatticeConfig::make(1, 4, 2, 2);
  EXPECT_FALSE(brute_force_identifiable(c, line(2, 2, {1, 2, 2, 1})));
  EXPECT_TRUE(brute_force_identifiable(c, line(2, 2, {1, 1, 1, 1})));
  const auto twin = brute_force_twin(c, line(2, 2, {1, 2, 2, 1}));
  ASSERT_TRUE(twin.has_value());
  EXPECT_EQ(*twin, line(2, 2, {2, 1, 2, 2}));
}

TEST(BruteForce, SingleShardAlwaysIdentifiable) {
  CounterRng rng(39);
  for (int t = 0; t < 20; ++t) {
    const auto c = LatticeConfig::make(2, 3, 3, 3);
    const Labeling l = sample_labeling(c, rng());
    EXPECT_TRUE(brute_force_identifiable(c, l));
  }
}

TEST(BruteForce, Errors) {
  const auto c = LatticeConfig::make(2, 5, 2, 2);
  EXPECT_THROW(brute_force_identifiable(c, sample_labeling(c, 1)), InstanceTooLarge);
  const auto small = LatticeConfig::make(1, 4, 2, 2);
  EXPECT_THROW(brute_force_identifiable(small, line(2, 3, {1, 2, 2, 1})), ConfigMismatch);
  EXPECT_THROW(brute_force_identifiable(small, line(2, 2, {1, 2, 2, 1}), 15), InstanceTooLarge);
}

TEST(BruteForce, AgreesWithPairwiseOracle) {
  // Independent oracle: bucket all labelings by profile.
  const auto c = LatticeConfig::make(1, 6, 2, 3);
  std::map<Profile::Counts, int> buckets;
  std::vector<Labeling> all;
  for (int mask = 0; mask < 64; ++mask) {
    std::vector<std::uint8_t> raw(6);
    for (int i = 0; i < 6; ++i) raw[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((mask >> i) & 1);
    all.emplace_back(c, raw);
    ++buckets[shatter(all.back()).counts()];
  }
  for (const Labeling& l : all) EXPECT_EQ(brute_force_identifiable(c, l), buckets[shatter(l).counts()] == 1);
}

TEST(OracleConsistency, CertificatesOnlyForNonIdentifiable) {
  // All 4096 binary strings of length 12 at r = 2.
  const auto c = LatticeConfig::make(1, 12, 2, 2);
  int certified = 0;
  for (int mask = 0; mask < (1 << 12); ++mask) {
    std::vector<std::uint8_t> raw(12);
    for (int i = 0; i < 12; ++i) raw[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((mask >> i) & 1);
    const Labeling l(c, raw);
    std::optional<Labeling> twin;
    if (auto cert = find_singleton_swap(l)) twin = cert->permuted;
    else if (auto cert1 = spoil_1d(l)) twin = cert1->permuted;
    if (!twin) continue;
    ++certified;
    EXPECT_TRUE(verify_nonidentifiable(l, *twin));
    EXPECT_FALSE(brute_force_identifiable(c, l)) << "mask " << mask;
  }
  EXPECT_GT(certified, 0);
}
