#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>

#include "shotgun/errors.hpp"
#include "shotgun/io.hpp"
#include "shotgun/rng.hpp"
#include "shotgun/symmetry.hpp"

using namespace shotgun;
using nlohmann::json;

namespace {

std::string labeling_bytes(const Labeling& l) {
  std::ostringstream out;
  write_labeling(out, l);
  return out.str();
}

std::string profile_bytes(const Profile& p) {
  std::ostringstream out;
  write_profile(out, p);
  return out.str();
}

Labeling labeling_from(const std::string& bytes, int r = 2) {
  std::istringstream in(bytes);
  return read_labeling(in, r);
}

Profile profile_from(const std::string& bytes) {
  std::istringstream in(bytes);
  return read_profile(in);
}

}  // namespace

TEST(LabelingFile, ExactBytes) {
  const auto c = LatticeConfig::make(1, 3, 5, 2);
  const std::string bytes = labeling_bytes(Labeling::from_labels(c, std::vector<int>{1, 5, 3}));
  const std::string expected("SGLB\x01\x01\x00\x00\x00\x03\x00\x00\x00\x05\x00\x00\x00\x00\x04\x02", 20);
  EXPECT_EQ(bytes, expected);
}

TEST(LabelingFile, RoundTrip) {
  CounterRng rng(40);
  for (int d = 1; d <= 4; ++d) {
    const auto c = LatticeConfig::make(d, 5, 7, 3);
    const Labeling l = sample_labeling(c, rng());
    EXPECT_EQ(labeling_from(labeling_bytes(l), 3), l);
  }
}

TEST(LabelingFile, Errors) {
  const std::string good = labeling_bytes(sample_labeling(LatticeConfig::make(2, 4, 3, 2), 1));
  EXPECT_THROW(labeling_from("XGLB" + good.substr(4)), FormatError);
  EXPECT_THROW(labeling_from(good.substr(0, good.size() - 1)), FormatError);
  EXPECT_THROW(labeling_from(good + "x"), FormatError);
  std::string bad_version = good;
  bad_version[4] = 2;
  EXPECT_THROW(labeling_from(bad_version), FormatError);
  std::string bad_label = good;
  bad_label.back() = 3;
  EXPECT_THROW(labeling_from(bad_label), FormatError);
  std::string bad_dim = good;
  bad_dim[5] = 9;
  EXPECT_THROW(labeling_from(bad_dim), FormatError);
  EXPECT_THROW(labeling_from(good, 5), InvalidConfig);
}

TEST(ShardFile, RoundTripBothKinds) {
  CounterRng rng(41);
  for (int d = 1; d <= 3; ++d) {
    const Labeling l = sample_labeling(LatticeConfig::make(d, 6, 3, 3), rng());
    const Profile oriented = shatter(l);
    const Profile canonical = shatter_symmetric(l);
    EXPECT_EQ(profile_from(profile_bytes(oriented)), oriented);
    EXPECT_EQ(profile_from(profile_bytes(canonical)), canonical);
    EXPECT_EQ(static_cast<std::uint8_t>(profile_bytes(canonical)[4]), 0x81);
    EXPECT_EQ(static_cast<std::uint8_t>(profile_bytes(oriented)[4]), 0x01);
  }
}

TEST(ShardFile, HeaderLayout) {
  const auto c = LatticeConfig::make(1, 3, 2, 2);
  const std::string bytes = profile_bytes(shatter(Labeling::from_labels(c, std::vector<int>{1, 1, 2})));
  // magic, version, d n q r, record count
  EXPECT_EQ(bytes.substr(0, 4), "SGSL");
  EXPECT_EQ(bytes.substr(5, 16), std::string("\x01\0\0\0\x03\0\0\0\x02\0\0\0\x02\0\0\0", 16));
  EXPECT_EQ(bytes.substr(21, 8), std::string("\x02\0\0\0\0\0\0\0", 8));
  // records [1,1] then [1,2], each 1 + 2 + 2 bytes plus a u32 count
  EXPECT_EQ(bytes.size(), 29u + 2 * (5 + 4));
  EXPECT_EQ(bytes.substr(29, 9), std::string("\x01\x02\0\0\0\x01\0\0\0", 9));
  EXPECT_EQ(bytes.substr(38, 9), std::string("\x01\x02\0\0\x01\x01\0\0\0", 9));
}

TEST(ShardFile, Errors) {
  const std::string good = profile_bytes(shatter(sample_labeling(LatticeConfig::make(2, 5, 3, 2), 2)));
  EXPECT_THROW(profile_from(good.substr(0, good.size() - 2)), FormatError);
  EXPECT_THROW(profile_from(good + std::string(1, '\0')), FormatError);
  EXPECT_THROW(profile_from("SGLB" + good.substr(4)), FormatError);
  // swap the first two records to break the ordering
  const std::size_t rec = 1 + 4 + 4 + 4;
  std::string unsorted = good;
  std::swap_ranges(unsorted.begin() + 29, unsorted.begin() + 29 + static_cast<std::ptrdiff_t>(rec),
                   unsorted.begin() + 29 + static_cast<std::ptrdiff_t>(rec));
  EXPECT_THROW(profile_from(unsorted), FormatError);
  // a multiplicity that breaks the total
  std::string bad_total = good;
  bad_total[29 + 9] = 99;
  EXPECT_THROW(profile_from(bad_total), FormatError);
}

TEST(Json, ReportKeys) {
  AssemblyReport report;
  report.success = true;
  report.determined_after_step = {4, 9, 16};
  report.step2_explored_boxes = 12;
  report.step3_filled = 7;
  const json j = json::parse(report_to_json(report));
  EXPECT_TRUE(j.at("success").get<bool>());
  EXPECT_EQ(j.at("determined_after_step"), json::array({4, 9, 16}));
  EXPECT_EQ(j.at("step2_explored_boxes"), 12);
  EXPECT_EQ(j.at("step3_filled"), 7);
  EXPECT_EQ(j.at("failure_reason"), "none");
}

TEST(Json, FailureReasonNames) {
  EXPECT_EQ(to_string(FailureReason::kCornerNotFound), "corner-not-found");
  EXPECT_EQ(to_string(FailureReason::kStalled), "stalled");
  EXPECT_EQ(to_string(FailureReason::kConflict), "conflict");
}

TEST(Json, Openness) {
  OpennessStats s;
  s.open_boxes = 3;
  s.total_boxes = 4;
  s.closed_component_count = 1;
  s.max_closed_component_diameter = 8;
  const json j = json::parse(openness_to_json(s));
  EXPECT_DOUBLE_EQ(j.at("open_fraction").get<double>(), 0.75);
  EXPECT_EQ(j.at("closed_component_count"), 1);
  EXPECT_EQ(j.at("max_closed_component_diameter"), 8);
}

TEST(Certificate, LabelSwapRoundTrip) {
  const auto c = LatticeConfig::make(2, 64, 2, 2);
  const Labeling l = sample_labeling(c, derive_seed(42, 0));
  const auto cert = find_singleton_swap(l);
  ASSERT_TRUE(cert.has_value());
  const std::string text = certificate_to_json(l, *cert);
  EXPECT_EQ(json::parse(text).at("kind"), "label-swap");
  EXPECT_EQ(permuted_from_certificate(l, text), cert->permuted);
}

TEST(Certificate, IntervalRoundTrip) {
  const Labeling l = sample_labeling(LatticeConfig::make(1, 600, 2, 6), 43);
  const auto cert = spoil_1d(l);
  ASSERT_TRUE(cert.has_value());
  const std::string text = certificate_to_json(l, *cert);
  EXPECT_EQ(json::parse(text).at("kind"), "interval");
  EXPECT_EQ(permuted_from_certificate(l, text), cert->permuted);
}

TEST(Certificate, RejectsMismatch) {
  const auto c = LatticeConfig::make(2, 64, 2, 2);
  const Labeling l = sample_labeling(c, derive_seed(42, 0));
  const auto cert = find_singleton_swap(l);
  ASSERT_TRUE(cert.has_value());
  const std::string text = certificate_to_json(l, *cert);
  EXPECT_THROW(permuted_from_certificate(sample_labeling(c, 5), text), FormatError);
  EXPECT_THROW(permuted_from_certificate(l.with_r(3), text), FormatError);
  EXPECT_THROW(permuted_from_certificate(l, "{not json"), FormatError);
  json tampered = json::parse(text);
  tampered["v1"][0][0] = tampered["v1"][0][0].get<int>() + 1;
  EXPECT_THROW(permuted_from_certificate(l, tampered.dump()), FormatError);
}

TEST(Fingerprint, Fnv1a) {
  // FNV-1a of the bytes {0, 1}
  const auto c = LatticeConfig::make(1, 2, 2, 2);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : {0, 1}) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  EXPECT_EQ(labeling_fingerprint(Labeling::from_labels(c, std::vector<int>{1, 2})), h);
}
