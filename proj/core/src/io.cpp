#include "shotgun/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "shotgun/errors.hpp"

namespace shotgun {

namespace {

using nlohmann::json;

constexpr char kLabelingMagic[4] = {'S', 'G', 'L', 'B'};
constexpr char kShardMagic[4] = {'S', 'G', 'S', 'L'};
constexpr std::uint8_t kCanonicalFlag = 0x80;

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 8);
}

void get_bytes(std::istream& in, char* dst, std::size_t count) {
  in.read(dst, static_cast<std::streamsize>(count));
  if (static_cast<std::size_t>(in.gcount()) != count) throw FormatError("unexpected end of file");
}

std::uint64_t get_le(std::istream& in, int bytes) {
  char b[8];
  get_bytes(in, b, static_cast<std::size_t>(bytes));
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[i]);
  return v;
}

void expect_magic(std::istream& in, const char (&magic)[4]) {
  char b[4];
  get_bytes(in, b, 4);
  if (!std::equal(b, b + 4, magic)) throw FormatError("bad magic: expected " + std::string(magic, 4));
}

void expect_end(std::istream& in) {
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes after the last record");
}

int get_param(std::istream& in) {
  const std::uint64_t v = get_le(in, 4);
  if (v > 65535) throw FormatError("header parameter out of range");
  return static_cast<int>(v);
}

LatticeConfig header_config(int d, int n, int q, int r) {
  try {
    return LatticeConfig::make(d, n, q, r);
  } catch (const InvalidConfig& e) {
    throw FormatError(std::string("invalid header: ") + e.what());
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return in;
}

json vertex_json(const Vertex& v, int dim) {
  json a = json::array();
  for (int i = 0; i < dim; ++i) a.push_back(v[i]);
  return a;
}

json box_json(const BoxRegion& box) {
  return {{"corner", vertex_json(box.corner, box.sides.dim)}, {"length", box.sides.dim == 0 ? 0 : box.sides[0]}};
}

json config_json(const LatticeConfig& c) { return {{"d", c.d()}, {"n", c.n()}, {"q", c.q()}, {"r", c.r()}}; }

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

void write_labeling(std::ostream& out, const Labeling& labeling) {
  const LatticeConfig& c = labeling.config();
  out.write(kLabelingMagic, 4);
  out.put(static_cast<char>(kFormatVersion));
  put_u32(out, static_cast<std::uint32_t>(c.d()));
  put_u32(out, static_cast<std::uint32_t>(c.n()));
  put_u32(out, static_cast<std::uint32_t>(c.q()));
  const auto raw = labeling.raw();
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

Labeling read_labeling(std::istream& in, int r) {
  expect_magic(in, kLabelingMagic);
  char version = 0;
  get_bytes(in, &version, 1);
  if (static_cast<std::uint8_t>(version) != kFormatVersion) throw FormatError("unsupported labeling file version");
  const int d = get_param(in);
  const int n = get_param(in);
  const int q = get_param(in);
  const LatticeConfig config = header_config(d, n, q, std::min(r, n));
  if (r > n) throw InvalidConfig("r exceeds the lattice side n = " + std::to_string(n));
  std::vector<std::uint8_t> raw(config.vertex_count());
  get_bytes(in, reinterpret_cast<char*>(raw.data()), raw.size());
  expect_end(in);
  for (std::uint8_t v : raw)
    if (v >= q) throw FormatError("label outside [1, q]");
  return Labeling(config, std::move(raw));
}

void write_profile(std::ostream& out, const Profile& profile) {
  const LatticeConfig& c = profile.config();
  out.write(kShardMagic, 4);
  const auto version = static_cast<std::uint8_t>(
      kFormatVersion | (profile.kind() == ProfileKind::kCanonical ? kCanonicalFlag : 0));
  out.put(static_cast<char>(version));
  put_u32(out, static_cast<std::uint32_t>(c.d()));
  put_u32(out, static_cast<std::uint32_t>(c.n()));
  put_u32(out, static_cast<std::uint32_t>(c.q()));
  put_u32(out, static_cast<std::uint32_t>(c.r()));
  put_u64(out, profile.counts().size());
  for (const auto& [key, count] : profile.counts()) {
    if (count > 0xFFFFFFFFULL) throw FormatError("multiplicity does not fit in 32 bits");
    out.write(key.data(), static_cast<std::streamsize>(key.size()));
    put_u32(out, static_cast<std::uint32_t>(count));
  }
}

Profile read_profile(std::istream& in) {
  expect_magic(in, kShardMagic);
  char version_byte = 0;
  get_bytes(in, &version_byte, 1);
  const auto version = static_cast<std::uint8_t>(version_byte);
  if ((version & 0x7F) != kFormatVersion) throw FormatError("unsupported shard file version");
  const ProfileKind kind = (version & kCanonicalFlag) ? ProfileKind::kCanonical : ProfileKind::kOriented;
  const int d = get_param(in);
  const int n = get_param(in);
  const int q = get_param(in);
  const int r = get_param(in);
  const LatticeConfig config = header_config(d, n, q, r);
  const std::uint64_t records = get_le(in, 8);
  if (records > config.shard_count()) throw FormatError("more records than r-boxes");

  const std::size_t key_size = 1 + 2 * static_cast<std::size_t>(d) + config.shard_extent().volume();
  Profile::Counts counts;
  std::string previous;
  for (std::uint64_t i = 0; i < records; ++i) {
    std::string key(key_size, '\0');
    get_bytes(in, key.data(), key_size);
    const std::uint64_t count = get_le(in, 4);
    if (i > 0 && !(previous < key)) throw FormatError("shard records are not sorted by encoding");
    previous = key;
    counts.emplace(std::move(key), count);
  }
  expect_end(in);
  return Profile(config, std::move(counts), kind);
}

void save_labeling(const std::string& path, const Labeling& labeling) {
  auto out = open_out(path);
  write_labeling(out, labeling);
}

Labeling load_labeling(const std::string& path, int r) {
  auto in = open_in(path);
  return read_labeling(in, r);
}

void save_profile(const std::string& path, const Profile& profile) {
  auto out = open_out(path);
  write_profile(out, profile);
}

Profile load_profile(const std::string& path) {
  auto in = open_in(path);
  return read_profile(in);
}

std::string report_to_json(const AssemblyReport& report) {
  json j;
  j["success"] = report.success;
  j["determined_after_step"] = report.determined_after_step;
  j["step2_explored_boxes"] = report.step2_explored_boxes;
  j["step3_filled"] = report.step3_filled;
  j["failure_reason"] = std::string(to_string(report.failure_reason));
  j["automorphic_pivots"] = report.automorphic_pivots;
  return j.dump(2);
}

std::string openness_to_json(const OpennessStats& stats) {
  json j;
  j["open_fraction"] = stats.open_fraction();
  j["open_boxes"] = stats.open_boxes;
  j["total_boxes"] = stats.total_boxes;
  j["closed_component_count"] = stats.closed_component_count;
  j["max_closed_component_diameter"] = stats.max_closed_component_diameter;
  return j.dump(2);
}

std::uint64_t labeling_fingerprint(const Labeling& labeling) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t v : labeling.raw()) {
    h ^= v;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string certificate_to_json(const Labeling& original, const SwapCertificate1D& cert) {
  json j;
  j["kind"] = "interval";
  j["config"] = config_json(original.config());
  j["b1"] = box_json(cert.b1);
  j["b3"] = box_json(cert.b3);
  j["b4"] = box_json(cert.b4);
  j["b6"] = box_json(cert.b6);
  j["j"] = box_json(cert.j);
  j["j_prime"] = box_json(cert.j_prime);
  j["original_fingerprint"] = hex64(labeling_fingerprint(original));
  j["permuted_fingerprint"] = hex64(labeling_fingerprint(cert.permuted));
  return j.dump(2);
}

std::string certificate_to_json(const Labeling& original, const SwapCertificateND& cert) {
  const int d = original.config().d();
  json j;
  j["kind"] = "label-swap";
  j["config"] = config_json(original.config());
  j["v1"] = json::array();
  j["v2"] = json::array();
  for (const Vertex& v : cert.v1) j["v1"].push_back(vertex_json(v, d));
  for (const Vertex& v : cert.v2) j["v2"].push_back(vertex_json(v, d));
  j["size"] = cert.v1.size();
  j["original_fingerprint"] = hex64(labeling_fingerprint(original));
  j["permuted_fingerprint"] = hex64(labeling_fingerprint(cert.permuted));
  return j.dump(2);
}

Labeling permuted_from_certificate(const Labeling& original, const std::string& json_text) {
  try {
    const json j = json::parse(json_text);
    const LatticeConfig& c = original.config();
    const json& cj = j.at("config");
    if (cj.at("d").get<int>() != c.d() || cj.at("n").get<int>() != c.n() || cj.at("q").get<int>() != c.q() ||
        cj.at("r").get<int>() != c.r())
      throw FormatError("certificate configuration does not match the labeling");
    if (j.at("original_fingerprint").get<std::string>() != hex64(labeling_fingerprint(original)))
      throw FormatError("certificate was issued for a different labeling");

    auto read_vertex = [&](const json& a) {
      if (!a.is_array() || static_cast<int>(a.size()) != c.d()) throw FormatError("bad vertex in certificate");
      Vertex v;
      for (int i = 0; i < c.d(); ++i) v[i] = a.at(static_cast<std::size_t>(i)).get<int>();
      return v;
    };

    const std::string kind = j.at("kind").get<std::string>();
    std::optional<Labeling> permuted;
    if (kind == "label-swap") {
      std::vector<Vertex> v1;
      std::vector<Vertex> v2;
      for (const json& a : j.at("v1")) v1.push_back(read_vertex(a));
      for (const json& a : j.at("v2")) v2.push_back(read_vertex(a));
      try {
        permuted = apply_swap(original, v1, v2);
      } catch (const PreconditionError& e) {
        throw FormatError(std::string("certificate does not fit the labeling: ") + e.what());
      }
    } else if (kind == "interval") {
      if (c.d() != 1) throw FormatError("interval certificate on a d > 1 labeling");
      auto start = [&](const char* name) { return j.at(name).at("corner").at(0).get<int>(); };
      const int r = c.r();
      const int n = c.n();
      const int b1 = start("b1");
      const int b3 = start("b3");
      const int b4 = start("b4");
      const int b6 = start("b6");
      if (!(0 <= b1 && b1 + r <= b3 && b3 <= b4 && b4 + r <= b6 && b6 + r <= n))
        throw FormatError("interval certificate bounds are out of order");
      const auto raw = original.raw();
      std::vector<std::uint8_t> out;
      auto append = [&](int from, int to) { out.insert(out.end(), raw.begin() + from, raw.begin() + to); };
      append(0, b1 + r);
      append(b4 + r, b6);
      append(b3, b4 + r);
      append(b1 + r, b3);
      append(b6, n);
      permuted = Labeling(c, std::move(out));
    } else {
      throw FormatError("unknown certificate kind '" + kind + "'");
    }
    if (j.at("permuted_fingerprint").get<std::string>() != hex64(labeling_fingerprint(*permuted)))
      throw FormatError("rebuilt labeling does not match the recorded fingerprint");
    return *std::move(permuted);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed certificate: ") + e.what());
  }
}

}  // namespace shotgun
