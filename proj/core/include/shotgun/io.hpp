#pragma once

// File formats and JSON records.
//
// Labeling file: "SGLB", version byte (1), d, n, q as u32 little-endian,
// then n^d bytes (label - 1) in row-major order.
//
// Shard file: "SGSL", version byte (low 7 bits = 1, bit 7 set for a
// canonical profile), d, n, q, r as u32 little-endian, record count as u64
// little-endian, then per record the pattern encoding followed by its
// multiplicity as u32 little-endian. Records are sorted by encoding.

#include <iosfwd>
#include <string>

#include "shotgun/assembler.hpp"
#include "shotgun/lattice.hpp"
#include "shotgun/profile.hpp"
#include "shotgun/spoiler.hpp"

namespace shotgun {

inline constexpr std::uint8_t kFormatVersion = 1;

void write_labeling(std::ostream& out, const Labeling& labeling);
/// The file carries no r; `r` is attached to the returned config.
/// Throws FormatError (or InvalidConfig if r does not fit).
Labeling read_labeling(std::istream& in, int r = 2);

void write_profile(std::ostream& out, const Profile& profile);
Profile read_profile(std::istream& in);

void save_labeling(const std::string& path, const Labeling& labeling);
Labeling load_labeling(const std::string& path, int r = 2);
void save_profile(const std::string& path, const Profile& profile);
Profile load_profile(const std::string& path);

/// JSON object with the AssemblyReport field names as keys.
std::string report_to_json(const AssemblyReport& report);
std::string openness_to_json(const OpennessStats& stats);

/// Certificates record the configuration, the swap data and a fingerprint
/// of both labelings; the permuted labeling is rebuilt from the original.
std::string certificate_to_json(const Labeling& original, const SwapCertificate1D& cert);
std::string certificate_to_json(const Labeling& original, const SwapCertificateND& cert);

/// Rebuilds the permuted labeling described by a certificate record.
/// Throws FormatError on malformed records or a config/fingerprint mismatch.
Labeling permuted_from_certificate(const Labeling& original, const std::string& json_text);

/// FNV-1a over the raw labels; used as a labeling fingerprint.
std::uint64_t labeling_fingerprint(const Labeling& labeling);

}  // namespace shotgun
