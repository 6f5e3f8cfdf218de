//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "vscreen/molmodel/binary_codec.hpp"

#include <bit>
#include <cmath>
#include <cstring>

#include "vscreen/error.hpp"

namespace vscreen {

namespace {

constexpr std::size_t kAtomBytes = 14;
constexpr std::size_t kBondBytes = 5;
constexpr std::size_t kTorsionBytes = 2;

void put_u16(std::vector<std::uint8_t> &out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t> &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_f32(std::vector<std::uint8_t> &out, float v) {
  auto bits = std::bit_cast<std::uint32_t>(v);
  put_u32(out, bits);
}

class Reader {
public:
  Reader(std::span<const std::uint8_t> bytes, std::size_t at)
      : bytes_(bytes), at_(at) {}

  std::uint8_t u8() {
    need(1);
    return bytes_[at_++];
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>(bytes_[at_]) |
                      static_cast<std::uint16_t>(bytes_[at_ + 1]) << 8;
    at_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(bytes_[at_ + i]) << (8 * i);
    at_ += 4;
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  std::string str(std::size_t len) {
    need(len);
    std::string s(reinterpret_cast<const char *>(bytes_.data() + at_), len);
    at_ += len;
    return s;
  }
  std::size_t at() const { return at_; }

private:
  void need(std::size_t n) {
    if (at_ + n > bytes_.size()) throw CodecError("truncated record");
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t at_;
};

std::size_t payload_size(std::size_t name_len, std::size_t atoms,
                         std::size_t bonds, std::size_t torsions) {
  return 2 + name_len + 6 + atoms * kAtomBytes + bonds * kBondBytes +
         torsions * kTorsionBytes;
}

bool marker_at(std::span<const std::uint8_t> bytes, std::size_t at) {
  return at + 2 <= bytes.size() && bytes[at] == kSyncMarker[0] &&
         bytes[at + 1] == kSyncMarker[1];
}

// Follows the candidate's length chain for up to two hops. Each hop must
// land on a sync marker or exactly at the end of the data.
SyncScan validate_chain(std::span<const std::uint8_t> bytes, std::size_t at,
                        bool end_is_final) {
  std::size_t cursor = at;
  for (int hop = 0; hop < 2; ++hop) {
    if (cursor + 2 <= bytes.size() && !marker_at(bytes, cursor))
      return SyncScan::End;
    if (cursor + 6 > bytes.size())
      return end_is_final ? SyncScan::End : SyncScan::NeedMore;
    std::uint32_t len = 0;
    for (int i = 0; i < 4; ++i)
      len |= static_cast<std::uint32_t>(bytes[cursor + 2 + i]) << (8 * i);
    const std::size_t next = cursor + 6 + len;
    if (next > bytes.size())
      return end_is_final ? SyncScan::End : SyncScan::NeedMore;
    if (next == bytes.size()) return SyncScan::Found;
    cursor = next;
  }
  if (cursor + 2 > bytes.size())
    return end_is_final ? SyncScan::End : SyncScan::NeedMore;
  return marker_at(bytes, cursor) ? SyncScan::Found : SyncScan::End;
}

}  // namespace

std::vector<std::uint8_t> xslb_header() {
  return {kFileMagic[0], kFileMagic[1], kFileMagic[2], kFileMagic[3],
          kFormatVersion, 0, 0, 0};
}

void check_xslb_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFileHeaderSize) throw CodecError("file shorter than header");
  if (std::memcmp(bytes.data(), kFileMagic, 4) != 0)
    throw CodecError("bad file magic");
  if (bytes[4] != kFormatVersion)
    throw CodecError("unknown format version " + std::to_string(bytes[4]));
}

std::vector<std::uint8_t> encode_record(const Ligand &ligand) {
  if (ligand.name.size() > 0xFFFF) throw InvalidArgument("ligand name too long");
  if (ligand.atoms.size() > 0xFFFF || ligand.bonds.size() > 0xFFFF ||
      ligand.torsions.size() > 0xFFFF)
    throw InvalidArgument("ligand too large for record format");

  const std::size_t payload =
      payload_size(ligand.name.size(), ligand.atoms.size(), ligand.bonds.size(),
                   ligand.torsions.size());

  std::vector<std::uint8_t> out;
  out.reserve(6 + payload);
  out.push_back(kSyncMarker[0]);
  out.push_back(kSyncMarker[1]);
  put_u32(out, static_cast<std::uint32_t>(payload));
  put_u16(out, static_cast<std::uint16_t>(ligand.name.size()));
  out.insert(out.end(), ligand.name.begin(), ligand.name.end());
  put_u16(out, static_cast<std::uint16_t>(ligand.atoms.size()));
  put_u16(out, static_cast<std::uint16_t>(ligand.bonds.size()));
  put_u16(out, static_cast<std::uint16_t>(ligand.torsions.size()));
  for (const Atom &atom : ligand.atoms) {
    put_f32(out, static_cast<float>(atom.position.x()));
    put_f32(out, static_cast<float>(atom.position.y()));
    put_f32(out, static_cast<float>(atom.position.z()));
    out.push_back(static_cast<std::uint8_t>(atom.element));
    out.push_back(atom.is_heavy ? 0x01 : 0x00);
  }
  for (const Bond &bond : ligand.bonds) {
    put_u16(out, bond.a);
    put_u16(out, bond.b);
    out.push_back(static_cast<std::uint8_t>(bond.order));
  }
  for (const TorsionalBond &torsion : ligand.torsions)
    put_u16(out, torsion.bond_index);
  return out;
}

std::pair<Ligand, std::size_t> decode_record(std::span<const std::uint8_t> bytes,
                                             std::size_t offset) {
  if (!marker_at(bytes, offset)) throw CodecError("bad sync marker");
  Reader reader(bytes, offset + 2);
  const std::uint32_t record_len = reader.u32();
  const std::size_t record_end = reader.at() + record_len;
  if (record_end > bytes.size()) throw CodecError("truncated record");

  const std::uint16_t name_len = reader.u16();
  Ligand ligand;
  ligand.name = reader.str(name_len);
  const std::uint16_t n_atoms = reader.u16();
  const std::uint16_t n_bonds = reader.u16();
  const std::uint16_t n_torsions = reader.u16();
  if (payload_size(name_len, n_atoms, n_bonds, n_torsions) != record_len)
    throw CodecError("record length mismatch");

  ligand.atoms.reserve(n_atoms);
  for (std::uint16_t i = 0; i < n_atoms; ++i) {
    Atom atom;
    const float x = reader.f32();
    const float y = reader.f32();
    const float z = reader.f32();
    atom.position = Eigen::Vector3d(x, y, z);
    const std::uint8_t code = reader.u8();
    if (code > kMaxElementCode) throw CodecError("invalid element code");
    atom.element = static_cast<Element>(code);
    const std::uint8_t flags = reader.u8();
    atom.is_heavy = (flags & 0x01) != 0;
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
      throw CodecError("non-finite coordinate");
    ligand.atoms.push_back(atom);
  }
  ligand.bonds.reserve(n_bonds);
  for (std::uint16_t i = 0; i < n_bonds; ++i) {
    Bond bond;
    bond.a = reader.u16();
    bond.b = reader.u16();
    const std::uint8_t order = reader.u8();
    if (bond.a >= n_atoms || bond.b >= n_atoms || bond.a == bond.b)
      throw CodecError("invalid bond");
    if (order < 1 || order > 4) throw CodecError("invalid bond order");
    bond.order = static_cast<BondOrder>(order);
    ligand.bonds.push_back(bond);
  }
  for (std::uint16_t i = 0; i < n_torsions; ++i) {
    const std::uint16_t bond_index = reader.u16();
    if (bond_index >= n_bonds) throw CodecError("invalid torsion bond index");
    try {
      ligand.torsions.push_back(torsion_partition(ligand, bond_index));
    } catch (const InvalidArgument &e) {
      throw CodecError(std::string("invalid torsion: ") + e.what());
    }
  }
  if (n_atoms > 0 && !is_connected(ligand))
    throw CodecError("record graph is disconnected");
  return {std::move(ligand), record_end};
}

SyncResult scan_record_start(std::span<const std::uint8_t> bytes,
                             std::size_t from, bool end_is_final) {
  for (std::size_t at = from; at + 2 <= bytes.size(); ++at) {
    if (bytes[at] != kSyncMarker[0] || bytes[at + 1] != kSyncMarker[1]) continue;
    switch (validate_chain(bytes, at, end_is_final)) {
    case SyncScan::Found:
      return {SyncScan::Found, at};
    case SyncScan::NeedMore:
      return {SyncScan::NeedMore, at};
    case SyncScan::End:
      break;  // false marker, keep scanning
    }
  }
  return {SyncScan::End, 0};
}

std::optional<std::size_t> find_record_start(std::span<const std::uint8_t> bytes,
                                             std::size_t slab_start) {
  SyncResult result = scan_record_start(bytes, slab_start, true);
  if (result.status == SyncScan::Found) return result.offset;

  // Distinguish a clean tail from corruption: marker bytes that never
  // validate mean the stream cannot be framed from here.
  for (std::size_t at = slab_start; at + 2 <= bytes.size(); ++at) {
    if (bytes[at] == kSyncMarker[0] && bytes[at + 1] == kSyncMarker[1])
      throw CodecError("corrupt record stream: sync marker without valid chain");
  }
  return std::nullopt;
}

Ligand quantize_to_wire(Ligand ligand) {
  for (Atom &atom : ligand.atoms) {
    // Volatile stops the conversion pair from being vectorized away; gcc 11
    // drops the narrowing for two of the three components otherwise.
    for (int k = 0; k < 3; ++k) {
      volatile float narrowed = static_cast<float>(atom.position[k]);
      atom.position[k] = static_cast<double>(narrowed);
    }
  }
  return ligand;
}

}  // namespace vscreen
