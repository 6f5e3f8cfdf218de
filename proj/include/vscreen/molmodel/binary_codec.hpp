//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "vscreen/molmodel/ligand.hpp"

namespace vscreen {

// Ligand record stream (".xslb" payload after the 8-byte file header):
//   sync 0xD0 0xC5 | record_len u32 LE (bytes after this field) |
//   name_len u16 LE | name | n_atoms u16 | n_bonds u16 | n_torsions u16 |
//   per atom: x,y,z f32 LE, element u8, flags u8 (bit0 = is_heavy) |
//   per bond: a u16, b u16, order u8 | per torsion: bond_index u16.

inline constexpr std::uint8_t kSyncMarker[2] = {0xD0, 0xC5};
inline constexpr std::uint8_t kFileMagic[4] = {'X', 'S', 'L', 'B'};
inline constexpr std::uint8_t kFormatVersion = 1;
inline constexpr std::size_t kFileHeaderSize = 8;

/// 8-byte file header: magic, version, three reserved zero bytes.
std::vector<std::uint8_t> xslb_header();

/// Validates the header; throws CodecError (bad magic, unknown version).
void check_xslb_header(std::span<const std::uint8_t> bytes);

/// Serializes one ligand record (marker + framing + payload).
/// Coordinates are truncated to 32-bit floats.
std::vector<std::uint8_t> encode_record(const Ligand &ligand);

/// Decodes the record starting exactly at `offset`; returns the ligand and
/// the offset one past the record. Torsion partitions are rebuilt from the
/// graph. Throws CodecError on framing or payload violations.
std::pair<Ligand, std::size_t> decode_record(std::span<const std::uint8_t> bytes,
                                             std::size_t offset);

enum class SyncScan {
  Found,     // a validated record start
  End,       // no candidate marker at or after the start offset
  NeedMore,  // chain walks past the end of a non-final buffer
};

struct SyncResult {
  SyncScan status = SyncScan::End;
  std::size_t offset = 0;
};

/// Streaming-aware scan used by the splitter: `end_is_final` is false while
/// more bytes may still arrive. A candidate validates by chaining two record
/// lengths (or reaching the end of the data). Never throws.
SyncResult scan_record_start(std::span<const std::uint8_t> bytes,
                             std::size_t from, bool end_is_final);

/// Smallest validated record-start offset >= slab_start, or an empty optional
/// when no record starts there (end of data). Throws CodecError when sync
/// markers exist after slab_start but none validates a chain.
std::optional<std::size_t> find_record_start(std::span<const std::uint8_t> bytes,
                                             std::size_t slab_start);

/// Rounds atom positions through the 32-bit wire representation, making the
/// in-memory ligand bit-identical to its encoded/decoded form.
Ligand quantize_to_wire(Ligand ligand);

}  // namespace vscreen
