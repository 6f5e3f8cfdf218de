//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <string_view>

#include "vscreen/molmodel/pocket.hpp"

namespace vscreen {

/// Parses the text pocket format:
///
///   pocket <id>
///   origin <x> <y> <z>
///   spacing <h>
///   dims <nx> <ny> <nz>
///   protein_atoms <k>
///   <element> <x> <y> <z>          (k lines)
///   grid
///   <nx*ny*nz values, x fastest>
///
/// Whitespace between grid values is free-form. Every dimension must be
/// at least 2 (the sampler interpolates between nodes) and the value
/// count must match the dims exactly. Unlike build_pocket, a file with
/// zero protein atoms is accepted; such pockets score chemistry as zero.
///
/// Throws ParseError with the byte offset of the offending line.
Pocket read_pocket(std::string_view text);

/// Inverse of read_pocket. Doubles are written with enough digits to
/// round-trip bit-exactly.
std::string write_pocket(const Pocket &pocket);

/// File variants. Throw IoError when the file cannot be read or written.
Pocket read_pocket_file(const std::string &path);
void write_pocket_file(const std::string &path, const Pocket &pocket);

}  // namespace vscreen
