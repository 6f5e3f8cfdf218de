//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vscreen {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Text input could not be parsed (SMILES, Mol2, pocket, tree files).
/// Carries the byte offset of the failure where one is meaningful.
class ParseError : public Error {
public:
  ParseError(const std::string &what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  explicit ParseError(const std::string &what) : Error(what), offset_(0) {}

  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

/// Binary record stream violation: bad sync marker, truncated record,
/// length mismatch, unsupported version, corrupt stream.
class CodecError : public Error {
public:
  using Error::Error;
};

/// Filesystem and I/O failures.
class IoError : public Error {
public:
  using Error::Error;
};

/// Precondition violations on otherwise well-formed data (valence
/// overflow, degenerate torsion axis, empty inputs, size limits).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

}  // namespace vscreen
