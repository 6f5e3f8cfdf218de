//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "vscreen/pipeline/io.hpp"

#include <algorithm>
#include <cstring>

#include "vscreen/error.hpp"

namespace vscreen {

std::size_t MemorySource::read_at(std::uint64_t offset,
                                  std::span<std::uint8_t> out) {
  if (offset >= bytes_.size()) return 0;
  const std::size_t n =
      std::min<std::uint64_t>(out.size(), bytes_.size() - offset);
  std::memcpy(out.data(), bytes_.data() + offset, n);
  return n;
}

FileSource::FileSource(const std::string &path)
    : in_(path, std::ios::binary), path_(path) {
  if (!in_) throw IoError("cannot open input file '" + path + "'");
  in_.seekg(0, std::ios::end);
  size_ = static_cast<std::uint64_t>(in_.tellg());
}

std::size_t FileSource::read_at(std::uint64_t offset,
                                std::span<std::uint8_t> out) {
  if (offset >= size_) return 0;
  in_.clear();
  in_.seekg(static_cast<std::streamoff>(offset));
  in_.read(reinterpret_cast<char *>(out.data()),
           static_cast<std::streamsize>(out.size()));
  const std::streamsize n = in_.gcount();
  if (in_.bad()) throw IoError("read failed on '" + path_ + "'");
  return static_cast<std::size_t>(n);
}

FileSink::FileSink(const std::string &path)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path) {
  if (!out_) throw IoError("cannot open output file '" + path + "'");
}

void FileSink::write(std::string_view bytes) {
  out_.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out_) throw IoError("write failed on '" + path_ + "'");
}

void FileSink::finish() {
  out_.flush();
  if (!out_) throw IoError("flush failed on '" + path_ + "'");
}

}  // namespace vscreen
