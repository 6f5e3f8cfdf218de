//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vscreen {

/// Positioned byte input. The pipeline reader only ever asks for ascending,
/// adjacent ranges; the interface keeps the offset explicit so tests can
/// wrap a source and verify that access pattern.
class ByteSource {
 public:
  virtual ~ByteSource() = default;
  virtual std::uint64_t size() const = 0;
  /// Copies up to out.size() bytes starting at offset; returns the count,
  /// 0 at end of data. Throws IoError on read failure.
  virtual std::size_t read_at(std::uint64_t offset,
                              std::span<std::uint8_t> out) = 0;
};

class MemorySource final : public ByteSource {
 public:
  explicit MemorySource(std::vector<std::uint8_t> bytes)
      : bytes_(std::move(bytes)) {}

  std::uint64_t size() const override { return bytes_.size(); }
  std::size_t read_at(std::uint64_t offset,
                      std::span<std::uint8_t> out) override;

 private:
  std::vector<std::uint8_t> bytes_;
};

class FileSource final : public ByteSource {
 public:
  /// Throws IoError when the file cannot be opened.
  explicit FileSource(const std::string &path);

  std::uint64_t size() const override { return size_; }
  std::size_t read_at(std::uint64_t offset,
                      std::span<std::uint8_t> out) override;

 private:
  std::ifstream in_;
  std::string path_;
  std::uint64_t size_ = 0;
};

/// Byte output for the writer stage. Each write call is one physical write,
/// which is what the coalescing tests count.
class Sink {
 public:
  virtual ~Sink() = default;
  virtual void write(std::string_view bytes) = 0;
  virtual void finish() {}
};

/// Collects writes in memory and counts them.
class StringSink final : public Sink {
 public:
  void write(std::string_view bytes) override {
    data_ += bytes;
    ++write_calls_;
  }

  const std::string &data() const { return data_; }
  std::uint64_t write_calls() const { return write_calls_; }

 private:
  std::string data_;
  std::uint64_t write_calls_ = 0;
};

class FileSink final : public Sink {
 public:
  /// Throws IoError when the file cannot be created.
  explicit FileSink(const std::string &path);

  void write(std::string_view bytes) override;
  void finish() override;

 private:
  std::ofstream out_;
  std::string path_;
};

}  // namespace vscreen
