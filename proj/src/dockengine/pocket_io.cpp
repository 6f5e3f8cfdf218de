//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "vscreen/dockengine/pocket_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "vscreen/error.hpp"

namespace vscreen {

namespace {

// Large enough to round-trip any double exactly.
constexpr char kDoubleFormat[] = "%.17g";

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), kDoubleFormat, value);
  return buf;
}

class PocketCursor {
public:
  explicit PocketCursor(std::string_view text) : text_(text) {}

  // Next non-empty line; false at end. line_offset() reports where the
  // returned line started.
  bool next(std::string &line) {
    while (at_ < text_.size()) {
      const std::size_t start = at_;
      std::size_t eol = text_.find('\n', at_);
      if (eol == std::string_view::npos) eol = text_.size();
      line.assign(text_.substr(at_, eol - at_));
      if (!line.empty() && line.back() == '\r') line.pop_back();
      at_ = eol + 1;
      if (line.find_first_not_of(" \t") != std::string::npos) {
        offset_ = start;
        return true;
      }
    }
    return false;
  }

  // Everything after the last consumed line.
  std::string_view rest() const {
    return at_ < text_.size() ? text_.substr(at_) : std::string_view{};
  }

  std::size_t line_offset() const { return offset_; }

private:
  std::string_view text_;
  std::size_t at_ = 0;
  std::size_t offset_ = 0;
};

std::vector<std::string> fields_of(const std::string &line) {
  std::vector<std::string> fields;
  std::istringstream stream(line);
  std::string field;
  while (stream >> field) fields.push_back(std::move(field));
  return fields;
}

double parse_double(const std::string &field, const char *what,
                    std::size_t offset) {
  double value = 0.0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() ||
      !std::isfinite(value))
    throw ParseError(std::string("bad ") + what + " '" + field + "'", offset);
  return value;
}

long parse_long(const std::string &field, const char *what,
                std::size_t offset) {
  long value = 0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ParseError(std::string("bad ") + what + " '" + field + "'", offset);
  return value;
}

}  // namespace

Pocket read_pocket(std::string_view text) {
  PocketCursor cursor(text);
  std::string line;

  const auto demand = [&](const char *what) {
    if (!cursor.next(line))
      throw ParseError(std::string("missing ") + what + " line",
                       text.size());
  };

  Pocket pocket;

  demand("pocket");
  if (line != "pocket" && line.rfind("pocket ", 0) != 0)
    throw ParseError("expected 'pocket <id>'", cursor.line_offset());
  pocket.id = line.size() > 7 ? line.substr(7) : std::string();

  demand("origin");
  {
    const auto fields = fields_of(line);
    if (fields.size() != 4 || fields[0] != "origin")
      throw ParseError("expected 'origin <x> <y> <z>'", cursor.line_offset());
    for (int axis = 0; axis < 3; ++axis)
      pocket.origin[axis] =
          parse_double(fields[axis + 1], "origin coordinate", cursor.line_offset());
  }

  demand("spacing");
  {
    const auto fields = fields_of(line);
    if (fields.size() != 2 || fields[0] != "spacing")
      throw ParseError("expected 'spacing <h>'", cursor.line_offset());
    pocket.spacing = parse_double(fields[1], "spacing", cursor.line_offset());
    if (pocket.spacing < 0.25 || pocket.spacing > 1.0)
      throw ParseError("spacing must lie in [0.25, 1.0]", cursor.line_offset());
  }

  demand("dims");
  {
    const auto fields = fields_of(line);
    if (fields.size() != 4 || fields[0] != "dims")
      throw ParseError("expected 'dims <nx> <ny> <nz>'", cursor.line_offset());
    for (int axis = 0; axis < 3; ++axis) {
      const long n = parse_long(fields[axis + 1], "dimension", cursor.line_offset());
      if (n < 2 || n > 1024)
        throw ParseError("dimension must lie in [2, 1024]", cursor.line_offset());
      pocket.dims[axis] = static_cast<int>(n);
    }
  }
  const std::size_t value_count = static_cast<std::size_t>(pocket.dims[0]) *
                                  pocket.dims[1] * pocket.dims[2];
  if (value_count > (1u << 24))
    throw ParseError("grid too large", cursor.line_offset());

  demand("protein_atoms");
  const auto count_fields = fields_of(line);
  if (count_fields.size() != 2 || count_fields[0] != "protein_atoms")
    throw ParseError("expected 'protein_atoms <k>'", cursor.line_offset());
  const long atom_count =
      parse_long(count_fields[1], "protein atom count", cursor.line_offset());
  if (atom_count < 0 || atom_count > 100000)
    throw ParseError("unreasonable protein atom count", cursor.line_offset());

  pocket.protein_atoms.reserve(static_cast<std::size_t>(atom_count));
  for (long i = 0; i < atom_count; ++i) {
    demand("protein atom");
    const auto fields = fields_of(line);
    if (fields.size() != 4)
      throw ParseError("expected '<element> <x> <y> <z>'", cursor.line_offset());
    ProteinAtom atom;
    atom.element = element_from_symbol(fields[0]);
    for (int axis = 0; axis < 3; ++axis)
      atom.position[axis] =
          parse_double(fields[axis + 1], "atom coordinate", cursor.line_offset());
    pocket.protein_atoms.push_back(atom);
  }

  demand("grid");
  if (line != "grid")
    throw ParseError("expected 'grid'", cursor.line_offset());

  pocket.values.reserve(value_count);
  {
    const std::string_view rest = cursor.rest();
    const char *p = rest.data();
    const char *end = rest.data() + rest.size();
    while (true) {
      while (p != end && (*p == ' ' || *p == '\t' || *p == '\n' || *p == '\r'))
        ++p;
      if (p == end) break;
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(p, end, value);
      if (ec != std::errc() || !std::isfinite(value))
        throw ParseError("bad grid value",
                         static_cast<std::size_t>(p - text.data()));
      if (pocket.values.size() == value_count)
        throw ParseError("more grid values than dims declare",
                         static_cast<std::size_t>(p - text.data()));
      pocket.values.push_back(value);
      p = ptr;
    }
  }
  if (pocket.values.size() != value_count)
    throw ParseError("grid value count mismatch: expected " +
                         std::to_string(value_count) + ", got " +
                         std::to_string(pocket.values.size()),
                     text.size());
  return pocket;
}

std::string write_pocket(const Pocket &pocket) {
  std::string out = "pocket";
  if (!pocket.id.empty()) {
    out += ' ';
    out += pocket.id;
  }
  out += '\n';

  out += "origin " + format_double(pocket.origin.x()) + ' ' +
         format_double(pocket.origin.y()) + ' ' +
         format_double(pocket.origin.z()) + '\n';
  out += "spacing " + format_double(pocket.spacing) + '\n';
  out += "dims " + std::to_string(pocket.dims[0]) + ' ' +
         std::to_string(pocket.dims[1]) + ' ' + std::to_string(pocket.dims[2]) +
         '\n';
  out += "protein_atoms " + std::to_string(pocket.protein_atoms.size()) + '\n';
  for (const ProteinAtom &atom : pocket.protein_atoms) {
    out += element_symbol(atom.element);
    out += ' ';
    out += format_double(atom.position.x()) + ' ' +
           format_double(atom.position.y()) + ' ' +
           format_double(atom.position.z()) + '\n';
  }

  out += "grid\n";
  for (std::size_t i = 0; i < pocket.values.size(); ++i) {
    out += format_double(pocket.values[i]);
    out += (i % 8 == 7 || i + 1 == pocket.values.size()) ? '\n' : ' ';
  }
  return out;
}

Pocket read_pocket_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open pocket file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("cannot read pocket file '" + path + "'");
  return read_pocket(buffer.str());
}

void write_pocket_file(const std::string &path, const Pocket &pocket) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open pocket file '" + path + "' for writing");
  out << write_pocket(pocket);
  out.flush();
  if (!out) throw IoError("cannot write pocket file '" + path + "'");
}

}  // namespace vscreen
