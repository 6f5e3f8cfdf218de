//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "vscreen/molmodel/mol2.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <vector>

#include "vscreen/error.hpp"

namespace vscreen {

namespace {

const char *bond_type_label(BondOrder order) {
  switch (order) {
  case BondOrder::Single:
    return "1";
  case BondOrder::Double:
    return "2";
  case BondOrder::Triple:
    return "3";
  case BondOrder::Aromatic:
    return "ar";
  }
  throw InvalidArgument("unknown bond order");
}

BondOrder bond_type_from_label(const std::string &label) {
  if (label == "1") return BondOrder::Single;
  if (label == "2") return BondOrder::Double;
  if (label == "3") return BondOrder::Triple;
  if (label == "ar") return BondOrder::Aromatic;
  throw ParseError("unknown bond type '" + label + "'");
}

std::vector<std::string> split_fields(const std::string &line) {
  std::vector<std::string> fields;
  std::istringstream stream(line);
  std::string field;
  while (stream >> field) fields.push_back(std::move(field));
  return fields;
}

long parse_count(const std::string &field, const char *what) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || value < 0)
    throw ParseError(std::string("bad ") + what + " count '" + field + "'");
  return value;
}

double parse_coord(const std::string &field) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ParseError("bad coordinate '" + field + "'");
  return value;
}

class LineCursor {
public:
  explicit LineCursor(std::string_view text) : text_(text) {}

  // Returns the next non-empty line, or false at end of text.
  bool next(std::string &line) {
    while (at_ < text_.size()) {
      std::size_t eol = text_.find('\n', at_);
      if (eol == std::string_view::npos) eol = text_.size();
      line.assign(text_.substr(at_, eol - at_));
      if (!line.empty() && line.back() == '\r') line.pop_back();
      at_ = eol + 1;
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  }

private:
  std::string_view text_;
  std::size_t at_ = 0;
};

}  // namespace

std::string write_mol2(const Ligand &ligand) {
  std::string out;
  out += "@<TRIPOS>MOLECULE\n";
  out += ligand.name.empty() ? "unnamed" : ligand.name;
  out += "\n";
  char buf[128];
  std::snprintf(buf, sizeof(buf), " %zu %zu 0 0 0\n", ligand.atoms.size(),
                ligand.bonds.size());
  out += buf;
  out += "SMALL\nNO_CHARGES\n";

  out += "@<TRIPOS>ATOM\n";
  for (std::size_t i = 0; i < ligand.atoms.size(); ++i) {
    const Atom &atom = ligand.atoms[i];
    const std::string symbol(element_symbol(atom.element));
    std::snprintf(buf, sizeof(buf), "%7zu %s%zu %12.4f %10.4f %10.4f %s\n",
                  i + 1, symbol.c_str(), i + 1, atom.position.x(),
                  atom.position.y(), atom.position.z(), symbol.c_str());
    out += buf;
  }

  out += "@<TRIPOS>BOND\n";
  for (std::size_t i = 0; i < ligand.bonds.size(); ++i) {
    const Bond &bond = ligand.bonds[i];
    std::snprintf(buf, sizeof(buf), "%6zu %5u %5u %s\n", i + 1, bond.a + 1,
                  bond.b + 1, bond_type_label(bond.order));
    out += buf;
  }
  return out;
}

Ligand read_mol2(std::string_view text) {
  LineCursor cursor(text);
  std::string line;

  if (!cursor.next(line) || line != "@<TRIPOS>MOLECULE")
    throw ParseError("expected @<TRIPOS>MOLECULE header");
  if (!cursor.next(line)) throw ParseError("missing molecule name line");

  Ligand ligand;
  ligand.name = line;

  if (!cursor.next(line)) throw ParseError("missing molecule counts line");
  auto counts = split_fields(line);
  if (counts.size() < 2) throw ParseError("molecule counts line needs atom and bond counts");
  const long n_atoms = parse_count(counts[0], "atom");
  const long n_bonds = parse_count(counts[1], "bond");

  // Skip molecule type and charge lines up to the ATOM section.
  bool have_atoms_header = false;
  while (cursor.next(line)) {
    if (line == "@<TRIPOS>ATOM") {
      have_atoms_header = true;
      break;
    }
    if (line.rfind("@<TRIPOS>", 0) == 0)
      throw ParseError("unexpected section '" + line + "' before ATOM");
  }
  if (!have_atoms_header) throw ParseError("missing @<TRIPOS>ATOM section");

  for (long i = 0; i < n_atoms; ++i) {
    if (!cursor.next(line) || line.rfind("@<TRIPOS>", 0) == 0)
      throw ParseError("declared " + std::to_string(n_atoms) +
                       " atoms but ATOM section ended early");
    auto fields = split_fields(line);
    if (fields.size() < 6) throw ParseError("atom line needs 6 fields");
    Atom atom;
    atom.position = Eigen::Vector3d(parse_coord(fields[2]), parse_coord(fields[3]),
                                    parse_coord(fields[4]));
    atom.element = element_from_symbol(fields[5]);
    atom.is_heavy = is_heavy_element(atom.element);
    ligand.atoms.push_back(atom);
  }

  if (n_bonds > 0) {
    if (!cursor.next(line) || line != "@<TRIPOS>BOND")
      throw ParseError("missing @<TRIPOS>BOND section");
    for (long i = 0; i < n_bonds; ++i) {
      if (!cursor.next(line) || line.rfind("@<TRIPOS>", 0) == 0)
        throw ParseError("declared " + std::to_string(n_bonds) +
                         " bonds but BOND section ended early");
      auto fields = split_fields(line);
      if (fields.size() < 4) throw ParseError("bond line needs 4 fields");
      const long a = parse_count(fields[1], "bond origin");
      const long b = parse_count(fields[2], "bond target");
      if (a < 1 || a > n_atoms || b < 1 || b > n_atoms || a == b)
        throw ParseError("bond references invalid atom ids");
      Bond bond;
      bond.a = static_cast<std::uint16_t>(a - 1);
      bond.b = static_cast<std::uint16_t>(b - 1);
      bond.order = bond_type_from_label(fields[3]);
      ligand.bonds.push_back(bond);
    }
  }

  // One extra atom or bond line means the declared counts were wrong.
  if (cursor.next(line) && line.rfind("@<TRIPOS>", 0) != 0)
    throw ParseError("more lines than declared counts");

  return detect_torsions(std::move(ligand));
}

}  // namespace vscreen
