//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <string>

#include "vscreen/error.hpp"
#include "vscreen/molmodel/binary_codec.hpp"
#include "vscreen/molmodel/mol2.hpp"
#include "vscreen/molmodel/smiles.hpp"

using namespace vscreen;

namespace {

Ligand sample_ligand() {
  Ligand mol = detect_torsions(parse_smiles("CC(C)C(=O)O"));
  // Spread the atoms out so coordinate formatting is exercised.
  for (std::size_t i = 0; i < mol.atoms.size(); ++i)
    mol.atoms[i].position =
        Eigen::Vector3d(1.5 * static_cast<double>(i), -0.25 * static_cast<double>(i),
                        0.125 * static_cast<double>(i * i));
  return mol;
}

}  // namespace

TEST_CASE("mol2 text structure") {
  const std::string text = write_mol2(sample_ligand());
  CHECK(text.find("@<TRIPOS>MOLECULE\n") == 0);
  CHECK(text.find("CC(C)C(=O)O") != std::string::npos);
  CHECK(text.find("@<TRIPOS>ATOM") != std::string::npos);
  CHECK(text.find("@<TRIPOS>BOND") != std::string::npos);
  CHECK(text.find(" 6 5 0 0 0") != std::string::npos);
  // The double bond keeps its type code.
  CHECK(text.find(" 2\n") != std::string::npos);
}

TEST_CASE("mol2 round-trip preserves graph and coordinates") {
  const Ligand original = sample_ligand();
  const Ligand back = read_mol2(write_mol2(original));

  REQUIRE(back.atoms.size() == original.atoms.size());
  REQUIRE(back.bonds.size() == original.bonds.size());
  CHECK(back.name == original.name);
  for (std::size_t i = 0; i < back.atoms.size(); ++i) {
    CHECK(back.atoms[i].element == original.atoms[i].element);
    CHECK(back.atoms[i].is_heavy == original.atoms[i].is_heavy);
    CHECK((back.atoms[i].position - original.atoms[i].position).norm() <= 1e-4);
  }
  for (std::size_t i = 0; i < back.bonds.size(); ++i)
    CHECK(back.bonds[i] == original.bonds[i]);
  CHECK(back.torsions == original.torsions);
}

TEST_CASE("mol2 round-trip keeps aromatic bonds") {
  const Ligand original = detect_torsions(parse_smiles("c1ccncc1"));
  const Ligand back = read_mol2(write_mol2(original));
  REQUIRE(back.bonds.size() == 6);
  for (const Bond &bond : back.bonds) CHECK(bond.order == BondOrder::Aromatic);
  CHECK(back.atoms[3].element == Element::N);
}

TEST_CASE("mol2 count mismatch is an error") {
  const std::string text = write_mol2(sample_ligand());

  SUBCASE("too few atom lines") {
    // Drop the last ATOM line: find the BOND header and remove the line
    // right before it.
    const std::size_t bond_at = text.find("@<TRIPOS>BOND");
    const std::size_t cut = text.rfind('\n', bond_at - 2);
    std::string broken = text.substr(0, cut + 1) + text.substr(bond_at);
    CHECK_THROWS_AS(read_mol2(broken), ParseError);
  }
  SUBCASE("declared count larger than lines") {
    std::string broken = text;
    const std::size_t at = broken.find(" 6 5 0 0 0");
    broken.replace(at, 2, " 7");
    CHECK_THROWS_AS(read_mol2(broken), ParseError);
  }
  SUBCASE("extra trailing atom line") {
    std::string broken = text;
    broken += "      9 C9 0.0 0.0 0.0 C\n";
    CHECK_THROWS_AS(read_mol2(broken), ParseError);
  }
}

TEST_CASE("mol2 malformed header is an error") {
  CHECK_THROWS_AS(read_mol2(""), ParseError);
  CHECK_THROWS_AS(read_mol2("@<TRIPOS>ATOM\n"), ParseError);
  CHECK_THROWS_AS(read_mol2("@<TRIPOS>MOLECULE\nname\n"), ParseError);
  CHECK_THROWS_AS(read_mol2("@<TRIPOS>MOLECULE\nname\nnot_a_count x 0 0 0\n"),
                  ParseError);
}

TEST_CASE("mol2 is at least three times larger than the binary record") {
  // Build a 20+ atom ligand the way the pipeline stores them.
  const Ligand mol = detect_torsions(parse_smiles("CCCCCCCCCCCCCCCCCCCC"));
  REQUIRE(mol.atoms.size() >= 20);
  const std::size_t binary_size = encode_record(mol).size();
  const std::size_t text_size = write_mol2(mol).size();
  CHECK(text_size >= 3 * binary_size);
}
