//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <string_view>

namespace vscreen {

/// Element codes are part of the binary wire format; values are stable.
enum class Element : std::uint8_t {
  C = 0,
  N = 1,
  O = 2,
  S = 3,
  P = 4,
  F = 5,
  Cl = 6,
  Br = 7,
  I = 8,
  H = 9,
  Other = 10,
};

inline constexpr std::uint8_t kMaxElementCode = 10;

/// Interaction class used by the chemical rescoring function.
enum class ChemClass : std::uint8_t { Hydrophobic, Polar, Other };

constexpr bool is_heavy_element(Element e) { return e != Element::H; }

constexpr ChemClass chem_class(Element e) {
  switch (e) {
  case Element::C:
    return ChemClass::Hydrophobic;
  case Element::N:
  case Element::O:
    return ChemClass::Polar;
  default:
    return ChemClass::Other;
  }
}

/// Standard valence used when adding implicit hydrogens. Elements with
/// no conventional cap (Other) return 0 and never receive hydrogens.
constexpr int standard_valence(Element e) {
  switch (e) {
  case Element::C:
    return 4;
  case Element::N:
    return 3;
  case Element::O:
    return 2;
  case Element::S:
    return 2;
  case Element::P:
    return 3;
  case Element::F:
  case Element::Cl:
  case Element::Br:
  case Element::I:
  case Element::H:
    return 1;
  case Element::Other:
    return 0;
  }
  return 0;
}

constexpr std::string_view element_symbol(Element e) {
  switch (e) {
  case Element::C:
    return "C";
  case Element::N:
    return "N";
  case Element::O:
    return "O";
  case Element::S:
    return "S";
  case Element::P:
    return "P";
  case Element::F:
    return "F";
  case Element::Cl:
    return "Cl";
  case Element::Br:
    return "Br";
  case Element::I:
    return "I";
  case Element::H:
    return "H";
  case Element::Other:
    return "Du";
  }
  return "Du";
}

/// Symbol lookup for text formats. Unknown symbols map to Element::Other.
inline Element element_from_symbol(std::string_view s) {
  if (s == "C") return Element::C;
  if (s == "N") return Element::N;
  if (s == "O") return Element::O;
  if (s == "S") return Element::S;
  if (s == "P") return Element::P;
  if (s == "F") return Element::F;
  if (s == "Cl") return Element::Cl;
  if (s == "Br") return Element::Br;
  if (s == "I") return Element::I;
  if (s == "H") return Element::H;
  return Element::Other;
}

}  // namespace vscreen
