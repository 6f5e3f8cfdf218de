//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "vscreen/molmodel/smiles.hpp"

#include <array>
#include <optional>
#include <vector>

#include "vscreen/error.hpp"

namespace vscreen {

namespace {

struct RingOpening {
  std::uint16_t atom = 0xFFFF;  // 0xFFFF: slot not open
  std::optional<BondOrder> order;
  std::size_t offset = 0;
};

BondOrder order_from_symbol(char c) {
  switch (c) {
  case '-':
    return BondOrder::Single;
  case '=':
    return BondOrder::Double;
  case '#':
    return BondOrder::Triple;
  default:
    return BondOrder::Aromatic;  // ':'
  }
}

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  Ligand run() {
    if (text_.empty()) fail("empty SMILES", 0);
    while (pos_ < text_.size()) step();
    finish();
    ligand_.name = std::string(text_);
    return std::move(ligand_);
  }

private:
  [[noreturn]] void fail(const std::string &msg, std::size_t offset) {
    throw ParseError("SMILES syntax error: " + msg, offset);
  }
  [[noreturn]] void unsupported(const std::string &feature, std::size_t offset) {
    throw ParseError("SMILES unsupported feature: " + feature, offset);
  }

  void step() {
    const char c = text_[pos_];
    switch (c) {
    case '(':
      if (prev_ < 0) fail("branch before any atom", pos_);
      if (pending_) fail("bond symbol before '('", pos_);
      branch_stack_.push_back(prev_);
      ++pos_;
      return;
    case ')':
      if (branch_stack_.empty()) fail("unmatched ')'", pos_);
      if (pending_) fail("bond symbol before ')'", pos_);
      prev_ = branch_stack_.back();
      branch_stack_.pop_back();
      ++pos_;
      return;
    case '-':
    case '=':
    case '#':
    case ':':
      if (prev_ < 0) fail("bond symbol before any atom", pos_);
      if (pending_) fail("consecutive bond symbols", pos_);
      pending_ = order_from_symbol(c);
      pending_offset_ = pos_;
      ++pos_;
      return;
    case '[':
      unsupported("bracket atoms", pos_);
    case '%':
      unsupported("two-digit ring closures", pos_);
    case '/':
    case '\\':
      unsupported("stereo bond markers", pos_);
    case '@':
      unsupported("stereochemistry", pos_);
    case '+':
      unsupported("charges", pos_);
    case '*':
      unsupported("wildcard atoms", pos_);
    case '.':
      throw ParseError("disconnected molecule: '.' separator", pos_);
    case '0':
      fail("ring closure digit must be 1-9", pos_);
    default:
      if (c >= '1' && c <= '9') {
        ring_digit(static_cast<std::size_t>(c - '1'));
        ++pos_;
        return;
      }
      atom();
      return;
    }
  }

  void ring_digit(std::size_t slot) {
    if (prev_ < 0) fail("ring closure before any atom", pos_);
    RingOpening &open = rings_[slot];
    if (open.atom == kNoAtom) {
      open = {static_cast<std::uint16_t>(prev_), pending_, pos_};
      pending_.reset();
      return;
    }
    if (open.atom == prev_) fail("ring bond to the same atom", pos_);
    std::optional<BondOrder> order = pending_;
    if (order && open.order && *order != *open.order)
      fail("ring bond order mismatch", pos_);
    if (!order) order = open.order;
    add_bond(open.atom, static_cast<std::uint16_t>(prev_), order, pos_);
    rings_[slot] = {kNoAtom, std::nullopt, 0};
    pending_.reset();
  }

  void atom() {
    const std::size_t at = pos_;
    const char c = text_[pos_];
    Element element;
    bool aromatic = false;
    if (c == 'C' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'l') {
      element = Element::Cl;
      pos_ += 2;
    } else if (c == 'B' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'r') {
      element = Element::Br;
      pos_ += 2;
    } else {
      switch (c) {
      case 'C': element = Element::C; break;
      case 'N': element = Element::N; break;
      case 'O': element = Element::O; break;
      case 'S': element = Element::S; break;
      case 'P': element = Element::P; break;
      case 'F': element = Element::F; break;
      case 'I': element = Element::I; break;
      case 'B': element = Element::Other; break;  // boron: outside the enum
      case 'c': element = Element::C; aromatic = true; break;
      case 'n': element = Element::N; aromatic = true; break;
      case 'o': element = Element::O; aromatic = true; break;
      case 's': element = Element::S; aromatic = true; break;
      default:
        fail(std::string("unexpected character '") + c + "'", pos_);
      }
      ++pos_;
    }

    if (ligand_.atoms.size() >= 65535) fail("too many atoms", at);
    const auto index = static_cast<std::uint16_t>(ligand_.atoms.size());
    ligand_.atoms.push_back({element, Eigen::Vector3d::Zero(), true});
    aromatic_.push_back(aromatic);
    if (prev_ >= 0)
      add_bond(static_cast<std::uint16_t>(prev_), index, pending_, at);
    pending_.reset();
    prev_ = index;
  }

  void add_bond(std::uint16_t a, std::uint16_t b,
                std::optional<BondOrder> order, std::size_t offset) {
    for (const Bond &bond : ligand_.bonds) {
      if ((bond.a == a && bond.b == b) || (bond.a == b && bond.b == a))
        fail("duplicate bond between atoms", offset);
    }
    BondOrder resolved = order.value_or(
        (aromatic_[a] && aromatic_[b]) ? BondOrder::Aromatic : BondOrder::Single);
    ligand_.bonds.push_back({a, b, resolved});
  }

  void finish() {
    if (pending_) fail("dangling bond symbol", pending_offset_);
    if (!branch_stack_.empty()) fail("unclosed branch", text_.size());
    for (std::size_t i = 0; i < rings_.size(); ++i) {
      if (rings_[i].atom != kNoAtom)
        fail("unclosed ring bond " + std::to_string(i + 1), rings_[i].offset);
    }
    if (ligand_.atoms.empty()) fail("no atoms", 0);
    if (!is_connected(ligand_))
      throw ParseError("disconnected molecule");
  }

  static constexpr std::uint16_t kNoAtom = 0xFFFF;

  std::string_view text_;
  std::size_t pos_ = 0;
  int prev_ = -1;
  std::optional<BondOrder> pending_;
  std::size_t pending_offset_ = 0;
  std::vector<int> branch_stack_;
  std::array<RingOpening, 9> rings_{};
  std::vector<bool> aromatic_;
  Ligand ligand_;
};

}  // namespace

Ligand parse_smiles(std::string_view text) {
  Parser parser(text);
  return parser.run();
}

FeatureVector graph_features(const Ligand &ligand) {
  const auto bridges = bridge_bonds(ligand);
  double chains = 0;
  for (std::size_t i = 0; i < ligand.bonds.size(); ++i) {
    const Bond &bond = ligand.bonds[i];
    if (bridges[i] && ligand.atoms[bond.a].is_heavy &&
        ligand.atoms[bond.b].is_heavy)
      chains += 1;
  }
  double heavy = 0;
  std::size_t heavy_bonds = 0;
  for (const Atom &a : ligand.atoms) heavy += a.is_heavy ? 1 : 0;
  for (const Bond &b : ligand.bonds)
    if (ligand.atoms[b.a].is_heavy && ligand.atoms[b.b].is_heavy) ++heavy_bonds;
  // Connected by construction: cyclomatic number with one component.
  const double rings =
      static_cast<double>(heavy_bonds) - heavy + 1.0;

  FeatureVector f;
  f << heavy, rings, chains, heavy * rings, heavy * chains, rings * chains;
  return f;
}

FeatureVector smiles_features(std::string_view text) {
  return graph_features(parse_smiles(text));
}

}  // namespace vscreen
