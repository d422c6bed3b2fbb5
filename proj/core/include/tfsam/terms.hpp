//
// Copyright 2026 The tfsam Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TFSAM_TERMS_HPP_
#define TFSAM_TERMS_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tfsam/typesys.hpp"

namespace tfsam {

class TokenStream;

// Linear notation of a totally well-typed feature structure: `type(a1,...)`
// with arguments in feature order, `#n` tags for reentrancy. A bare type
// name with non-zero arity abbreviates the most general structure of that
// type (kGeneral); for arity-0 types the two readings coincide and the node
// is kFull.
struct Term {
  enum class Kind : std::uint8_t { kFull, kBack, kGeneral };

  Kind kind = Kind::kFull;
  int tag = 0;  // 0: untagged
  TypeId type;  // unused for kBack
  std::vector<Term> children;

  static Term full(TypeId type, std::vector<Term> children = {}, int tag = 0) {
    return Term{Kind::kFull, tag, type, std::move(children)};
  }
  static Term general(TypeId type, int tag = 0) {
    return Term{Kind::kGeneral, tag, type, {}};
  }
  static Term back(int tag) { return Term{Kind::kBack, tag, {}, {}}; }

  friend bool operator==(const Term &, const Term &) = default;
};

// Multi-rooted structure: tags are scoped over all roots. For rules the last
// root is the head and has_head is set.
struct Mrs {
  std::vector<Term> roots;
  bool has_head = false;

  friend bool operator==(const Mrs &, const Mrs &) = default;
};

// Node/arc form of a term or MRS. Node ids are dense; every node is
// reachable from some root.
struct FsGraph {
  struct Node {
    TypeId type;
    bool general = false;
    std::vector<std::uint32_t> arcs;  // in feature order; empty if general
  };
  std::vector<Node> nodes;
  std::vector<std::uint32_t> roots;
};

// Parsing. Results are in normal form: each tag has one contentful (first)
// occurrence, tags are renumbered 1.. in order of first occurrence, and
// singleton tags are dropped. Throws SyntaxError or TermError.
Term parse_term(std::string_view text, const TypeHierarchy &h);
Mrs parse_mrs(std::string_view text, const TypeHierarchy &h);
// Read a term or a comma separated MRS (with optional `=> head`) from a
// token stream, stopping before the first token that cannot continue it.
Term read_term(TokenStream &in, const TypeHierarchy &h);
Mrs read_mrs(TokenStream &in, const TypeHierarchy &h);

std::string print(const Term &t, const TypeHierarchy &h);
std::string print(const Mrs &m, const TypeHierarchy &h);

FsGraph to_graph(const Term &t);
FsGraph to_graph(const Mrs &m);
// Normal-form term of the graph reachable from the given root.
Term to_term(const FsGraph &g, std::size_t root_index = 0);
Mrs to_mrs(const FsGraph &g, bool has_head = false);
// Disjoint union; roots of b follow roots of a.
FsGraph concat(const FsGraph &a, const FsGraph &b);

// Isomorphism of rooted graphs respecting types, arc positions, generality
// and reentrancy. Tag names are irrelevant.
bool iso(const FsGraph &a, const FsGraph &b);
bool iso(const Term &a, const Term &b);
bool iso(const Mrs &a, const Mrs &b);

struct TypeViolation {
  std::string path;  // dotted feature path from the root, "" for the root
  TypeId expected;   // approp(parent type, feature)
  TypeId found;
};

// Every arc value must be subsumed-by its appropriate type. Each shared node
// is checked once; violations are collected, never thrown.
std::vector<TypeViolation> well_typed_check(const Term &t,
                                            const TypeHierarchy &h);
std::vector<TypeViolation> well_typed_check(const Mrs &m,
                                            const TypeHierarchy &h);
std::string describe(const TypeViolation &v, const TypeHierarchy &h);

// Replaces general nodes by their full expansion. Throws TermError when an
// appropriateness loop makes the expansion infinite.
Term expand_general(const Term &t, const TypeHierarchy &h);
// Replaces unshared full subgraphs that equal the most general structure of
// their type by a general node. Canonical form for comparisons across lazy
// and expanded representations.
Term collapse_general(const Term &t, const TypeHierarchy &h);

// Flat form: one equation `Xreg = type(Xarg1, ...)` per node.
struct Equation {
  std::uint32_t reg = 0;  // 1-based register number
  TypeId type;
  bool general = false;
  std::vector<std::uint32_t> args;
  std::size_t root_index = 0;  // root whose traversal emitted the equation

  friend bool operator==(const Equation &, const Equation &) = default;
};

struct EquationSet {
  std::vector<Equation> equations;
  std::vector<std::uint32_t> root_regs;  // one per root
  std::uint32_t register_count = 0;
};

// Registers are allocated to a node when it is first met as a root or as an
// argument; equations are emitted in depth-first preorder. Numbering runs
// continuously across the roots of an MRS.
EquationSet flatten(const FsGraph &g);
EquationSet flatten(const Term &t);
EquationSet flatten(const Mrs &m);

std::string print(const EquationSet &eqs, const TypeHierarchy &h);

}  // namespace tfsam

#endif  // TFSAM_TERMS_HPP_
