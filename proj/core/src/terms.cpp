//
// Copyright 2026 The tfsam Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "tfsam/terms.hpp"

#include <algorithm>
#include <map>
#include <span>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "tfsam/lexer.hpp"

namespace tfsam {

namespace {

constexpr std::uint32_t kNone = ~std::uint32_t{0};

[[noreturn]] void term_error(const std::string &message, SourcePos pos) {
  throw TermError(std::to_string(pos.line) + ":" + std::to_string(pos.column) +
                  ": " + message);
}

// Term as written, before tag resolution.
struct RawNode {
  Term::Kind kind = Term::Kind::kFull;
  int tag = 0;
  TypeId type;
  std::vector<RawNode> children;
  SourcePos pos;
};

class RawReader {
 public:
  RawReader(TokenStream &in, const TypeHierarchy &h) : in_(in), h_(h) {}

  RawNode read() {
    RawNode node;
    node.pos = in_.peek().pos;
    if (in_.at(TokenKind::kTag)) {
      const Token &tag = in_.next();
      node.tag = tag_id(tag.text);
      if (!in_.at(TokenKind::kIdent)) {
        node.kind = Term::Kind::kBack;
        return node;
      }
    }
    const Token &name = in_.expect(TokenKind::kIdent, "type name or tag");
    auto type = h_.find_type(name.text);
    if (!type) term_error("unknown type '" + name.text + "'", name.pos);
    node.type = *type;
    const std::size_t arity = h_.arity(node.type);
    if (in_.accept(TokenKind::kLParen)) {
      do {
        node.children.push_back(read());
      } while (in_.accept(TokenKind::kComma));
      in_.expect(TokenKind::kRParen, "')'");
      if (node.children.size() != arity) {
        term_error("arity mismatch: '" + name.text + "' has arity " +
                       std::to_string(arity) + " but " +
                       std::to_string(node.children.size()) +
                       " arguments are given",
                   name.pos);
      }
    } else if (arity > 0) {
      node.kind = Term::Kind::kGeneral;
    }
    return node;
  }

  const std::map<int, std::string> &tag_names() const { return names_; }

 private:
  int tag_id(const std::string &text) {
    auto [it, inserted] =
        ids_.emplace(text, static_cast<int>(ids_.size()) + 1);
    if (inserted) names_.emplace(it->second, text);
    return it->second;
  }

  TokenStream &in_;
  const TypeHierarchy &h_;
  std::map<std::string, int> ids_;
  std::map<int, std::string> names_;
};

// Resolves tags of raw roots into a graph.
FsGraph resolve(const std::vector<RawNode> &roots,
                const std::map<int, std::string> &tag_names) {
  std::map<int, std::uint32_t> defined;
  std::map<int, SourcePos> first_back;
  FsGraph g;

  auto tag_text = [&](int tag) { return "#" + tag_names.at(tag); };

  auto allocate = [&](auto &&self, const RawNode &n) -> void {
    if (n.kind == Term::Kind::kBack) {
      first_back.emplace(n.tag, n.pos);
      return;
    }
    auto id = static_cast<std::uint32_t>(g.nodes.size());
    g.nodes.push_back({n.type, n.kind == Term::Kind::kGeneral, {}});
    if (n.tag != 0 && !defined.emplace(n.tag, id).second) {
      term_error("tag " + tag_text(n.tag) +
                     " has more than one contentful occurrence",
                 n.pos);
    }
    for (const auto &c : n.children) self(self, c);
  };
  for (const auto &r : roots) allocate(allocate, r);
  for (const auto &[tag, pos] : first_back) {
    if (!defined.count(tag)) {
      term_error("tag " + tag_text(tag) + " is never given a contentful occurrence",
                 pos);
    }
  }

  std::uint32_t next = 0;
  auto link = [&](auto &&self, const RawNode &n) -> std::uint32_t {
    if (n.kind == Term::Kind::kBack) return defined.at(n.tag);
    std::uint32_t id = next++;
    std::vector<std::uint32_t> arcs;
    arcs.reserve(n.children.size());
    for (const auto &c : n.children) arcs.push_back(self(self, c));
    g.nodes[id].arcs = std::move(arcs);
    return id;
  };
  for (const auto &r : roots) g.roots.push_back(link(link, r));

  // Keep only what the roots reach, renumbered in discovery order.
  FsGraph out;
  std::vector<std::uint32_t> remap(g.nodes.size(), kNone);
  std::vector<std::uint32_t> work;
  auto touch = [&](std::uint32_t n) {
    if (remap[n] == kNone) {
      remap[n] = static_cast<std::uint32_t>(out.nodes.size());
      out.nodes.push_back(g.nodes[n]);
      work.push_back(n);
    }
    return remap[n];
  };
  for (std::uint32_t r : g.roots) out.roots.push_back(touch(r));
  while (!work.empty()) {
    std::uint32_t n = work.back();
    work.pop_back();
    auto &arcs = out.nodes[remap[n]].arcs;
    for (auto &a : arcs) a = touch(a);
  }
  return out;
}

// Counts only references from nodes reachable from the given roots.
std::vector<std::size_t> in_degrees(const FsGraph &g, std::span<const std::uint32_t> roots) {
  std::vector<std::size_t> deg(g.nodes.size(), 0);
  std::vector<char> seen(g.nodes.size(), 0);
  std::vector<std::uint32_t> todo(roots.begin(), roots.end());
  for (std::uint32_t r : roots) ++deg[r];
  while (!todo.empty()) {
    std::uint32_t n = todo.back();
    todo.pop_back();
    if (seen[n]) continue;
    seen[n] = 1;
    for (std::uint32_t a : g.nodes[n].arcs) {
      ++deg[a];
      todo.push_back(a);
    }
  }
  return deg;
}

std::vector<std::size_t> in_degrees(const FsGraph &g) { return in_degrees(g, g.roots); }

}  // namespace

Term read_term(TokenStream &in, const TypeHierarchy &h) {
  RawReader reader(in, h);
  std::vector<RawNode> roots{reader.read()};
  return to_term(resolve(roots, reader.tag_names()));
}

Mrs read_mrs(TokenStream &in, const TypeHierarchy &h) {
  RawReader reader(in, h);
  std::vector<RawNode> roots{reader.read()};
  bool has_head = false;
  while (true) {
    if (in.accept(TokenKind::kComma)) {
      roots.push_back(reader.read());
    } else if (in.accept(TokenKind::kArrow)) {
      roots.push_back(reader.read());
      has_head = true;
      break;
    } else {
      break;
    }
  }
  return to_mrs(resolve(roots, reader.tag_names()), has_head);
}

Term parse_term(std::string_view text, const TypeHierarchy &h) {
  TokenStream in(tokenize(text));
  Term t = read_term(in, h);
  if (!in.at_end()) in.fail("unexpected '" + in.peek().text + "' after term");
  return t;
}

Mrs parse_mrs(std::string_view text, const TypeHierarchy &h) {
  TokenStream in(tokenize(text));
  Mrs m = read_mrs(in, h);
  if (!in.at_end()) in.fail("unexpected '" + in.peek().text + "' after MRS");
  return m;
}

// ---------------------------------------------------------------------------
// Graph conversions

namespace {

// Two passes: allocate contentful nodes in preorder, then link arcs and
// back-references through the tag table.
FsGraph build_graph(const std::vector<Term> &roots) {
  FsGraph g;
  std::map<int, std::uint32_t> tags;

  auto allocate = [&](auto &&self, const Term &t) -> void {
    if (t.kind == Term::Kind::kBack) return;
    auto id = static_cast<std::uint32_t>(g.nodes.size());
    g.nodes.push_back({t.type, t.kind == Term::Kind::kGeneral, {}});
    if (t.tag != 0) tags[t.tag] = id;
    for (const auto &c : t.children) self(self, c);
  };
  for (const auto &r : roots) allocate(allocate, r);

  std::uint32_t next = 0;
  auto link = [&](auto &&self, const Term &t) -> std::uint32_t {
    if (t.kind == Term::Kind::kBack) {
      auto it = tags.find(t.tag);
      if (it == tags.end()) {
        throw TermError("tag #" + std::to_string(t.tag) +
                        " is never given a contentful occurrence");
      }
      return it->second;
    }
    std::uint32_t id = next++;
    std::vector<std::uint32_t> arcs;
    arcs.reserve(t.children.size());
    for (const auto &c : t.children) arcs.push_back(self(self, c));
    g.nodes[id].arcs = std::move(arcs);
    return id;
  };
  for (const auto &r : roots) g.roots.push_back(link(link, r));
  return g;
}

}  // namespace

FsGraph to_graph(const Term &t) { return build_graph({t}); }
FsGraph to_graph(const Mrs &m) { return build_graph(m.roots); }

namespace {

class TermBuilder {
 public:
  TermBuilder(const FsGraph &g, std::span<const std::uint32_t> roots)
      : g_(g), deg_(in_degrees(g, roots)), tag_(g.nodes.size(), -1) {}

  Term build(std::uint32_t n) {
    if (tag_[n] >= 0) return Term::back(tag_[n]);
    const auto &node = g_.nodes[n];
    int tag = 0;
    if (deg_[n] > 1) tag = ++next_tag_;
    tag_[n] = tag;
    if (node.general) return Term::general(node.type, tag);
    Term t = Term::full(node.type, {}, tag);
    t.children.reserve(node.arcs.size());
    for (std::uint32_t a : node.arcs) t.children.push_back(build(a));
    return t;
  }

 private:
  const FsGraph &g_;
  std::vector<std::size_t> deg_;
  std::vector<int> tag_;  // -1 unvisited, 0 visited untagged
  int next_tag_ = 0;
};

}  // namespace

Term to_term(const FsGraph &g, std::size_t root_index) {
  const std::uint32_t root = g.roots.at(root_index);
  TermBuilder b(g, std::span(&root, 1));
  return b.build(root);
}

Mrs to_mrs(const FsGraph &g, bool has_head) {
  TermBuilder b(g, g.roots);
  Mrs m;
  m.has_head = has_head;
  for (std::uint32_t r : g.roots) m.roots.push_back(b.build(r));
  return m;
}

FsGraph concat(const FsGraph &a, const FsGraph &b) {
  FsGraph out = a;
  auto offset = static_cast<std::uint32_t>(a.nodes.size());
  for (auto n : b.nodes) {
    for (auto &arc : n.arcs) arc += offset;
    out.nodes.push_back(std::move(n));
  }
  for (std::uint32_t r : b.roots) out.roots.push_back(r + offset);
  return out;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print_term(const Term &t, const TypeHierarchy &h, std::string &out) {
  if (t.tag != 0) {
    out += '#';
    out += std::to_string(t.tag);
    if (t.kind == Term::Kind::kBack) return;
    out += ' ';
  }
  out += h.type_name(t.type);
  if (t.kind == Term::Kind::kGeneral || t.children.empty()) return;
  out += '(';
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (i) out += ',';
    print_term(t.children[i], h, out);
  }
  out += ')';
}

}  // namespace

std::string print(const Term &t, const TypeHierarchy &h) {
  std::string out;
  print_term(t, h, out);
  return out;
}

std::string print(const Mrs &m, const TypeHierarchy &h) {
  std::string out;
  for (std::size_t i = 0; i < m.roots.size(); ++i) {
    if (i) out += (m.has_head && i + 1 == m.roots.size()) ? " => " : ", ";
    print_term(m.roots[i], h, out);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Isomorphism

bool iso(const FsGraph &a, const FsGraph &b) {
  if (a.roots.size() != b.roots.size()) return false;
  std::vector<std::uint32_t> ab(a.nodes.size(), kNone);
  std::vector<std::uint32_t> ba(b.nodes.size(), kNone);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> work;
  auto pair_up = [&](std::uint32_t x, std::uint32_t y) {
    if (ab[x] == kNone && ba[y] == kNone) {
      ab[x] = y;
      ba[y] = x;
      work.emplace_back(x, y);
      return true;
    }
    return ab[x] == y && ba[y] == x;
  };
  for (std::size_t i = 0; i < a.roots.size(); ++i)
    if (!pair_up(a.roots[i], b.roots[i])) return false;
  while (!work.empty()) {
    auto [x, y] = work.back();
    work.pop_back();
    const auto &nx = a.nodes[x];
    const auto &ny = b.nodes[y];
    if (nx.type != ny.type || nx.general != ny.general ||
        nx.arcs.size() != ny.arcs.size())
      return false;
    for (std::size_t i = 0; i < nx.arcs.size(); ++i)
      if (!pair_up(nx.arcs[i], ny.arcs[i])) return false;
  }
  return true;
}

bool iso(const Term &a, const Term &b) { return iso(to_graph(a), to_graph(b)); }

bool iso(const Mrs &a, const Mrs &b) {
  return a.has_head == b.has_head && iso(to_graph(a), to_graph(b));
}

// ---------------------------------------------------------------------------
// Well-typedness

namespace {

std::vector<TypeViolation> check_graph(const FsGraph &g, const TypeHierarchy &h) {
  std::vector<TypeViolation> out;
  std::vector<char> seen(g.nodes.size(), 0);
  std::vector<std::pair<std::uint32_t, std::string>> work;
  for (auto it = g.roots.rbegin(); it != g.roots.rend(); ++it) work.emplace_back(*it, "");
  while (!work.empty()) {
    auto [n, path] = std::move(work.back());
    work.pop_back();
    if (seen[n]) continue;
    seen[n] = 1;
    const auto &node = g.nodes[n];
    auto feats = h.features(node.type);
    for (std::size_t i = node.arcs.size(); i-- > 0;) {
      TypeId expected = h.arc_type(node.type, i);
      TypeId found = g.nodes[node.arcs[i]].type;
      std::string sub = path.empty() ? std::string(h.feature_name(feats[i]))
                                     : path + "." + std::string(h.feature_name(feats[i]));
      if (!h.subsumes(expected, found)) out.push_back({sub, expected, found});
      work.emplace_back(node.arcs[i], std::move(sub));
    }
  }
  std::sort(out.begin(), out.end(), [](const auto &x, const auto &y) { return x.path < y.path; });
  return out;
}

}  // namespace

std::vector<TypeViolation> well_typed_check(const Term &t, const TypeHierarchy &h) {
  return check_graph(to_graph(t), h);
}

std::vector<TypeViolation> well_typed_check(const Mrs &m, const TypeHierarchy &h) {
  return check_graph(to_graph(m), h);
}

std::string describe(const TypeViolation &v, const TypeHierarchy &h) {
  return (v.path.empty() ? std::string("<root>") : v.path) + ": expected " +
         std::string(h.type_name(v.expected)) + ", found " +
         std::string(h.type_name(v.found));
}

// ---------------------------------------------------------------------------
// General (most general) nodes

Term expand_general(const Term &t, const TypeHierarchy &h) {
  FsGraph g = to_graph(t);
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    if (!g.nodes[n].general) continue;
    TypeId type = g.nodes[n].type;
    if (!h.finitely_expandable(type)) {
      throw TermError("cannot expand '" + std::string(h.type_name(type)) +
                      "': appropriateness loop");
    }
    std::vector<std::uint32_t> arcs;
    for (std::size_t i = 0; i < h.arity(type); ++i) {
      TypeId v = h.arc_type(type, i);
      arcs.push_back(static_cast<std::uint32_t>(g.nodes.size()));
      g.nodes.push_back({v, h.arity(v) > 0, {}});
    }
    g.nodes[n].general = false;
    g.nodes[n].arcs = std::move(arcs);
  }
  return to_term(g);
}

Term collapse_general(const Term &t, const TypeHierarchy &h) {
  FsGraph g = to_graph(t);
  auto deg = in_degrees(g);
  enum : char { kUnknown, kBusy, kYes, kNo };
  std::vector<char> state(g.nodes.size(), kUnknown);

  auto collapsible = [&](auto &&self, std::uint32_t n) -> bool {
    if (state[n] == kYes) return true;
    if (state[n] != kUnknown) return false;
    state[n] = kBusy;
    const auto &node = g.nodes[n];
    bool ok = !node.general && !node.arcs.empty();
    for (std::size_t i = 0; ok && i < node.arcs.size(); ++i) {
      std::uint32_t c = node.arcs[i];
      const auto &child = g.nodes[c];
      ok = deg[c] == 1 && child.type == h.arc_type(node.type, i) &&
           (child.general || h.arity(child.type) == 0 || self(self, c));
    }
    state[n] = ok ? kYes : kNo;
    return ok;
  };
  for (std::uint32_t n = 0; n < g.nodes.size(); ++n) {
    if (collapsible(collapsible, n)) {
      g.nodes[n].general = true;
      g.nodes[n].arcs.clear();
    }
  }
  // Normalization through to_term drops the now unreachable nodes.
  return to_term(g);
}

// ---------------------------------------------------------------------------
// Flattening

EquationSet flatten(const FsGraph &g) {
  EquationSet out;
  std::vector<std::uint32_t> reg(g.nodes.size(), 0);
  std::vector<char> emitted(g.nodes.size(), 0);
  std::uint32_t next = 1;

  auto emit = [&](auto &&self, std::uint32_t n, std::size_t root) -> void {
    if (emitted[n]) return;
    emitted[n] = 1;
    const auto &node = g.nodes[n];
    Equation eq;
    eq.reg = reg[n];
    eq.type = node.type;
    eq.general = node.general;
    eq.root_index = root;
    for (std::uint32_t a : node.arcs) {
      if (!reg[a]) reg[a] = next++;
      eq.args.push_back(reg[a]);
    }
    out.equations.push_back(std::move(eq));
    for (std::uint32_t a : node.arcs) self(self, a, root);
  };
  for (std::size_t i = 0; i < g.roots.size(); ++i) {
    std::uint32_t r = g.roots[i];
    if (!reg[r]) reg[r] = next++;
    out.root_regs.push_back(reg[r]);
    emit(emit, r, i);
  }
  out.register_count = next - 1;
  return out;
}

EquationSet flatten(const Term &t) { return flatten(to_graph(t)); }
EquationSet flatten(const Mrs &m) { return flatten(to_graph(m)); }

std::string print(const EquationSet &eqs, const TypeHierarchy &h) {
  std::string out;
  for (const auto &eq : eqs.equations) {
    out += "X" + std::to_string(eq.reg) + " = " + std::string(h.type_name(eq.type));
    if (!eq.args.empty()) {
      out += '(';
      for (std::size_t i = 0; i < eq.args.size(); ++i) {
        if (i) out += ',';
        out += "X" + std::to_string(eq.args[i]);
      }
      out += ')';
    }
    out += '\n';
  }
  return out;
}

}  // namespace tfsam
