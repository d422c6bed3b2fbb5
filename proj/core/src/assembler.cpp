//
// Copyright 2026 The tfsam Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <charconv>
#include <string>
#include <vector>

#include "tfsam/compiler.hpp"

namespace tfsam {

namespace {

struct Line {
  std::string_view text;
  SourcePos pos;

  [[noreturn]] void fail(const std::string &msg) const { throw SyntaxError(msg, pos); }
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_operands(std::string_view s) {
  std::vector<std::string_view> out;
  if (trim(s).empty()) return out;
  for (;;) {
    std::size_t comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

std::uint32_t number(std::string_view s, const Line &l) {
  std::uint32_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) l.fail("expected a number, found '" + std::string(s) + "'");
  return v;
}

Reg reg(std::string_view s, const Line &l) {
  if (s.size() < 2 || s.front() != 'X') l.fail("expected a register, found '" + std::string(s) + "'");
  Reg r = number(s.substr(1), l);
  if (r == 0) l.fail("registers start at X1");
  return r;
}

TypeId type(std::string_view s, const TypeHierarchy &h, const Line &l) {
  auto t = h.find_type(s);
  if (!t) l.fail("unknown type '" + std::string(s) + "'");
  return *t;
}

std::pair<TypeId, std::uint32_t> functor(std::string_view s, const TypeHierarchy &h, const Line &l) {
  std::size_t slash = s.rfind('/');
  if (slash == std::string_view::npos) l.fail("expected type/arity, found '" + std::string(s) + "'");
  TypeId t = type(s.substr(0, slash), h, l);
  std::uint32_t n = number(s.substr(slash + 1), l);
  if (n != h.arity(t)) l.fail("arity of '" + std::string(h.type_name(t)) + "' is " + std::to_string(h.arity(t)));
  return {t, n};
}

Instruction instruction(std::string_view op, const std::vector<std::string_view> &args,
                        const TypeHierarchy &h, const Line &l) {
  auto want = [&](std::size_t n) {
    if (args.size() != n)
      l.fail(std::string(op) + " takes " + std::to_string(n) + " operand(s)");
  };
  if (op == "put_node" || op == "get_structure") {
    want(2);
    auto [t, n] = functor(args[0], h, l);
    if (op == "put_node") return PutNode{t, n, reg(args[1], l)};
    return GetStructure{t, n, reg(args[1], l)};
  }
  if (op == "put_arc") {
    want(3);
    return PutArc{reg(args[0], l), number(args[1], l), reg(args[2], l)};
  }
  if (op == "put_var" || op == "get_var") {
    want(2);
    TypeId t = type(args[0], h, l);
    if (op == "put_var") return PutVar{t, reg(args[1], l)};
    return GetVar{t, reg(args[1], l)};
  }
  if (op == "unify_variable") return want(1), UnifyVariable{reg(args[0], l)};
  if (op == "unify_value") return want(1), UnifyValue{reg(args[0], l)};
  if (op == "start_rule") return want(1), StartRule{number(args[0], l)};
  if (op == "advance") return want(0), Advance{};
  if (op == "move_dot") return want(0), MoveDot{};
  if (op == "next_item") return want(0), NextItem{};
  if (op == "end_rule") return want(0), EndRule{};
  l.fail("unknown instruction '" + std::string(op) + "'");
}

}  // namespace

CodeArea assemble(std::string_view text, const TypeHierarchy &h) {
  CodeArea area;
  std::vector<Instruction> pending;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    std::size_t nl = text.find('\n');
    Line l{trim(text.substr(0, nl)), {line_no, 1}};
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (l.text.empty()) continue;
    if (l.text.back() == ':') {
      area.append(pending);
      pending.clear();
      area.add_label(std::string(l.text.substr(0, l.text.size() - 1)), area.size());
      continue;
    }
    std::size_t space = l.text.find_first_of(" \t");
    std::string_view op = l.text.substr(0, space);
    std::string_view rest = space == std::string_view::npos ? std::string_view{} : l.text.substr(space);
    pending.push_back(instruction(op, split_operands(rest), h, l));
  }
  area.append(pending);
  return area;
}

}  // namespace tfsam
