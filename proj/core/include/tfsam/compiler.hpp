//
// Copyright 2026 The tfsam Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TFSAM_COMPILER_HPP_
#define TFSAM_COMPILER_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tfsam/terms.hpp"
#include "tfsam/typesys.hpp"

namespace tfsam {

// Registers X1, X2, ... are 1-based and unbounded.
using Reg = std::uint32_t;

// Query instructions build a structure on the heap.
struct PutNode {
  TypeId type;
  std::uint32_t arity = 0;
  Reg reg = 0;
  friend bool operator==(const PutNode &, const PutNode &) = default;
};
struct PutArc {
  Reg node = 0;
  std::uint32_t offset = 0;  // 1..arity
  Reg value = 0;
  friend bool operator==(const PutArc &, const PutArc &) = default;
};
// Most general structure of a type, left unexpanded (a VAR cell).
struct PutVar {
  TypeId type;
  Reg reg = 0;
  friend bool operator==(const PutVar &, const PutVar &) = default;
};

// Program instructions unify with a structure already on the heap.
struct GetStructure {
  TypeId type;
  std::uint32_t arity = 0;
  Reg reg = 0;
  friend bool operator==(const GetStructure &, const GetStructure &) = default;
};
struct GetVar {
  TypeId type;
  Reg reg = 0;
  friend bool operator==(const GetVar &, const GetVar &) = default;
};
struct UnifyVariable {
  Reg reg = 0;
  friend bool operator==(const UnifyVariable &, const UnifyVariable &) = default;
};
struct UnifyValue {
  Reg reg = 0;
  friend bool operator==(const UnifyValue &, const UnifyValue &) = default;
};

// Rule and chart control. The machine stops on these and hands control to
// the parser.
struct Advance {
  friend bool operator==(const Advance &, const Advance &) = default;
};
struct StartRule {
  std::uint32_t body_length = 0;
  friend bool operator==(const StartRule &, const StartRule &) = default;
};
struct MoveDot {
  friend bool operator==(const MoveDot &, const MoveDot &) = default;
};
struct NextItem {
  friend bool operator==(const NextItem &, const NextItem &) = default;
};
struct EndRule {
  friend bool operator==(const EndRule &, const EndRule &) = default;
};

using Instruction =
    std::variant<PutNode, PutArc, PutVar, GetStructure, GetVar, UnifyVariable,
                 UnifyValue, Advance, StartRule, MoveDot, NextItem, EndRule>;

bool is_control(const Instruction &inst);
// Highest register mentioned, 0 if none.
Reg max_register(std::span<const Instruction> code);

struct Label {
  std::string name;
  std::size_t address = 0;
  friend bool operator==(const Label &, const Label &) = default;
};

// Addressable instruction memory with named entry points.
class CodeArea {
 public:
  // Appends a fragment, labels its first address and returns that address.
  std::size_t append(std::string label, std::span<const Instruction> code);
  // Appends without a label.
  std::size_t append(std::span<const Instruction> code);
  void add_label(std::string name, std::size_t address);

  std::size_t size() const { return code_.size(); }
  bool empty() const { return code_.empty(); }
  const Instruction &operator[](std::size_t address) const { return code_[address]; }
  std::span<const Instruction> code() const { return code_; }
  const std::vector<Label> &labels() const { return labels_; }
  std::optional<std::size_t> find(std::string_view label) const;

  friend bool operator==(const CodeArea &, const CodeArea &) = default;

 private:
  std::vector<Instruction> code_;
  std::vector<Label> labels_;
};

// All put_node instructions (one per equation, in equation order) and then
// all put_arc instructions, grouped per equation in offset order. Arcs may
// refer to any node of the fragment, which is what cyclic terms need.
std::vector<Instruction> compile_query(const EquationSet &eqs,
                                       const TypeHierarchy &h);

// get_structure per equation followed by unify_variable for a register's
// first occurrence in the fragment and unify_value afterwards.
std::vector<Instruction> compile_program(const EquationSet &eqs,
                                         const TypeHierarchy &h);

struct RuleCode {
  std::vector<Instruction> code;
  std::vector<Reg> body_roots;  // root register of each body element
  Reg head_root = 0;
  // Offset of the instruction where matching resumes with `dot` elements
  // seen: the start_rule for dot 0, the next_item after the dot-th move_dot
  // otherwise. Has body_roots.size() + 1 entries; the last one resumes at
  // head construction.
  std::vector<std::size_t> resume;
  std::uint32_t register_count = 0;
};

// start_rule; program(body1); move_dot; next_item; ... program(bodyN);
// move_dot; next_item; query(head); end_rule. One register numbering spans
// the whole rule. Throws TermError unless the MRS has a head and a body.
RuleCode compile_rule(const Mrs &rule, const TypeHierarchy &h);

struct InputEntry {
  std::size_t position = 0;  // word index; the edge spans (position, position+1)
  std::size_t alternative = 0;
  Reg root = 0;
};

struct InputCode {
  std::vector<Instruction> code;
  std::vector<InputEntry> entries;
  std::uint32_t register_count = 0;
};

// advance; query(w1 entries); advance; query(w2 entries); ...
InputCode compile_input(std::span<const std::vector<Term>> words,
                        const TypeHierarchy &h);

std::string disassemble(const Instruction &inst, const TypeHierarchy &h);
std::string disassemble(std::span<const Instruction> code, const TypeHierarchy &h);
// Labels on their own line as `name:`, one instruction per line.
std::string disassemble(const CodeArea &code, const TypeHierarchy &h);

// Inverse of disassemble(CodeArea). Throws SyntaxError.
CodeArea assemble(std::string_view text, const TypeHierarchy &h);

}  // namespace tfsam

#endif  // TFSAM_COMPILER_HPP_
