//
// Copyright 2026 The tfsam Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "tfsam/compiler.hpp"

#include <algorithm>
#include <unordered_set>

namespace tfsam {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

std::string x(Reg r) { return "X" + std::to_string(r); }

}  // namespace

bool is_control(const Instruction &inst) {
  return std::holds_alternative<Advance>(inst) ||
         std::holds_alternative<StartRule>(inst) ||
         std::holds_alternative<MoveDot>(inst) ||
         std::holds_alternative<NextItem>(inst) ||
         std::holds_alternative<EndRule>(inst);
}

Reg max_register(std::span<const Instruction> code) {
  Reg m = 0;
  for (const auto &inst : code) {
    std::visit(Overloaded{
                   [&](const PutArc &i) { m = std::max({m, i.node, i.value}); },
                   [&](const PutNode &i) { m = std::max(m, i.reg); },
                   [&](const PutVar &i) { m = std::max(m, i.reg); },
                   [&](const GetStructure &i) { m = std::max(m, i.reg); },
                   [&](const GetVar &i) { m = std::max(m, i.reg); },
                   [&](const UnifyVariable &i) { m = std::max(m, i.reg); },
                   [&](const UnifyValue &i) { m = std::max(m, i.reg); },
                   [](const auto &) {},
               },
               inst);
  }
  return m;
}

// ---------------------------------------------------------------------------
// CodeArea

std::size_t CodeArea::append(std::string label, std::span<const Instruction> code) {
  std::size_t at = append(code);
  add_label(std::move(label), at);
  return at;
}

std::size_t CodeArea::append(std::span<const Instruction> code) {
  std::size_t at = code_.size();
  code_.insert(code_.end(), code.begin(), code.end());
  return at;
}

void CodeArea::add_label(std::string name, std::size_t address) {
  labels_.push_back({std::move(name), address});
}

std::optional<std::size_t> CodeArea::find(std::string_view label) const {
  for (const auto &l : labels_)
    if (l.name == label) return l.address;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Compilation

namespace {

void emit_query(std::span<const Equation> eqs, const TypeHierarchy &h,
                std::vector<Instruction> &out) {
  for (const auto &eq : eqs) {
    if (eq.general) {
      out.push_back(PutVar{eq.type, eq.reg});
    } else {
      out.push_back(PutNode{eq.type, static_cast<std::uint32_t>(h.arity(eq.type)), eq.reg});
    }
  }
  for (const auto &eq : eqs) {
    for (std::size_t j = 0; j < eq.args.size(); ++j)
      out.push_back(PutArc{eq.reg, static_cast<std::uint32_t>(j + 1), eq.args[j]});
  }
}

void emit_program(std::span<const Equation> eqs, const TypeHierarchy &h,
                  std::unordered_set<Reg> &seen, std::vector<Instruction> &out) {
  for (const auto &eq : eqs) {
    seen.insert(eq.reg);
    if (eq.general) {
      out.push_back(GetVar{eq.type, eq.reg});
      continue;
    }
    out.push_back(
        GetStructure{eq.type, static_cast<std::uint32_t>(h.arity(eq.type)), eq.reg});
    for (Reg a : eq.args) {
      if (seen.insert(a).second) {
        out.push_back(UnifyVariable{a});
      } else {
        out.push_back(UnifyValue{a});
      }
    }
  }
}

// Equations emitted while traversing root `index`; they are contiguous.
std::span<const Equation> equations_of_root(const EquationSet &eqs, std::size_t index) {
  auto first = std::find_if(eqs.equations.begin(), eqs.equations.end(),
                            [&](const Equation &e) { return e.root_index == index; });
  auto last = std::find_if(first, eqs.equations.end(),
                           [&](const Equation &e) { return e.root_index != index; });
  return {first, last};
}

}  // namespace

std::vector<Instruction> compile_query(const EquationSet &eqs, const TypeHierarchy &h) {
  std::vector<Instruction> out;
  emit_query(eqs.equations, h, out);
  return out;
}

std::vector<Instruction> compile_program(const EquationSet &eqs, const TypeHierarchy &h) {
  std::vector<Instruction> out;
  std::unordered_set<Reg> seen;
  emit_program(eqs.equations, h, seen, out);
  return out;
}

RuleCode compile_rule(const Mrs &rule, const TypeHierarchy &h) {
  if (!rule.has_head || rule.roots.size() < 2)
    throw TermError("a rule needs at least one body element and a head");
  EquationSet eqs = flatten(rule);
  const std::size_t body = rule.roots.size() - 1;

  RuleCode rc;
  rc.register_count = eqs.register_count;
  rc.head_root = eqs.root_regs.back();
  rc.body_roots.assign(eqs.root_regs.begin(), eqs.root_regs.end() - 1);

  std::unordered_set<Reg> seen;
  rc.resume.push_back(0);
  rc.code.push_back(StartRule{static_cast<std::uint32_t>(body)});
  for (std::size_t k = 0; k < body; ++k) {
    emit_program(equations_of_root(eqs, k), h, seen, rc.code);
    rc.code.push_back(MoveDot{});
    rc.resume.push_back(rc.code.size());
    rc.code.push_back(NextItem{});
  }
  emit_query(equations_of_root(eqs, body), h, rc.code);
  rc.code.push_back(EndRule{});
  return rc;
}

InputCode compile_input(std::span<const std::vector<Term>> words, const TypeHierarchy &h) {
  InputCode ic;
  FsGraph all;
  std::vector<std::pair<std::size_t, std::size_t>> origin;  // (position, alternative)
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t k = 0; k < words[i].size(); ++k) {
      all = concat(all, to_graph(words[i][k]));
      origin.emplace_back(i, k);
    }
  }
  EquationSet eqs = flatten(all);
  ic.register_count = eqs.register_count;
  std::size_t root = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    ic.code.push_back(Advance{});
    for (std::size_t k = 0; k < words[i].size(); ++k, ++root) {
      emit_query(equations_of_root(eqs, root), h, ic.code);
      ic.entries.push_back({i, k, eqs.root_regs[root]});
    }
  }
  return ic;
}

// ---------------------------------------------------------------------------
// Disassembly

std::string disassemble(const Instruction &inst, const TypeHierarchy &h) {
  auto tn = [&](TypeId t) { return std::string(h.type_name(t)); };
  return std::visit(
      Overloaded{
          [&](const PutNode &i) {
            return "put_node " + tn(i.type) + "/" + std::to_string(i.arity) + "," + x(i.reg);
          },
          [&](const PutArc &i) {
            return "put_arc " + x(i.node) + "," + std::to_string(i.offset) + "," + x(i.value);
          },
          [&](const PutVar &i) { return "put_var " + tn(i.type) + "," + x(i.reg); },
          [&](const GetStructure &i) {
            return "get_structure " + tn(i.type) + "/" + std::to_string(i.arity) + "," +
                   x(i.reg);
          },
          [&](const GetVar &i) { return "get_var " + tn(i.type) + "," + x(i.reg); },
          [&](const UnifyVariable &i) { return "unify_variable " + x(i.reg); },
          [&](const UnifyValue &i) { return "unify_value " + x(i.reg); },
          [](const Advance &) { return std::string("advance"); },
          [](const StartRule &i) { return "start_rule " + std::to_string(i.body_length); },
          [](const MoveDot &) { return std::string("move_dot"); },
          [](const NextItem &) { return std::string("next_item"); },
          [](const EndRule &) { return std::string("end_rule"); },
      },
      inst);
}

std::string disassemble(std::span<const Instruction> code, const TypeHierarchy &h) {
  std::string out;
  for (const auto &inst : code) {
    out += disassemble(inst, h);
    out += '\n';
  }
  return out;
}

std::string disassemble(const CodeArea &code, const TypeHierarchy &h) {
  std::string out;
  std::vector<Label> labels = code.labels();
  std::stable_sort(labels.begin(), labels.end(),
                   [](const Label &a, const Label &b) { return a.address < b.address; });
  auto next = labels.begin();
  for (std::size_t pc = 0; pc <= code.size(); ++pc) {
    for (; next != labels.end() && next->address == pc; ++next) out += next->name + ":\n";
    if (pc < code.size()) {
      out += disassemble(code[pc], h);
      out += '\n';
    }
  }
  return out;
}

}  // namespace tfsam
