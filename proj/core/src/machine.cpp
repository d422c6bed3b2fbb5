//
// Copyright 2026 The tfsam Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "tfsam/machine.hpp"

#include <unordered_map>

namespace tfsam {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

TypeId type_of(const Cell &c) { return TypeId{c.value}; }

}  // namespace

Machine::Machine(const TypeHierarchy &h, MachineOptions options)
    : h_(&h), options_(options) {}

Address Machine::reg(Reg r) const {
  return r < regs_.size() ? regs_[r] : kNoAddress;
}

void Machine::set_reg(Reg r, Address a) {
  if (r >= regs_.size()) regs_.resize(r + 1, kNoAddress);
  regs_[r] = a;
}

void Machine::write(Address a, Cell c) {
  if (!marks_.empty() && a < marks_.back()) trail_.emplace_back(a, heap_[a]);
  heap_[a] = c;
}

Address Machine::alloc(std::size_t n) {
  auto at = static_cast<Address>(heap_.size());
  heap_.resize(heap_.size() + n);
  return at;
}

Address Machine::deref_const(Address a) const {
  for (;;) {
    const Cell &c = heap_.at(a);
    if (c.tag == CellTag::kFree)
      throw MachineError("arc slot " + std::to_string(a) + " read before it was written");
    if (c.tag != CellTag::kRef || c.value == a) return a;
    a = c.value;
  }
}

Address Machine::deref(Address a) {
  Address end = deref_const(a);
  if (options_.path_compression) {
    // Every REF on the chain except the last now points at the end.
    while (a != end) {
      Address next = heap_[a].value;
      if (next != end) write(a, Cell::ref(end));
      a = next;
    }
  }
  return end;
}

void Machine::bind(Address a, Address target) { write(a, Cell::ref(target)); }

Address Machine::build_eager(TypeId t) {
  const std::size_t n = h_->arity(t);
  Address at = alloc(n + 1);
  heap_[at] = Cell::str(t);
  for (std::size_t i = 0; i < n; ++i) {
    Address child = build_eager(h_->arc_type(t, i));
    heap_[at + 1 + i] = Cell::ref(child);
  }
  return at;
}

Address Machine::build_most_general_fs(TypeId t) {
  if (!options_.lazy) {
    if (!h_->finitely_expandable(t))
      throw MachineError("most general structure of '" + std::string(h_->type_name(t)) +
                         "' is infinite");
    return build_eager(t);
  }
  const std::size_t n = h_->arity(t);
  Address at = alloc(n + 1);
  heap_[at] = Cell::str(t);
  for (std::size_t i = 0; i < n; ++i) heap_[at + 1 + i] = Cell::var(h_->arc_type(t, i));
  return at;
}

Address Machine::make_general(TypeId t) {
  if (!options_.lazy) return build_most_general_fs(t);
  Address at = alloc(1);
  heap_[at] = Cell::var(t);
  return at;
}

Address Machine::expand(Address var_cell) {
  Address node = build_most_general_fs(type_of(heap_[var_cell]));
  bind(var_cell, node);
  return node;
}

std::pair<Action, Address> Machine::pop() {
  if (stack_.empty()) throw MachineError("action stack underflow");
  auto top = stack_.back();
  stack_.pop_back();
  return top;
}

// Builds the skeleton of left ⊔ right for the node at addr (of type right)
// and pushes one action per feature of left, to be popped in left's feature
// order.
bool Machine::apply_plan(const UnifyPlan &p, Address addr, Address *result) {
  if (p.failed()) return false;
  const TypeId res = *p.result;
  std::vector<std::pair<Action, Address>> pushes;
  if (p.keeps_right()) {
    for (const PlanStep &s : p.steps)
      if (s.origin == FeatureOrigin::kBoth) pushes.emplace_back(Action::kUnify, addr + s.right_position);
    stack_.insert(stack_.end(), pushes.rbegin(), pushes.rend());
    *result = addr;
    return true;
  }
  const std::size_t n = p.steps.size();
  Address base = alloc(n + 1);
  heap_[base] = Cell::str(res);
  for (std::size_t i = 0; i < n; ++i) {
    const PlanStep &s = p.steps[i];
    const Address slot = base + 1 + static_cast<Address>(i);
    TypeId given = s.value;  // what the operands already guarantee
    switch (s.origin) {
      case FeatureOrigin::kRightOnly:
        heap_[slot] = Cell::ref(addr + s.right_position);
        given = h_->arc_type(p.right, s.right_position - 1);
        break;
      case FeatureOrigin::kLeftOnly:
        heap_[slot] = Cell::ref(slot);
        pushes.emplace_back(Action::kCopy, slot);
        given = *h_->approp(p.left, s.feature);
        break;
      case FeatureOrigin::kBoth:
        heap_[slot] = Cell::ref(addr + s.right_position);
        pushes.emplace_back(Action::kUnify, slot);
        given = *h_->lub(*h_->approp(p.left, s.feature),
                         h_->arc_type(p.right, s.right_position - 1));
        break;
      case FeatureOrigin::kIntroduced: {
        Address g = make_general(s.value);
        heap_[slot] = Cell::ref(g);
        break;
      }
    }
    // A subtype may specialize an inherited value; enforce it once the
    // value is known.
    if (given != s.value) pending_.emplace_back(slot, s.value);
  }
  stack_.insert(stack_.end(), pushes.rbegin(), pushes.rend());
  bind(addr, base);
  *result = base;
  return true;
}

bool Machine::unify_rec(Address a1, Address a2) {
  a1 = deref(a1);
  a2 = deref(a2);
  if (a1 == a2) return true;
  Cell c1 = heap_[a1];
  Cell c2 = heap_[a2];
  if (c1.tag == CellTag::kRef) {
    bind(a1, a2);
    return true;
  }
  if (c2.tag == CellTag::kRef) {
    bind(a2, a1);
    return true;
  }
  if (c1.tag == CellTag::kVar && c2.tag == CellTag::kVar) {
    TypeId u = type_of(c1), v = type_of(c2);
    if (h_->subsumes(u, v)) {
      bind(a1, a2);
    } else if (h_->subsumes(v, u)) {
      bind(a2, a1);
    } else {
      auto l = h_->lub(u, v);
      if (!l) return false;
      write(a2, Cell::var(*l));
      bind(a1, a2);
    }
    return true;
  }
  // A most general structure adds nothing to a node it subsumes.
  if (c1.tag == CellTag::kVar) {
    if (h_->subsumes(type_of(c1), type_of(c2))) {
      bind(a1, a2);
      return true;
    }
    a1 = expand(a1);
    c1 = heap_[a1];
  }
  if (c2.tag == CellTag::kVar) {
    if (h_->subsumes(type_of(c2), type_of(c1))) {
      bind(a2, a1);
      return true;
    }
    a2 = expand(a2);
  }
  const TypeId t1 = type_of(c1);
  Address merged = 0;
  if (!apply_plan(h_->plan(t1, type_of(heap_[a2])), a2, &merged)) return false;
  // Binding before descending makes revisits of this pair trivial, which is
  // what terminates unification of cyclic graphs.
  bind(a1, merged);
  const std::size_t n = h_->arity(t1);
  for (std::size_t i = 1; i <= n; ++i) {
    auto [action, addr] = pop();
    const Address arc = a1 + static_cast<Address>(i);
    if (action == Action::kCopy) {
      write(addr, Cell::ref(arc));
    } else if (!unify_rec(addr, arc)) {
      return false;
    }
  }
  return true;
}

bool Machine::coerce(Address a, TypeId t) {
  a = deref(a);
  const Cell c = heap_[a];
  switch (c.tag) {
    case CellTag::kRef:
      if (options_.lazy) {
        write(a, Cell::var(t));
      } else {
        bind(a, build_most_general_fs(t));
      }
      return true;
    case CellTag::kVar: {
      if (h_->subsumes(t, type_of(c))) return true;
      auto l = h_->lub(t, type_of(c));
      if (!l) return false;
      write(a, Cell::var(*l));
      return true;
    }
    case CellTag::kStr:
      if (h_->subsumes(t, type_of(c))) return true;
      return unify_rec(make_general(t), a);
    case CellTag::kFree:
      break;
  }
  throw MachineError("coercion of an unwritten cell");
}

bool Machine::drain() {
  while (!pending_.empty()) {
    auto [a, t] = pending_.back();
    pending_.pop_back();
    if (!coerce(a, t)) return false;
  }
  return true;
}

bool Machine::unify(Address a, Address b) { return unify_rec(a, b) && drain(); }

bool Machine::step(const Instruction &inst) {
  auto need = [&](Reg r) {
    Address a = reg(r);
    if (a == kNoAddress) throw MachineError("register X" + std::to_string(r) + " read before set");
    return a;
  };
  return std::visit(
      Overloaded{
          [&](const PutNode &i) {
            Address at = alloc(i.arity + 1);
            heap_[at] = Cell::str(i.type);
            set_reg(i.reg, at);
            return true;
          },
          [&](const PutArc &i) {
            Address node = need(i.node);
            if (node + i.offset >= heap_.size())
              throw MachineError("put_arc outside the heap");
            write(node + i.offset, Cell::ref(need(i.value)));
            return true;
          },
          [&](const PutVar &i) {
            set_reg(i.reg, make_general(i.type));
            return true;
          },
          [&](const GetStructure &i) {
            Address addr = deref(need(i.reg));
            set_reg(i.reg, addr);
            Cell c = heap_[addr];
            bool fresh = c.tag == CellTag::kRef ||
                         (c.tag == CellTag::kVar && h_->subsumes(type_of(c), i.type));
            if (fresh) {
              Address at = alloc(i.arity + 1);
              heap_[at] = Cell::str(i.type);
              for (Address j = 1; j <= i.arity; ++j) heap_[at + j] = Cell::ref(at + j);
              for (Address j = i.arity; j >= 1; --j) stack_.emplace_back(Action::kCopy, at + j);
              bind(addr, at);
              return true;
            }
            if (c.tag == CellTag::kVar) {
              addr = expand(addr);
              set_reg(i.reg, addr);
            }
            Address merged = 0;
            return apply_plan(h_->plan(i.type, type_of(heap_[addr])), addr, &merged);
          },
          [&](const GetVar &i) {
            Address addr = deref(need(i.reg));
            set_reg(i.reg, addr);
            return coerce(addr, i.type);
          },
          [&](const UnifyVariable &i) {
            set_reg(i.reg, pop().second);
            return true;
          },
          [&](const UnifyValue &i) {
            auto [action, addr] = pop();
            if (action == Action::kCopy) {
              write(addr, Cell::ref(need(i.reg)));
              return true;
            }
            return unify_rec(addr, need(i.reg));
          },
          [](const auto &) -> bool { throw MachineError("control instruction in step"); },
      },
      inst);
}

Stop Machine::run(std::span<const Instruction> code, std::size_t pc) {
  for (; pc < code.size(); ++pc) {
    if (is_control(code[pc])) {
      if (!drain()) return {Stop::Kind::kFail, pc};
      if (!stack_.empty()) throw MachineError("action stack not empty at a control point");
      return {Stop::Kind::kControl, pc};
    }
    if (!step(code[pc])) return {Stop::Kind::kFail, pc};
  }
  if (!drain()) return {Stop::Kind::kFail, pc};
  if (!stack_.empty()) throw MachineError("action stack not empty after program");
  return {Stop::Kind::kEnd, pc};
}

bool Machine::execute(std::span<const Instruction> code) {
  Stop s = run(code);
  if (s.kind == Stop::Kind::kControl) throw MachineError("unexpected control instruction");
  return s.kind == Stop::Kind::kEnd;
}

Machine::Mark Machine::checkpoint() {
  Mark m{heap_.size(), trail_.size(), marks_.size()};
  marks_.push_back(heap_.size());
  return m;
}

void Machine::undo(const Mark &m) {
  if (m.depth >= marks_.size() || marks_[m.depth] != m.heap_top || trail_.size() < m.trail_size)
    throw MachineError("undo to a stale checkpoint");
  while (trail_.size() > m.trail_size) {
    auto [a, c] = trail_.back();
    trail_.pop_back();
    heap_[a] = c;
  }
  heap_.resize(m.heap_top);
  marks_.resize(m.depth);
  if (marks_.empty()) trail_.clear();
  regs_.clear();
  stack_.clear();
  pending_.clear();
}

void Machine::release(const Mark &m) {
  if (m.depth + 1 != marks_.size()) throw MachineError("release of a non-innermost checkpoint");
  marks_.pop_back();
  if (marks_.empty()) trail_.clear();
}

void Machine::reset() {
  heap_.clear();
  regs_.clear();
  stack_.clear();
  trail_.clear();
  marks_.clear();
  pending_.clear();
}

FsGraph Machine::graph_of(std::span<const Address> roots) const {
  FsGraph g;
  std::unordered_map<Address, std::uint32_t> ids;
  std::vector<Address> todo;
  auto visit = [&](Address a) {
    a = deref_const(a);
    auto [it, fresh] = ids.emplace(a, static_cast<std::uint32_t>(g.nodes.size()));
    if (!fresh) return it->second;
    const Cell &c = heap_[a];
    if (c.tag == CellTag::kRef) throw MachineError("extracting an unknown value");
    TypeId t = type_of(c);
    g.nodes.push_back({t, c.tag == CellTag::kVar && h_->arity(t) > 0, {}});
    if (c.tag == CellTag::kStr) todo.push_back(a);
    return it->second;
  };
  for (Address r : roots) g.roots.push_back(visit(r));
  while (!todo.empty()) {
    Address a = todo.back();
    todo.pop_back();
    std::uint32_t id = ids.at(a);
    const std::size_t n = h_->arity(type_of(heap_[a]));
    std::vector<std::uint32_t> arcs;
    for (std::size_t i = 1; i <= n; ++i) arcs.push_back(visit(a + static_cast<Address>(i)));
    g.nodes[id].arcs = std::move(arcs);
  }
  return g;
}

Term Machine::extract(Address a) const {
  Address roots[] = {a};
  return to_term(graph_of(roots));
}

Mrs Machine::extract(std::span<const Address> roots, bool has_head) const {
  return to_mrs(graph_of(roots), has_head);
}

std::string Machine::dump_heap(Address base) const {
  std::string out;
  for (std::size_t a = 0; a < heap_.size(); ++a) {
    const Cell &c = heap_[a];
    out += std::to_string(a + base) + ": ";
    switch (c.tag) {
      case CellTag::kStr:
        out += "STR " + std::string(h_->type_name(type_of(c)));
        break;
      case CellTag::kVar:
        out += "VAR " + std::string(h_->type_name(type_of(c)));
        break;
      case CellTag::kRef:
        out += "REF " + std::to_string(c.value + base);
        break;
      case CellTag::kFree:
        out += "FREE";
        break;
    }
    out += '\n';
  }
  return out;
}

std::optional<Term> unify_terms(const Term &a, const Term &b, const TypeHierarchy &h,
                                MachineOptions options) {
  Machine m(h, options);
  if (!m.execute(compile_query(flatten(a), h))) return std::nullopt;
  Address root = m.reg(1);
  m.clear_registers();
  m.set_reg(1, root);
  if (!m.execute(compile_program(flatten(b), h))) return std::nullopt;
  return m.extract(root);
}

bool subsumes(const Term &a, const Term &b, const TypeHierarchy &h) {
  auto joined = unify_terms(b, a, h);
  return joined && iso(collapse_general(*joined, h), collapse_general(b, h));
}

}  // namespace tfsam
