//
// Copyright 2026 The tfsam Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TFSAM_MACHINE_HPP_
#define TFSAM_MACHINE_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tfsam/compiler.hpp"
#include "tfsam/terms.hpp"
#include "tfsam/typesys.hpp"

namespace tfsam {

using Address = std::uint32_t;
inline constexpr Address kNoAddress = std::numeric_limits<Address>::max();

enum class CellTag : std::uint8_t {
  kFree,  // reserved arc slot not yet written by put_arc
  kStr,   // node; value = type id; arcs follow in the next arity cells
  kRef,   // value = address; a self reference is an unknown value
  kVar,   // value = type id; most general structure of that type, unexpanded
};

struct Cell {
  CellTag tag = CellTag::kFree;
  std::uint32_t value = 0;

  static Cell str(TypeId t) { return {CellTag::kStr, t.value}; }
  static Cell ref(Address a) { return {CellTag::kRef, a}; }
  static Cell var(TypeId t) { return {CellTag::kVar, t.value}; }

  friend bool operator==(const Cell &, const Cell &) = default;
};

struct MachineOptions {
  bool path_compression = true;
  // When false, every most general structure is built in full instead of as
  // a VAR cell. Fails with MachineError on appropriateness loops.
  bool lazy = true;
};

enum class Action : std::uint8_t { kCopy, kUnify };

// Result of running code until it stops.
struct Stop {
  enum class Kind : std::uint8_t { kEnd, kControl, kFail };
  Kind kind = Kind::kEnd;
  std::size_t pc = 0;  // the control instruction, or code size at kEnd
};

// Heap, registers, the action stack S and the trail of one unification
// engine. Not thread safe; share the hierarchy, not the machine.
class Machine {
 public:
  struct Mark {
    std::size_t heap_top = 0;
    std::size_t trail_size = 0;
    std::size_t depth = 0;
  };

  explicit Machine(const TypeHierarchy &h, MachineOptions options = {});

  const TypeHierarchy &hierarchy() const { return *h_; }
  const MachineOptions &options() const { return options_; }

  std::span<const Cell> heap() const { return heap_; }
  Address top() const { return static_cast<Address>(heap_.size()); }
  const Cell &cell(Address a) const { return heap_.at(a); }

  // Unset registers hold kNoAddress.
  Address reg(Reg r) const;
  void set_reg(Reg r, Address a);
  void clear_registers() { regs_.clear(); }
  std::size_t stack_size() const { return stack_.size(); }
  std::size_t trail_size() const { return trail_.size(); }

  // Follows REF chains to a cell that is not a REF to another address.
  Address deref(Address a);
  // Cell a becomes REF(target); the old cell is trailed.
  void bind(Address a, Address target);
  // STR(t) followed by one VAR(approp) cell per feature, or the full
  // expansion when not lazy.
  Address build_most_general_fs(TypeId t);

  // Full unification of two heap graphs, including pending value coercions.
  bool unify(Address a, Address b);

  // Executes from pc until the end of code, a control instruction, or
  // failure. Pending coercions are resolved before stopping.
  Stop run(std::span<const Instruction> code, std::size_t pc = 0);
  // Runs code that contains no control instructions. True on success.
  bool execute(std::span<const Instruction> code);

  // Nested checkpoints unwind in LIFO order.
  Mark checkpoint();
  // Restores every trailed cell and truncates the heap; also clears
  // registers and S. Marks taken after `m` are dropped.
  void undo(const Mark &m);
  // Forgets a checkpoint without undoing it (innermost only).
  void release(const Mark &m);

  // Graph reachable from a, as a normal-form term. VAR cells come out as
  // general nodes (or leaves for arity 0).
  Term extract(Address a) const;
  Mrs extract(std::span<const Address> roots, bool has_head = false) const;

  // One line per cell, `addr: TAG content`, addresses shifted by base.
  std::string dump_heap(Address base = 0) const;

  // Empties heap, registers, S, trail and checkpoints.
  void reset();

 private:
  void write(Address a, Cell c);
  Address alloc(std::size_t n);
  Address make_general(TypeId t);
  Address build_eager(TypeId t);
  Address expand(Address var_cell);
  Address deref_const(Address a) const;
  bool apply_plan(const UnifyPlan &p, Address addr, Address *result);
  bool unify_rec(Address a1, Address a2);
  bool coerce(Address a, TypeId t);
  bool drain();
  std::pair<Action, Address> pop();
  bool step(const Instruction &inst);
  FsGraph graph_of(std::span<const Address> roots) const;

  const TypeHierarchy *h_;
  MachineOptions options_;
  std::vector<Cell> heap_;
  std::vector<Address> regs_;
  std::vector<std::pair<Action, Address>> stack_;
  std::vector<std::pair<Address, Cell>> trail_;
  std::vector<std::size_t> marks_;  // heap top of every live checkpoint
  std::vector<std::pair<Address, TypeId>> pending_;  // value coercions
};

// Compiles a as query and b as program, runs both on a fresh machine and
// extracts the result. nullopt on unification failure.
std::optional<Term> unify_terms(const Term &a, const Term &b,
                                const TypeHierarchy &h,
                                MachineOptions options = {});

// a ⊑ b, decided by unifying and comparing the result with b.
bool subsumes(const Term &a, const Term &b, const TypeHierarchy &h);

}  // namespace tfsam

#endif  // TFSAM_MACHINE_HPP_
