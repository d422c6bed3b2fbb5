//
// Copyright 2026 The tfsam Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TFSAM_PARSER_HPP_
#define TFSAM_PARSER_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tfsam/compiler.hpp"
#include "tfsam/grammar.hpp"
#include "tfsam/machine.hpp"
#include "tfsam/terms.hpp"

namespace tfsam {

// Rule and lexicon code of a grammar. Keeps a pointer to the grammar, which
// must outlive it.
struct CompiledGrammar {
  const Grammar *grammar = nullptr;
  CodeArea code;               // every rule and entry, labeled
  std::vector<RuleCode> rules;  // parallel to grammar->rules
  // Registers bound once `dot` body elements are matched, per rule.
  std::vector<std::vector<Reg>> bound;
};

CompiledGrammar compile_grammar(const Grammar &g);

struct ParseLimits {
  std::size_t max_items = 100000;
  std::size_t max_steps = 1000000;  // agenda pops
};

struct ParseOptions {
  ParseLimits limits;
  MachineOptions machine;
  // Compare the heap with its checkpoint after every rule application.
  bool verify_undo = false;
};

inline constexpr int kLexical = -1;

// An item [from, rule with dot, to]. Complete edges keep only the head, in
// collapsed form so that equal structures compare iso;
// active edges keep the values of the rule registers bound so far as an
// MRS, one root per register.
struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  int rule = kLexical;
  std::size_t dot = 0;
  bool complete = false;
  Term head;
  Mrs state;
  std::string word;  // lexical edges
  std::size_t fingerprint = 0;  // hash of the printed head or state
};

struct ParseStats {
  std::size_t steps = 0;  // agenda pops
  std::size_t combinations = 0;
  std::size_t failures = 0;
  std::size_t duplicates = 0;
  std::size_t undo_checks = 0;
  std::size_t undo_violations = 0;
  bool fixed_point = false;
};

struct ParseResult {
  std::size_t length = 0;
  std::vector<Edge> edges;      // the chart, in creation order
  std::vector<std::size_t> parses;  // spanning complete edges subsumed by start
  ParseStats stats;

  std::vector<Term> heads() const;
};

// Outcome of advancing the dot of one edge over one complete structure.
struct Advanced {
  std::variant<std::monostate, Mrs, Term> value;  // failure, active, complete
  bool failed() const { return value.index() == 0; }
  bool complete() const { return value.index() == 2; }
};

class Parser {
 public:
  explicit Parser(const CompiledGrammar &cg, ParseOptions options = {});

  // Throws InputError for an empty input, unknown words or a missing start
  // structure and LimitError when a limit is exceeded.
  ParseResult parse(std::span<const std::string> words);

  // One application of the fundamental rule on the parser's machine.
  Advanced advance(std::size_t rule, std::size_t dot, const Mrs &state, const Term &next);

  const ParseStats &stats() const { return stats_; }
  const Machine &machine() const { return machine_; }

 private:
  const CompiledGrammar *cg_;
  ParseOptions options_;
  Machine machine_;
  ParseStats stats_;
};

// Applies a rule to an MRS element by element. nullopt when some element
// does not unify.
std::optional<Term> apply_rule(const Mrs &rule, const Mrs &input, const TypeHierarchy &h,
                               MachineOptions options = {});

ParseResult parse(const Grammar &g, std::span<const std::string> words,
                  ParseOptions options = {});

// `[i,j] name @ dot` for active and `[i,j] name => head` for complete edges,
// ordered by span.
std::string dump_chart(const ParseResult &r, const Grammar &g);

}  // namespace tfsam

#endif  // TFSAM_PARSER_HPP_
