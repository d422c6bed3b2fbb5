//
// Copyright 2026 The tfsam Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TFSAM_GRAMMAR_HPP_
#define TFSAM_GRAMMAR_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tfsam/terms.hpp"
#include "tfsam/typesys.hpp"

namespace tfsam {

struct Rule {
  std::string name;
  Mrs mrs;  // body elements followed by the head
  SourcePos pos;
};

struct LexEntry {
  std::string word;
  Term term;
  SourcePos pos;
};

// A grammar file holds, in any order:
//
//   t sub [t1,...] intro [f:r,...].   type statements
//   rule NAME: B1, ..., Bn => H.      phrase rules
//   lex WORD: T.                      lexical entries (repeatable per word)
//   start: T.                         start structure (at most one)
//
// `%` starts a comment that runs to the end of the line.
struct Grammar {
  TypeHierarchy types;
  std::vector<Rule> rules;
  std::vector<LexEntry> lexicon;
  std::optional<Term> start;

  // Entries of a word in file order; empty when unknown.
  std::vector<const LexEntry *> entries(std::string_view word) const;
};

// Throws SyntaxError, SpecError or TermError (also for ill-typed rules,
// entries or start structure).
Grammar parse_grammar(std::string_view text);

// Reads a file. Throws std::system_error when it cannot be read, otherwise
// as parse_grammar.
std::string read_file(const std::filesystem::path &path);
Grammar load_grammar(const std::filesystem::path &path);

// Whitespace separated words.
std::vector<std::string> split_words(std::string_view input);

}  // namespace tfsam

#endif  // TFSAM_GRAMMAR_HPP_
