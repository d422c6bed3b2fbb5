//
// Copyright 2026 The tfsam Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "tfsam/grammar.hpp"

#include <cerrno>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <system_error>

#include "tfsam/lexer.hpp"

namespace tfsam {

namespace {

enum class Clause { kType, kRule, kLex, kStart };

Clause classify(const TokenStream &in) {
  const Token &head = in.peek();
  if (head.kind == TokenKind::kIdent) {
    if (head.text == "start" && in.peek(1).kind == TokenKind::kColon) return Clause::kStart;
    if ((head.text == "rule" || head.text == "lex") && in.peek(1).kind == TokenKind::kIdent &&
        in.peek(2).kind == TokenKind::kColon)
      return head.text == "rule" ? Clause::kRule : Clause::kLex;
  }
  return Clause::kType;
}

// Skips to just past the next period.
void skip_clause(TokenStream &in) {
  while (!in.at_end() && !in.accept(TokenKind::kPeriod)) in.next();
}

void check_typed(const std::vector<TypeViolation> &violations, const std::string &what,
                 SourcePos pos, const TypeHierarchy &h) {
  if (violations.empty()) return;
  std::string msg = std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " +
                    what + " is not well typed:";
  for (const auto &v : violations) msg += " " + describe(v, h) + ";";
  msg.pop_back();
  throw TermError(msg);
}

}  // namespace

std::vector<const LexEntry *> Grammar::entries(std::string_view word) const {
  std::vector<const LexEntry *> out;
  for (const auto &e : lexicon)
    if (e.word == word) out.push_back(&e);
  return out;
}

Grammar parse_grammar(std::string_view text) {
  TokenStream in(tokenize(text));

  // Type statements first, wherever they are; clauses need the hierarchy.
  TypeSpec spec;
  std::map<std::string, SourcePos, std::less<>> characterized;
  std::vector<std::size_t> clauses;
  while (!in.at_end()) {
    if (classify(in) != Clause::kType) {
      clauses.push_back(in.position());
      skip_clause(in);
      continue;
    }
    SourcePos pos = in.peek().pos;
    TypeStatement st = parse_type_statement(in);
    auto [it, fresh] = characterized.emplace(st.type, st.pos);
    if (!fresh)
      throw SyntaxError("duplicate characterization of type '" + st.type + "' (first at line " +
                            std::to_string(it->second.line) + ")",
                        pos);
    spec.statements.push_back(std::move(st));
  }

  Grammar g{TypeHierarchy::validate(spec), {}, {}, std::nullopt};
  const TypeHierarchy &h = g.types;
  std::set<std::string, std::less<>> rule_names;
  SourcePos start_pos;
  for (std::size_t at : clauses) {
    in.seek(at);
    const Clause kind = classify(in);
    const Token keyword = in.next();
    switch (kind) {
      case Clause::kStart: {
        in.expect(TokenKind::kColon, "':'");
        if (g.start)
          throw SyntaxError("second start clause (first at line " +
                                std::to_string(start_pos.line) + ")",
                            keyword.pos);
        start_pos = keyword.pos;
        g.start = read_term(in, h);
        check_typed(well_typed_check(*g.start, h), "start structure", keyword.pos, h);
        break;
      }
      case Clause::kRule: {
        const Token name = in.next();
        in.expect(TokenKind::kColon, "':'");
        if (!rule_names.insert(name.text).second)
          throw SyntaxError("duplicate rule name '" + name.text + "'", name.pos);
        Mrs m = read_mrs(in, h);
        if (!m.has_head || m.roots.size() < 2)
          throw SyntaxError("rule '" + name.text + "' needs a body and a '=>' head", name.pos);
        check_typed(well_typed_check(m, h), "rule '" + name.text + "'", name.pos, h);
        g.rules.push_back({name.text, std::move(m), keyword.pos});
        break;
      }
      case Clause::kLex: {
        const Token word = in.next();
        in.expect(TokenKind::kColon, "':'");
        Term t = read_term(in, h);
        check_typed(well_typed_check(t, h), "entry for '" + word.text + "'", word.pos, h);
        g.lexicon.push_back({word.text, std::move(t), keyword.pos});
        break;
      }
      case Clause::kType:
        break;
    }
    in.expect(TokenKind::kPeriod, "'.'");
  }
  return g;
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw std::system_error(errno ? errno : ENOENT, std::generic_category(),
                            "cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << file.rdbuf();
  if (file.bad())
    throw std::system_error(EIO, std::generic_category(), "cannot read " + path.string());
  return buf.str();
}

Grammar load_grammar(const std::filesystem::path &path) {
  return parse_grammar(read_file(path));
}

std::vector<std::string> split_words(std::string_view input) {
  std::vector<std::string> words;
  std::istringstream in{std::string(input)};
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

}  // namespace tfsam
