//
// Copyright 2026 The tfsam Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TFSAM_LEXER_HPP_
#define TFSAM_LEXER_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tfsam/error.hpp"

namespace tfsam {

enum class TokenKind {
  kIdent,     // type, feature, word and keyword names
  kTag,       // #n
  kLBracket,
  kRBracket,
  kLParen,
  kRParen,
  kComma,
  kColon,
  kPeriod,
  kArrow,     // =>
  kEnd,
};

const char *to_string(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;
  SourcePos pos;
};

// Splits grammar text into tokens. `%` starts a comment running to the end
// of the line. Identifiers are runs of [A-Za-z0-9_'-].
std::vector<Token> tokenize(std::string_view text);

// Cursor over a token vector; always terminated by a kEnd token.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens);

  const Token &peek(std::size_t ahead = 0) const;
  const Token &next();
  bool at(TokenKind kind) const { return peek().kind == kind; }
  bool accept(TokenKind kind);
  const Token &expect(TokenKind kind, const char *what);
  bool at_end() const { return at(TokenKind::kEnd); }

  std::size_t position() const { return pos_; }
  void seek(std::size_t pos) { pos_ = pos; }

  [[noreturn]] void fail(const std::string &message) const;

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace tfsam

#endif  // TFSAM_LEXER_HPP_
