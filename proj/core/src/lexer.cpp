//
// Copyright 2026 The tfsam Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "tfsam/lexer.hpp"

#include <cctype>
#include <utility>

namespace tfsam {

namespace {

std::string format_position(const std::string &message, SourcePos pos) {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " +
         message;
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
         c == '\'' || c == '-';
}

}  // namespace

SyntaxError::SyntaxError(const std::string &message, SourcePos pos)
    : Error(format_position(message, pos)), pos_(pos), detail_(message) {}

namespace {

std::string join_diagnostics(const std::vector<std::string> &diagnostics) {
  std::string out = "invalid type specification";
  for (const auto &d : diagnostics) {
    out += "\n  ";
    out += d;
  }
  return out;
}

}  // namespace

SpecError::SpecError(std::vector<std::string> diagnostics)
    : Error(join_diagnostics(diagnostics)),
      diagnostics_(std::move(diagnostics)) {}

const char *to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::kIdent: return "identifier";
    case TokenKind::kTag: return "tag";
    case TokenKind::kLBracket: return "'['";
    case TokenKind::kRBracket: return "']'";
    case TokenKind::kLParen: return "'('";
    case TokenKind::kRParen: return "')'";
    case TokenKind::kComma: return "','";
    case TokenKind::kColon: return "':'";
    case TokenKind::kPeriod: return "'.'";
    case TokenKind::kArrow: return "'=>'";
    case TokenKind::kEnd: return "end of input";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  SourcePos pos;
  std::size_t i = 0;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
      ++i;
    }
  };
  auto single = [&](TokenKind kind) {
    out.push_back({kind, std::string(1, text[i]), pos});
    advance(1);
  };

  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '%') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    switch (c) {
      case '[': single(TokenKind::kLBracket); continue;
      case ']': single(TokenKind::kRBracket); continue;
      case '(': single(TokenKind::kLParen); continue;
      case ')': single(TokenKind::kRParen); continue;
      case ',': single(TokenKind::kComma); continue;
      case ':': single(TokenKind::kColon); continue;
      case '.': single(TokenKind::kPeriod); continue;
      default: break;
    }
    if (c == '=' && i + 1 < text.size() && text[i + 1] == '>') {
      out.push_back({TokenKind::kArrow, "=>", pos});
      advance(2);
      continue;
    }
    if (c == '#') {
      SourcePos start = pos;
      std::size_t j = i + 1;
      while (j < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[j])))
        ++j;
      if (j == i + 1) throw SyntaxError("expected digits after '#'", start);
      out.push_back({TokenKind::kTag, std::string(text.substr(i + 1, j - i - 1)),
                     start});
      advance(j - i);
      continue;
    }
    if (ident_char(c)) {
      SourcePos start = pos;
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      out.push_back({TokenKind::kIdent, std::string(text.substr(i, j - i)),
                     start});
      advance(j - i);
      continue;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", pos);
  }
  out.push_back({TokenKind::kEnd, "", pos});
  return out;
}

TokenStream::TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty() || tokens_.back().kind != TokenKind::kEnd)
    tokens_.push_back({TokenKind::kEnd, "", {}});
}

const Token &TokenStream::peek(std::size_t ahead) const {
  std::size_t p = pos_ + ahead;
  return p < tokens_.size() ? tokens_[p] : tokens_.back();
}

const Token &TokenStream::next() {
  const Token &t = peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return t;
}

bool TokenStream::accept(TokenKind kind) {
  if (!at(kind)) return false;
  next();
  return true;
}

const Token &TokenStream::expect(TokenKind kind, const char *what) {
  if (!at(kind)) {
    fail(std::string("expected ") + what + ", found " +
         (peek().kind == TokenKind::kEnd ? std::string("end of input")
                                         : "'" + peek().text + "'"));
  }
  return next();
}

void TokenStream::fail(const std::string &message) const {
  throw SyntaxError(message, peek().pos);
}

}  // namespace tfsam
