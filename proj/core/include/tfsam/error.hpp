//
// Copyright 2026 The tfsam Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TFSAM_ERROR_HPP_
#define TFSAM_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfsam {

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. Carries the position of the offending token.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string &message, SourcePos pos);

  SourcePos pos() const { return pos_; }
  const std::string &detail() const { return detail_; }

 private:
  SourcePos pos_;
  std::string detail_;
};

// A type specification that does not denote a valid hierarchy. All
// diagnostics found in the failing validation phase are collected.
class SpecError : public Error {
 public:
  explicit SpecError(std::vector<std::string> diagnostics);

  const std::vector<std::string> &diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

// Term does not fit the hierarchy: unknown type, arity mismatch, tag misuse.
class TermError : public Error {
 public:
  using Error::Error;
};

// Broken machine invariant (compiler bug or misuse of the machine API).
// Unification failure is never reported this way.
class MachineError : public Error {
 public:
  using Error::Error;
};

// Input the parser cannot start from, such as an unknown word.
class InputError : public Error {
 public:
  using Error::Error;
};

// A configured resource limit was exceeded before a fixed point.
class LimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace tfsam

#endif  // TFSAM_ERROR_HPP_
