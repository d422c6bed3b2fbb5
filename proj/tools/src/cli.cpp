//
// Copyright 2026 The tfsam Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "cli.hpp"

#include <CLI11.hpp>

#include <ostream>
#include <system_error>

#include "tfsam/compiler.hpp"
#include "tfsam/grammar.hpp"
#include "tfsam/machine.hpp"
#include "tfsam/parser.hpp"
#include "tfsam/terms.hpp"
#include "tfsam/typesys.hpp"

namespace tfsam::cli {

namespace {

struct Settings {
  std::string file;
  // compile
  bool disasm = false;
  std::vector<std::string> queries;
  std::vector<std::string> programs;
  bool equations = false;
  // unify
  std::string left;
  std::string right;
  bool dump_heap = false;
  Address heap_base = 0;
  bool eager = false;
  // parse
  std::string input;
  bool chart = false;
  std::size_t max_items = ParseLimits{}.max_items;
  std::size_t max_steps = ParseLimits{}.max_steps;
  bool no_path_compression = false;
};

MachineOptions machine_options(const Settings &s) {
  MachineOptions m;
  m.path_compression = !s.no_path_compression;
  m.lazy = !s.eager;
  return m;
}

int cmd_check(const Settings &s, std::ostream &out) {
  Grammar g = load_grammar(s.file);
  const TypeHierarchy &h = g.types;
  const std::size_t n = h.type_count();
  out << n << " types, valid\n";
  out << h.feature_count() << " features, depth " << h.depth() << "\n";
  out << "lub table " << n << "x" << n << ", " << h.consistent_pairs() << " consistent pairs\n";
  if (h.has_appropriateness_loop()) out << "appropriateness loop present\n";
  out << g.rules.size() << " rules, " << g.lexicon.size() << " lexical entries, "
      << (g.start ? "start defined" : "no start") << "\n";
  return kOk;
}

int cmd_compile(const Settings &s, std::ostream &out) {
  Grammar g = load_grammar(s.file);
  const TypeHierarchy &h = g.types;
  if (!s.queries.empty() || !s.programs.empty()) {
    for (const auto &q : s.queries) {
      EquationSet eqs = flatten(parse_term(q, h));
      if (s.equations) out << print(eqs, h);
      out << disassemble(compile_query(eqs, h), h);
    }
    for (const auto &p : s.programs) {
      EquationSet eqs = flatten(parse_term(p, h));
      if (s.equations) out << print(eqs, h);
      out << disassemble(compile_program(eqs, h), h);
    }
    return kOk;
  }
  CompiledGrammar cg = compile_grammar(g);
  if (s.disasm) {
    out << disassemble(cg.code, h);
  } else {
    out << g.rules.size() << " rules, " << g.lexicon.size() << " lexical entries, "
        << cg.code.size() << " instructions\n";
  }
  return kOk;
}

int cmd_unify(const Settings &s, std::ostream &out) {
  Grammar g = load_grammar(s.file);
  const TypeHierarchy &h = g.types;
  Term a = parse_term(s.left, h);
  Term b = parse_term(s.right, h);
  for (const Term *t : {&a, &b}) {
    auto v = well_typed_check(*t, h);
    if (!v.empty()) throw TermError(print(*t, h) + " is not well typed: " + describe(v.front(), h));
  }
  Machine m(h, machine_options(s));
  m.execute(compile_query(flatten(a), h));
  const Address root = m.reg(1);
  m.clear_registers();
  m.set_reg(1, root);
  const bool ok = m.execute(compile_program(flatten(b), h));
  out << (ok ? print(m.extract(root), h) : std::string("FAIL")) << "\n";
  if (s.dump_heap) out << m.dump_heap(s.heap_base);
  return kOk;
}

int cmd_parse(const Settings &s, std::ostream &out) {
  Grammar g = load_grammar(s.file);
  ParseOptions opts;
  opts.limits = {s.max_items, s.max_steps};
  opts.machine = machine_options(s);
  std::vector<std::string> words = split_words(s.input);
  ParseResult r = parse(g, words, opts);
  if (r.parses.empty()) {
    out << "no parse\n";
  } else {
    for (const Term &t : r.heads()) out << print(t, g.types) << "\n";
  }
  if (s.chart) out << dump_chart(r, g);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  Settings s;
  CLI::App app{"Typed feature structure abstract machine"};
  app.name(args.empty() ? "tfsam" : args[0]);
  app.require_subcommand(1);

  auto *check = app.add_subcommand("check", "Validate a grammar or type hierarchy file");
  check->add_option("file", s.file, "Grammar file")->required();

  auto *compile = app.add_subcommand("compile", "Compile rules and lexicon to machine code");
  compile->add_option("file", s.file, "Grammar file")->required();
  compile->add_flag("--disasm", s.disasm, "Print the instruction listing");
  compile->add_option("--query", s.queries, "Compile a term as query code instead");
  compile->add_option("--program", s.programs, "Compile a term as program code instead");
  compile->add_flag("--equations", s.equations, "Also print the flattened equations");

  auto *unify = app.add_subcommand("unify", "Unify two terms on the machine");
  unify->add_option("file", s.file, "Grammar or hierarchy file")->required();
  unify->add_option("query", s.left, "Term built as query")->required();
  unify->add_option("program", s.right, "Term executed as program")->required();
  unify->add_flag("--dump-heap", s.dump_heap, "Print the heap after unification");
  unify->add_option("--heap-base", s.heap_base, "Address of the first heap cell in dumps");
  unify->add_flag("--eager", s.eager, "Build most general structures in full");
  unify->add_flag("--no-path-compression", s.no_path_compression, "Plain dereferencing");

  auto *parse_cmd = app.add_subcommand("parse", "Parse a sentence");
  parse_cmd->add_option("file", s.file, "Grammar file")->required();
  parse_cmd->add_option("input", s.input, "Words separated by spaces")->required();
  parse_cmd->add_flag("--chart", s.chart, "Dump the chart");
  parse_cmd->add_option("--max-items", s.max_items, "Chart item limit");
  parse_cmd->add_option("--max-steps", s.max_steps, "Agenda step limit");
  parse_cmd->add_flag("--no-path-compression", s.no_path_compression, "Plain dereferencing");

  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (*check) return cmd_check(s, out);
    if (*compile) return cmd_compile(s, out);
    if (*unify) return cmd_unify(s, out);
    return cmd_parse(s, out);
  } catch (const SpecError &e) {
    err << "error: invalid type specification\n";
    for (const auto &d : e.diagnostics()) err << "  " << d << "\n";
    return kInvalidInput;
  } catch (const LimitError &e) {
    err << "error: " << e.what() << "\n";
    return kLimitExceeded;
  } catch (const std::system_error &e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
}

}  // namespace tfsam::cli
