//
// Copyright 2026 The tfsam Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <algorithm>

#include "random.hpp"
#include "tfsam/compiler.hpp"
#include "tfsam/grammar.hpp"
#include "tfsam/machine.hpp"

namespace tfsam {
namespace {

const TypeHierarchy &fig1() {
  static const TypeHierarchy h = load_grammar(TFSAM_GRAMMARS "/fig1.tfs").types;
  return h;
}

std::vector<Instruction> query(std::string_view text) {
  return compile_query(flatten(parse_term(text, fig1())), fig1());
}

std::vector<Instruction> program(std::string_view text) {
  return compile_program(flatten(parse_term(text, fig1())), fig1());
}

std::vector<std::string> lines(const std::string &s) {
  std::vector<std::string> out;
  std::size_t at = 0;
  while (at < s.size()) {
    std::size_t nl = s.find('\n', at);
    out.push_back(s.substr(at, nl - at));
    at = nl + 1;
  }
  return out;
}

TEST(Compiler, QueryCodeEmitsNodesThenArcs) {
  EXPECT_EQ(disassemble(query("b(b(#1 d,#1),d)"), fig1()),
            "put_node b/2,X1\n"
            "put_node b/2,X2\n"
            "put_node d/0,X4\n"
            "put_node d/0,X3\n"
            "put_arc X1,1,X2\n"
            "put_arc X1,2,X3\n"
            "put_arc X2,1,X4\n"
            "put_arc X2,2,X4\n");
}

TEST(Compiler, QueryCodeHasTheListedInstructionMultiset) {
  // Arcs listed under their node give the same multiset.
  std::vector<std::string> listed = {
      "put_node b/2,X1", "put_arc X1,1,X2", "put_arc X1,2,X3", "put_node b/2,X2",
      "put_arc X2,1,X4", "put_arc X2,2,X4", "put_node d/0,X4", "put_node d/0,X3"};
  auto ours = lines(disassemble(query("b(b(#1 d,#1),d)"), fig1()));
  std::sort(listed.begin(), listed.end());
  std::sort(ours.begin(), ours.end());
  EXPECT_EQ(ours, listed);
}

TEST(Compiler, SingleLeafQuery) {
  EXPECT_EQ(disassemble(query("d"), fig1()), "put_node d/0,X1\n");
}

TEST(Compiler, ProgramCodeOfTheExample) {
  EXPECT_EQ(disassemble(program("a(#3 d1,#3)"), fig1()),
            "get_structure a/2,X1\n"
            "unify_variable X2\n"
            "unify_value X2\n"
            "get_structure d1/0,X2\n");
  EXPECT_EQ(disassemble(program("d"), fig1()), "get_structure d/0,X1\n");
  EXPECT_EQ(disassemble(program("b(#1 d,#1)"), fig1()),
            "get_structure b/2,X1\n"
            "unify_variable X2\n"
            "unify_value X2\n"
            "get_structure d/0,X2\n");
}

TEST(Compiler, GeneralNodesUseVarInstructions) {
  EXPECT_EQ(disassemble(query("a(bot,g)"), fig1()),
            "put_node a/2,X1\nput_node bot/0,X2\nput_var g,X3\nput_arc X1,1,X2\nput_arc X1,2,X3\n");
  EXPECT_EQ(disassemble(program("a(bot,g)"), fig1()),
            "get_structure a/2,X1\nunify_variable X2\nunify_variable X3\n"
            "get_structure bot/0,X2\nget_var g,X3\n");
}

TEST(Compiler, RuleLayout) {
  const auto &h = fig1();
  RuleCode rc = compile_rule(parse_mrs("a(bot,#3 d), d => a(d2,#3)", h), h);
  EXPECT_EQ(disassemble(rc.code, h),
            "start_rule 2\n"
            "get_structure a/2,X1\n"
            "unify_variable X2\n"
            "unify_variable X3\n"
            "get_structure bot/0,X2\n"
            "get_structure d/0,X3\n"
            "move_dot\n"
            "next_item\n"
            "get_structure d/0,X4\n"
            "move_dot\n"
            "next_item\n"
            "put_node a/2,X5\n"
            "put_node d2/0,X6\n"
            "put_arc X5,1,X6\n"
            "put_arc X5,2,X3\n"
            "end_rule\n");
  EXPECT_EQ(rc.body_roots, (std::vector<Reg>{1, 4}));
  EXPECT_EQ(rc.head_root, 5u);
  EXPECT_EQ(rc.resume, (std::vector<std::size_t>{0, 7, 10}));
  EXPECT_TRUE(std::holds_alternative<EndRule>(rc.code.back()));
}

TEST(Compiler, UnaryRuleAndSharedRoots) {
  const auto &h = fig1();
  RuleCode unary = compile_rule(parse_mrs("d => d", h), h);
  EXPECT_EQ(disassemble(unary.code, h),
            "start_rule 1\nget_structure d/0,X1\nmove_dot\nnext_item\nput_node d/0,X2\nend_rule\n");
  RuleCode shared = compile_rule(parse_mrs("#1 d, #1 => #1", h), h);
  EXPECT_EQ(disassemble(shared.code, h),
            "start_rule 2\nget_structure d/0,X1\nmove_dot\nnext_item\nmove_dot\nnext_item\nend_rule\n");
  EXPECT_EQ(shared.body_roots, (std::vector<Reg>{1, 1}));
  EXPECT_EQ(shared.head_root, 1u);
  EXPECT_THROW(compile_rule(parse_mrs("d, d", h), h), TermError);
}

TEST(Compiler, InputCode) {
  const auto &h = fig1();
  std::vector<std::vector<Term>> words = {{parse_term("a(d2,d1)", h)}, {parse_term("d2", h)}};
  InputCode ic = compile_input(words, h);
  EXPECT_EQ(disassemble(ic.code, h),
            "advance\nput_node a/2,X1\nput_node d2/0,X2\nput_node d1/0,X3\nput_arc X1,1,X2\n"
            "put_arc X1,2,X3\nadvance\nput_node d2/0,X4\n");
  ASSERT_EQ(ic.entries.size(), 2u);
  EXPECT_EQ(ic.entries[1].position, 1u);
  EXPECT_EQ(ic.entries[1].root, 4u);
  EXPECT_TRUE(compile_input({}, h).code.empty());
}

TEST(Compiler, DisassembleWithLabelsAndAssembleBack) {
  const auto &h = fig1();
  CodeArea area;
  area.append("query", query("b(b(#1 d,#1),d)"));
  area.append("program", program("a(#3 d1,#3)"));
  RuleCode rc = compile_rule(parse_mrs("a(bot,#3 d), d => a(d2,#3)", h), h);
  area.append("rho", rc.code);
  std::string text = disassemble(area, h);
  EXPECT_EQ(text.rfind("query:\nput_node b/2,X1\n", 0), 0u);
  EXPECT_NE(text.find("program:\nget_structure a/2,X1\n"), std::string::npos);
  EXPECT_EQ(assemble(text, h), area);
  EXPECT_EQ(area.find("rho"), 12u);
  EXPECT_EQ(disassemble(CodeArea{}, h), "");
  EXPECT_THROW(assemble("put_node a/3,X1\n", h), SyntaxError);
  EXPECT_THROW(assemble("jump X1\n", h), SyntaxError);
}

TEST(CompilerProperties, QueryCodeIsOrderIndependentWithinStreams) {
  gen::Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    auto h = gen::hierarchy(rng, {});
    Term t = gen::term(rng, h, {});
    auto code = compile_query(flatten(t), h);
    auto split = std::partition_point(code.begin(), code.end(), [](const Instruction &x) {
      return !std::holds_alternative<PutArc>(x);
    });
    ASSERT_TRUE(std::all_of(split, code.end(), [](const Instruction &x) {
      return std::holds_alternative<PutArc>(x);
    }));
    std::shuffle(code.begin(), split, rng);
    std::shuffle(split, code.end(), rng);
    Machine m(h);
    ASSERT_TRUE(m.execute(code));
    EXPECT_TRUE(iso(m.extract(m.reg(1)), t)) << print(t, h);
  }
}

TEST(CompilerProperties, ProgramAgainstItsOwnQueryIsIdempotent) {
  gen::Rng rng(19);
  for (int i = 0; i < 200; ++i) {
    auto h = gen::hierarchy(rng, {});
    Term t = gen::term(rng, h, {});
    auto r = unify_terms(t, t, h);
    ASSERT_TRUE(r.has_value()) << print(t, h);
    EXPECT_TRUE(iso(collapse_general(*r, h), collapse_general(t, h))) << print(t, h) << " vs " << print(*r, h);
  }
}

TEST(CompilerProperties, FirstOccurrenceRule) {
  gen::Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    auto h = gen::hierarchy(rng, {});
    Term t = gen::term(rng, h, {});
    std::set<Reg> seen = {1};
    for (const auto &inst : compile_program(flatten(t), h)) {
      if (auto *v = std::get_if<UnifyVariable>(&inst)) EXPECT_TRUE(seen.insert(v->reg).second);
      if (auto *v = std::get_if<UnifyValue>(&inst)) EXPECT_TRUE(seen.count(v->reg));
      if (auto *g = std::get_if<GetStructure>(&inst)) {
        EXPECT_TRUE(seen.count(g->reg));
        EXPECT_EQ(g->arity, h.arity(g->type));
      }
    }
  }
}

}  // namespace
}  // namespace tfsam
