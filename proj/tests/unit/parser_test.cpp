//
// Copyright 2026 The tfsam Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include "random.hpp"
#include "tfsam/parser.hpp"

namespace tfsam {
namespace {

const Grammar &toy() {
  static const Grammar g = load_grammar(TFSAM_GRAMMARS "/toy.tfs");
  return g;
}

constexpr const char *kFig1Types = R"(
bot sub [g,d].
  g sub [a,b] intro [f3:d].
    a sub [c] intro [f1:bot].
      c sub [] intro [f4:bot].
    b sub [c,e] intro [f2:bot].
  d sub [d1,d2].
)";

Grammar with_fig1(const std::string &clauses) { return parse_grammar(kFig1Types + clauses); }

TEST(Parser, ToyGrammarAccepts) {
  const auto &g = toy();
  ParseResult r = parse(g, split_words("w1 w2"));
  ASSERT_EQ(r.parses.size(), 1u);
  EXPECT_TRUE(iso(r.heads()[0], parse_term("a(d2,d)", g.types)));
  EXPECT_TRUE(r.stats.fixed_point);
  EXPECT_EQ(dump_chart(r, g),
            "[0,0] rho @ 0\n"
            "[0,1] lex w1 => a(d2,d)\n"
            "[0,1] rho @ 1\n"
            "[0,2] rho => a(d2,d)\n"
            "[0,2] rho @ 1\n"
            "[1,1] rho @ 0\n"
            "[1,2] lex w2 => d\n");
}

TEST(Parser, ToyGrammarRejectsSwappedWords) {
  ParseResult r = parse(toy(), split_words("w2 w1"));
  EXPECT_TRUE(r.parses.empty());
  EXPECT_TRUE(r.stats.fixed_point);
  for (const Edge &e : r.edges) EXPECT_FALSE(e.complete && e.from == 0 && e.to == 2);
}

TEST(Parser, RuleApplication) {
  const auto &h = toy().types;
  auto head = apply_rule(parse_mrs("a(bot,#3 d), d => a(d2,#3)", h), parse_mrs("a(d2,d1), d2", h), h);
  ASSERT_TRUE(head);
  EXPECT_TRUE(iso(*head, parse_term("a(d2,d1)", h)));
  EXPECT_FALSE(apply_rule(parse_mrs("a(bot,#3 d), d => a(d2,#3)", h), parse_mrs("a(d2,d1), a", h), h));
  EXPECT_FALSE(apply_rule(parse_mrs("a(bot,#3 d), #3 => a(d2,#3)", h), parse_mrs("a(d2,d1), d2", h), h));
  head = apply_rule(parse_mrs("a(bot,#3 d), #3 => a(d2,#3)", h), parse_mrs("a(d2,d), d1", h), h);
  ASSERT_TRUE(head);
  EXPECT_EQ(print(*head, h), "a(d2,d1)");
  EXPECT_THROW(apply_rule(parse_mrs("d => d", h), parse_mrs("d, d", h), h), TermError);
}

TEST(Parser, InputSharingAcrossElementsIsKept) {
  const auto &h = toy().types;
  auto head = apply_rule(parse_mrs("a(#1 bot,d), #1 => b(#1,d)", h), parse_mrs("a(d1,d), d1", h), h);
  ASSERT_TRUE(head);
  EXPECT_EQ(print(*head, h), "b(d1,d)");
}

TEST(Parser, AmbiguityGivesSeveralParses) {
  Grammar g = with_fig1(
      "lex x: d1. lex y: d2.\n"
      "rule left: d1, d2 => a(d1,d).\n"
      "rule right: d1, d => a(d2,d).\n"
      "start: a.\n");
  ParseResult r = parse(g, split_words("x y"));
  ASSERT_EQ(r.parses.size(), 2u);
  EXPECT_FALSE(iso(r.heads()[0], r.heads()[1]));
}

TEST(Parser, LexicalAmbiguity) {
  Grammar g = with_fig1("lex x: d1. lex x: d2. lex x: d1.\nstart: d.\n");
  ParseResult r = parse(g, split_words("x"));
  EXPECT_EQ(r.parses.size(), 2u);
  EXPECT_EQ(r.stats.duplicates, 1u);
}

TEST(Parser, SelfFeedingUnaryRuleReachesFixedPoint) {
  Grammar g = with_fig1("lex x: d1.\nrule id: #1 d => #1.\nrule up: d => d.\nstart: d.\n");
  ParseResult r = parse(g, split_words("x x"));
  EXPECT_TRUE(r.stats.fixed_point);
  EXPECT_GT(r.stats.duplicates, 0u);
  EXPECT_TRUE(r.parses.empty());
  ParseResult one = parse(g, split_words("x"));
  // Items differ by rule: lex d1, id d1, up d, id d.
  EXPECT_EQ(one.parses.size(), 4u);
}

TEST(Parser, LimitsAreEnforced) {
  Grammar g = parse_grammar(
      "bot sub [node,end]. node sub [] intro [next:bot].\n"
      "lex x: end.\nrule grow: #1 bot => node(#1).\nstart: node.\n");
  EXPECT_THROW(parse(g, split_words("x"), {.limits = {.max_items = 50}}), LimitError);
  EXPECT_THROW(parse(g, split_words("x"), {.limits = {.max_steps = 50}}), LimitError);
}

TEST(Parser, EqualHeadsInDifferentFormsAreDuplicates) {
  Grammar g = parse_grammar(
      "bot sub [node]. node sub [] intro [next:node].\n"
      "lex x: node.\nrule wrap: #1 node => node(#1).\nstart: node.\n");
  ParseResult r = parse(g, split_words("x"));
  EXPECT_TRUE(r.stats.fixed_point);
  ASSERT_EQ(r.parses.size(), 2u);  // lexical and wrapped
  for (const Term &t : r.heads()) EXPECT_EQ(print(t, g.types), "node");
}

TEST(Parser, InputErrors) {
  EXPECT_THROW(parse(toy(), split_words("w1 w3")), InputError);
  EXPECT_THROW(parse(toy(), split_words("")), InputError);
  Grammar g = with_fig1("lex x: d1.\n");
  EXPECT_THROW(parse(g, split_words("x")), InputError);
}

TEST(Parser, ParserIsReusable) {
  CompiledGrammar cg = compile_grammar(toy());
  Parser p(cg);
  auto words = split_words("w1 w2");
  ParseResult a = p.parse(words);
  ParseResult b = p.parse(words);
  EXPECT_EQ(dump_chart(a, toy()), dump_chart(b, toy()));
  EXPECT_EQ(cg.code.find("rho"), 0u);
  EXPECT_NE(cg.code.find("w1/1"), CodeArea{}.size());
}

TEST(ParserProperties, RandomGrammars) {
  gen::Rng rng(211);
  std::size_t runs = 0, checks = 0, limited = 0, accepted = 0;
  for (int i = 0; i < 150; ++i) {
    Grammar g = gen::grammar(rng, {});
    CompiledGrammar cg = compile_grammar(g);
    for (int k = 0; k < 3; ++k) {
      auto words = gen::sentence(rng, g, 4);
      ParseOptions opts{.limits = {.max_items = 400, .max_steps = 400}, .verify_undo = true};
      Parser p(cg, opts);
      ++runs;
      try {
        ParseResult r = p.parse(words);
        accepted += !r.parses.empty();
        for (const Edge &e : r.edges)
          if (e.complete) EXPECT_TRUE(well_typed_check(e.head, g.types).empty()) << print(e.head, g.types);
        Parser again(cg, opts);
        EXPECT_EQ(dump_chart(r, g), dump_chart(again.parse(words), g));
      } catch (const LimitError &) {
        ++limited;
      }
      EXPECT_EQ(p.stats().undo_violations, 0u);
      EXPECT_EQ(p.stats().undo_checks, p.stats().combinations);
      checks += p.stats().undo_checks;
    }
  }
  EXPECT_GT(checks, 1000u);
  EXPECT_LT(limited * 10, runs);
  EXPECT_GT(accepted, 0u);
}

TEST(ParserProperties, LazyAndEagerChartsAgree) {
  gen::Rng rng(223);
  gen::GrammarShape shape;
  shape.types.loops = false;
  for (int i = 0; i < 60; ++i) {
    Grammar g = gen::grammar(rng, shape);
    auto words = gen::sentence(rng, g, 3);
    ParseOptions lazy{.limits = {.max_items = 2000, .max_steps = 2000}};
    ParseOptions eager = lazy;
    eager.machine.lazy = false;
    try {
      ParseResult a = parse(g, words, lazy);
      ParseResult b = parse(g, words, eager);
      ASSERT_EQ(a.parses.size(), b.parses.size());
      for (std::size_t k = 0; k < a.parses.size(); ++k)
        EXPECT_TRUE(iso(expand_general(a.heads()[k], g.types), expand_general(b.heads()[k], g.types)));
    } catch (const LimitError &) {
    }
  }
}

}  // namespace
}  // namespace tfsam
