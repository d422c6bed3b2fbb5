//
// Copyright 2026 The tfsam Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "oracle.hpp"
#include "random.hpp"
#include "tfsam/compiler.hpp"
#include "tfsam/grammar.hpp"
#include "tfsam/machine.hpp"
#include "tfsam/parser.hpp"

namespace tfsam {
namespace {

// A check returns an empty string on success, a reason otherwise.
using Check = std::function<std::string()>;

const Grammar &fig1() {
  static const Grammar g = load_grammar(TFSAM_GRAMMARS "/fig1.tfs");
  return g;
}

const Grammar &toy() {
  static const Grammar g = load_grammar(TFSAM_GRAMMARS "/toy.tfs");
  return g;
}

std::string expect_eq(const std::string &got, const std::string &want) {
  if (got == want) return {};
  return "got\n" + got + "\nwant\n" + want;
}

bool cyclic(const FsGraph &g) {
  std::vector<int> state(g.nodes.size(), 0);
  std::function<bool(std::uint32_t)> visit = [&](std::uint32_t n) {
    if (state[n] == 1) return true;
    if (state[n] == 2) return false;
    state[n] = 1;
    for (auto a : g.nodes[n].arcs)
      if (visit(a)) return true;
    state[n] = 2;
    return false;
  };
  for (auto r : g.roots)
    if (visit(r)) return true;
  return false;
}

std::string heap_layout() {
  const auto &h = fig1().types;
  Machine m(h);
  if (!m.execute(compile_query(flatten(parse_term("b(b(#1 d,#1),d)", h)), h))) return "query failed";
  return expect_eq(m.dump_heap(1),
                   "1: STR b\n2: REF 4\n3: REF 8\n4: STR b\n5: REF 7\n6: REF 7\n7: STR d\n8: STR d\n");
}

std::string flattening() {
  const auto &h = fig1().types;
  std::string a = expect_eq(print(flatten(parse_term("a(#3 d1,#3)", h)), h), "X1 = a(X2,X2)\nX2 = d1\n");
  std::string b = expect_eq(print(flatten(parse_term("b(b(#1 d,#1),d)", h)), h),
                            "X1 = b(X2,X3)\nX2 = b(X4,X4)\nX4 = d\nX3 = d\n");
  return a + b;
}

std::string compiler_listings() {
  const auto &h = fig1().types;
  std::string got = disassemble(compile_query(flatten(parse_term("b(b(#1 d,#1),d)", h)), h), h);
  std::vector<std::string> ours;
  std::istringstream in(got);
  for (std::string line; std::getline(in, line);) ours.push_back(line);
  std::vector<std::string> listed = {
      "put_node b/2,X1", "put_arc X1,1,X2", "put_arc X1,2,X3", "put_node b/2,X2",
      "put_arc X2,1,X4", "put_arc X2,2,X4", "put_node d/0,X4", "put_node d/0,X3"};
  std::sort(ours.begin(), ours.end());
  std::sort(listed.begin(), listed.end());
  if (ours != listed) return "query multiset differs:\n" + got;
  // Two streams: every put_node precedes every put_arc.
  if (got.find("put_arc") < got.rfind("put_node"))
    return "query code is not node stream then arc stream";
  return expect_eq(disassemble(compile_program(flatten(parse_term("a(#3 d1,#3)", h)), h), h),
                   "get_structure a/2,X1\nunify_variable X2\nunify_value X2\nget_structure d1/0,X2\n");
}

std::string type_plan() {
  const auto &h = fig1().types;
  const UnifyPlan &p = h.plan(h.type("a"), h.type("b"));
  if (!p.result || *p.result != h.type("c")) return "result is not c";
  std::string got;
  for (const PlanStep &s : p.steps) {
    got += std::string(h.feature_name(s.feature)) + " " + to_string(s.origin);
    if (s.origin == FeatureOrigin::kRightOnly || s.origin == FeatureOrigin::kBoth)
      got += "(" + std::to_string(s.right_position) + ")";
    if (s.origin == FeatureOrigin::kIntroduced) got += "(" + std::string(h.type_name(s.value)) + ")";
    got += "; ";
  }
  return expect_eq(got, "f1 LeftOnly; f2 RightOnly(1); f3 Both(2); f4 Introduced(bot); ");
}

std::string rule_application() {
  const auto &h = fig1().types;
  auto head = apply_rule(parse_mrs("a(bot,#3 d), d => a(d2,#3)", h), parse_mrs("a(d2,d1), d2", h), h);
  if (!head) return "rule application failed";
  if (!iso(*head, parse_term("a(d2,d1)", h))) return "head is " + print(*head, h);
  return {};
}

struct Corpus {
  std::size_t pairs = 0, cyclic = 0, unified = 0, failed = 0;
  std::string problem;
};

template <class F>
Corpus over_pairs(std::uint64_t seed, std::size_t count, gen::HierarchyShape shape, F f) {
  gen::Rng rng(seed);
  Corpus c;
  while (c.pairs < count && c.problem.empty()) {
    auto h = gen::hierarchy(rng, shape);
    if (h.type_count() > 12) {
      c.problem = "generator produced more than 12 types";
      break;
    }
    Term a = gen::term(rng, h, {});
    // Every other pair shares a root type so that unification mostly succeeds.
    Term b = (c.pairs % 2 && a.kind == Term::Kind::kFull) ? gen::term(rng, h, {}, a.type)
                                                          : gen::term(rng, h, {});
    FsGraph ga = to_graph(a), gb = to_graph(b);
    if (ga.nodes.size() > 8 || gb.nodes.size() > 8) {
      c.problem = "generator produced more than 8 nodes";
      break;
    }
    ++c.pairs;
    c.cyclic += cyclic(ga) || cyclic(gb);
    std::string why = f(h, a, b, c);
    if (!why.empty()) c.problem = print(a, h) + " / " + print(b, h) + ": " + why;
  }
  return c;
}

bool same(const Term &a, const Term &b, const TypeHierarchy &h) {
  return iso(oracle::canonical(a, h), oracle::canonical(b, h));
}

std::string summary(const Corpus &c) {
  if (!c.problem.empty()) return c.problem;
  return {};
}

std::string oracle_equivalence(std::string *note) {
  Corpus c = over_pairs(1001, 1200, {}, [](const TypeHierarchy &h, const Term &a, const Term &b,
                                           Corpus &c) -> std::string {
    auto r = unify_terms(a, b, h);
    auto o = oracle::unify(a, b, h);
    if (r.has_value() != o.has_value()) return r ? "oracle fails, machine succeeds" : "machine fails, oracle succeeds";
    if (!r) {
      ++c.failed;
      return {};
    }
    ++c.unified;
    if (!same(*r, *o, h)) return "machine " + print(*r, h) + " vs oracle " + print(*o, h);
    return {};
  });
  *note = std::to_string(c.pairs) + " pairs, " + std::to_string(c.cyclic) + " with cycles, " +
          std::to_string(c.unified) + " unified, " + std::to_string(c.failed) + " failed";
  if (c.problem.empty() && c.cyclic == 0) return "no cyclic pair in the corpus";
  if (c.problem.empty() && (c.unified == 0 || c.failed == 0)) return "corpus lacks successes or failures";
  return summary(c);
}

std::string algebraic(std::string *note) {
  Corpus c = over_pairs(1001, 1200, {}, [](const TypeHierarchy &h, const Term &a, const Term &b,
                                           Corpus &) -> std::string {
    auto ab = unify_terms(a, b, h);
    auto ba = unify_terms(b, a, h);
    if (ab.has_value() != ba.has_value()) return "commutativity: success differs";
    if (ab && !same(*ab, *ba, h)) return "commutativity: " + print(*ab, h) + " vs " + print(*ba, h);
    for (const Term *t : {&a, &b}) {
      auto tt = unify_terms(*t, *t, h);
      if (!tt || !same(*tt, *t, h)) return "idempotence fails on " + print(*t, h);
    }
    return {};
  });
  *note = std::to_string(c.pairs) + " pairs";
  return summary(c);
}

std::string lazy_eager(std::string *note) {
  gen::HierarchyShape shape;
  shape.loops = false;
  Corpus c = over_pairs(2002, 1000, shape, [](const TypeHierarchy &h, const Term &a, const Term &b,
                                              Corpus &) -> std::string {
    auto lazy = unify_terms(a, b, h);
    auto eager = unify_terms(a, b, h, {.lazy = false});
    if (lazy.has_value() != eager.has_value()) return "success differs";
    if (lazy && !iso(expand_general(*lazy, h), expand_general(*eager, h)))
      return print(*lazy, h) + " vs " + print(*eager, h);
    return {};
  });
  if (!c.problem.empty()) return c.problem;

  auto h = TypeHierarchy::from_text("bot sub [node]. node sub [] intro [next:node].");
  if (!h.has_appropriateness_loop()) return "loop hierarchy not detected";
  auto r = unify_terms(parse_term("node(node)", h), parse_term("#1 node(#1)", h), h);
  if (!r || print(*r, h) != "#1 node(#1)") return "loop hierarchy does not unify lazily";
  try {
    unify_terms(parse_term("node", h), parse_term("node", h), h, {.lazy = false});
    return "eager mode did not report the loop";
  } catch (const MachineError &) {
  }
  *note = std::to_string(c.pairs) + " loop-free pairs, loop hierarchy unified lazily";
  return {};
}

std::string undo_discipline(std::string *note) {
  gen::Rng rng(3003);
  std::size_t runs = 0, checks = 0, violations = 0, limited = 0;
  for (int i = 0; i < 200; ++i) {
    Grammar g = gen::grammar(rng, {});
    CompiledGrammar cg = compile_grammar(g);
    for (int k = 0; k < 3; ++k) {
      Parser p(cg, {.limits = {.max_items = 400, .max_steps = 400}, .verify_undo = true});
      ++runs;
      try {
        p.parse(gen::sentence(rng, g, 4));
      } catch (const LimitError &) {
        ++limited;
      }
      checks += p.stats().undo_checks;
      violations += p.stats().undo_violations;
      if (p.stats().undo_checks != p.stats().combinations) return "a rule application went unchecked";
    }
  }
  // The toy grammar too, with both a failing and a succeeding application.
  for (const char *input : {"w1 w2", "w2 w1"}) {
    CompiledGrammar cg = compile_grammar(toy());
    Parser p(cg, {.verify_undo = true});
    p.parse(split_words(input));
    checks += p.stats().undo_checks;
    violations += p.stats().undo_violations;
  }
  *note = std::to_string(runs) + " parses (" + std::to_string(limited) + " hit limits), " +
          std::to_string(checks) + " checkpoints compared";
  if (violations) return std::to_string(violations) + " heaps differ from their checkpoint";
  if (checks < 1000) return "too few rule applications checked";
  return {};
}

std::string parser_fixed_point() {
  const auto &g = toy();
  ParseResult ok = parse(g, split_words("w1 w2"));
  if (!ok.stats.fixed_point) return "accept run did not reach a fixed point";
  if (ok.parses.size() != 1 || !iso(ok.heads()[0], parse_term("a(d2,d)", g.types)))
    return "expected exactly the head a(d2,d)";
  ParseResult no = parse(g, split_words("w2 w1"));
  if (!no.stats.fixed_point) return "reject run did not reach a fixed point";
  if (!no.parses.empty()) return "swapped words were accepted";
  return {};
}

}  // namespace
}  // namespace tfsam

int main() {
  using namespace tfsam;
  using Clock = std::chrono::steady_clock;
  struct Criterion {
    int id;
    const char *name;
    double budget_s;
    std::function<std::string(std::string *)> run;
  };
  auto plain = [](std::string (*f)()) { return [f](std::string *) { return f(); }; };
  const std::vector<Criterion> criteria = {
      {1, "heap layout of b(b(#1 d,#1),d)", 1, plain(heap_layout)},
      {2, "flattening to equations", 1, plain(flattening)},
      {3, "query and program code listings", 1, plain(compiler_listings)},
      {4, "type plan for a and b", 1, plain(type_plan)},
      {5, "rule application a(bot,#3 d), d => a(d2,#3)", 1, plain(rule_application)},
      {6, "machine agrees with the reference unifier", 60, oracle_equivalence},
      {7, "commutativity and idempotence", 60, algebraic},
      {8, "lazy and eager most general structures", 60, lazy_eager},
      {9, "heap restored after every rule application", 60, undo_discipline},
      {10, "toy grammar accepts, rejects and reaches a fixed point", 1, plain(parser_fixed_point)},
  };
  int failures = 0;
  for (const auto &c : criteria) {
    std::string note, why;
    const auto start = Clock::now();
    try {
      why = c.run(&note);
    } catch (const std::exception &e) {
      why = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (why.empty() && secs > c.budget_s)
      why = "took " + std::to_string(secs) + " s, budget " + std::to_string(c.budget_s) + " s";
    const bool pass = why.empty();
    failures += !pass;
    std::printf("[%s] %2d %s (%.3f s)%s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs,
                note.empty() ? "" : ": ", note.c_str());
    if (!pass) std::printf("       %s\n", why.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
