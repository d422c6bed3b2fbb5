//
// Copyright 2026 The tfsam Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "tfsam/parser.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

namespace tfsam {

CompiledGrammar compile_grammar(const Grammar &g) {
  CompiledGrammar cg;
  cg.grammar = &g;
  for (const Rule &r : g.rules) {
    RuleCode rc = compile_rule(r.mrs, g.types);
    std::vector<Reg> bound;
    for (std::size_t at : rc.resume)
      bound.push_back(max_register(std::span(rc.code).first(at)));
    cg.code.append(r.name, rc.code);
    cg.rules.push_back(std::move(rc));
    cg.bound.push_back(std::move(bound));
  }
  std::map<std::string, int> seen;
  for (const LexEntry &e : g.lexicon) {
    int k = ++seen[e.word];
    cg.code.append(e.word + "/" + std::to_string(k), compile_query(flatten(e.term), g.types));
  }
  return cg;
}

std::vector<Term> ParseResult::heads() const {
  std::vector<Term> out;
  for (std::size_t i : parses) out.push_back(edges[i].head);
  return out;
}

Parser::Parser(const CompiledGrammar &cg, ParseOptions options)
    : cg_(&cg), options_(options), machine_(cg.grammar->types, options.machine) {}

Advanced Parser::advance(std::size_t rule, std::size_t dot, const Mrs &state, const Term &next) {
  const TypeHierarchy &h = cg_->grammar->types;
  const RuleCode &rc = cg_->rules.at(rule);
  const Reg bound = cg_->bound[rule][dot];
  if (state.roots.size() != bound) throw MachineError("edge state does not match its rule");

  Machine &m = machine_;
  std::vector<Cell> before;
  if (options_.verify_undo) before.assign(m.heap().begin(), m.heap().end());
  const Machine::Mark mark = m.checkpoint();
  ++stats_.combinations;

  // Fresh copies of the complete structure and of the edge's registers.
  if (!m.execute(compile_query(flatten(next), h))) throw MachineError("query code failed");
  const Address incoming = m.reg(1);
  std::vector<Address> regs;
  if (bound > 0) {
    EquationSet eqs = flatten(state);
    m.clear_registers();
    if (!m.execute(compile_query(eqs, h))) throw MachineError("query code failed");
    for (Reg r : eqs.root_regs) regs.push_back(m.reg(r));
  }
  m.clear_registers();
  for (Reg r = 1; r <= bound; ++r) m.set_reg(r, regs[r - 1]);

  Advanced out;
  bool ok = true;
  const Reg root = rc.body_roots[dot];
  if (root <= bound) {
    ok = m.unify(m.reg(root), incoming);  // element shared with an earlier one
  } else {
    m.set_reg(root, incoming);
  }
  Stop stop{};
  if (ok) {
    stop = m.run(rc.code, rc.resume[dot] + 1);
    ok = stop.kind == Stop::Kind::kControl;
  }
  if (ok) {
    if (!std::holds_alternative<MoveDot>(rc.code[stop.pc])) throw MachineError("expected move_dot");
    const std::size_t reached = dot + 1;
    if (reached < rc.body_roots.size()) {
      std::vector<Address> roots;
      for (Reg r = 1; r <= cg_->bound[rule][reached]; ++r) roots.push_back(m.reg(r));
      out.value = m.extract(roots);
    } else {
      stop = m.run(rc.code, stop.pc + 2);
      if (stop.kind != Stop::Kind::kControl || !std::holds_alternative<EndRule>(rc.code[stop.pc]))
        throw MachineError("head construction did not reach end_rule");
      out.value = m.extract(m.reg(rc.head_root));
    }
  } else {
    ++stats_.failures;
  }

  m.undo(mark);
  if (options_.verify_undo) {
    ++stats_.undo_checks;
    if (!std::equal(before.begin(), before.end(), m.heap().begin(), m.heap().end()))
      ++stats_.undo_violations;
  }
  return out;
}

ParseResult Parser::parse(std::span<const std::string> words) {
  const Grammar &g = *cg_->grammar;
  const TypeHierarchy &h = g.types;
  if (words.empty()) throw InputError("empty input");
  if (!g.start) throw InputError("the grammar has no start clause");

  const std::size_t n = words.size();
  std::vector<std::vector<Term>> entries(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const LexEntry *e : g.entries(words[i])) entries[i].push_back(e->term);
    if (entries[i].empty()) throw InputError("unknown word '" + words[i] + "'");
  }

  stats_ = {};
  machine_.reset();
  ParseResult result;
  result.length = n;
  auto &edges = result.edges;
  std::vector<std::vector<std::vector<std::size_t>>> cell(
      n + 1, std::vector<std::vector<std::size_t>>(n + 1));
  std::vector<std::vector<std::size_t>> processed(n + 1);  // complete edges by start
  std::deque<std::size_t> agenda;
  std::deque<std::size_t> fresh_active;

  auto add = [&](Edge e) -> std::optional<std::size_t> {
    // Iso terms print alike, so unequal hashes rule out duplicates cheaply.
    e.fingerprint = std::hash<std::string>{}(e.complete ? print(e.head, h) : print(e.state, h));
    for (std::size_t k : cell[e.from][e.to]) {
      const Edge &o = edges[k];
      if (o.rule != e.rule || o.dot != e.dot || o.complete != e.complete) continue;
      if (o.fingerprint != e.fingerprint) continue;
      if (e.complete ? iso(o.head, e.head) : iso(o.state, e.state)) {
        ++stats_.duplicates;
        return std::nullopt;
      }
    }
    if (edges.size() >= options_.limits.max_items)
      throw LimitError("more than " + std::to_string(options_.limits.max_items) + " chart items");
    std::size_t id = edges.size();
    cell[e.from][e.to].push_back(id);
    edges.push_back(std::move(e));
    return id;
  };

  // Lexical edges come from running the input code.
  InputCode input = compile_input(entries, h);
  {
    std::size_t pc = 0;
    for (;;) {
      Stop s = machine_.run(input.code, pc);
      if (s.kind == Stop::Kind::kFail) throw MachineError("input code failed");
      if (s.kind == Stop::Kind::kEnd) break;
      pc = s.pc + 1;
    }
  }
  for (const InputEntry &ie : input.entries) {
    Edge e;
    e.from = ie.position;
    e.to = ie.position + 1;
    e.complete = true;
    e.head = collapse_general(machine_.extract(machine_.reg(ie.root)), h);
    e.word = words[ie.position];
    if (auto id = add(std::move(e))) agenda.push_back(*id);
  }
  machine_.clear_registers();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < g.rules.size(); ++r) {
      Edge e;
      e.from = e.to = i;
      e.rule = static_cast<int>(r);
      add(std::move(e));
    }
  }

  auto combine = [&](std::size_t active, std::size_t complete) {
    const Edge &a = edges[active];
    const Edge &c = edges[complete];
    Advanced adv = advance(static_cast<std::size_t>(a.rule), a.dot, a.state, c.head);
    if (adv.failed()) return;
    Edge e;
    e.from = a.from;
    e.to = c.to;
    e.rule = a.rule;
    e.dot = a.dot + 1;
    if (adv.complete()) {
      e.complete = true;
      e.head = collapse_general(std::get<Term>(adv.value), h);
    } else {
      e.state = std::get<Mrs>(std::move(adv.value));
    }
    const bool complete_edge = e.complete;
    if (auto id = add(std::move(e))) (complete_edge ? agenda : fresh_active).push_back(*id);
  };

  while (!agenda.empty()) {
    if (++stats_.steps > options_.limits.max_steps)
      throw LimitError("more than " + std::to_string(options_.limits.max_steps) + " agenda steps");
    const std::size_t c = agenda.front();
    agenda.pop_front();
    const std::size_t k = edges[c].from;
    processed[k].push_back(c);
    // Active edges ending where the complete one starts, nearest cell first.
    for (std::size_t i = k + 1; i-- > 0;) {
      const std::vector<std::size_t> actives = cell[i][k];
      for (std::size_t a : actives)
        if (!edges[a].complete) combine(a, c);
    }
    // Edges made active just now also meet complete edges processed before.
    while (!fresh_active.empty()) {
      const std::size_t a = fresh_active.front();
      fresh_active.pop_front();
      const std::vector<std::size_t> done = processed[edges[a].to];
      for (std::size_t d : done) combine(a, d);
    }
  }
  stats_.fixed_point = true;

  for (std::size_t id : cell[0][n]) {
    const Edge &e = edges[id];
    if (e.complete && subsumes(*g.start, e.head, h)) result.parses.push_back(id);
  }
  result.stats = stats_;
  return result;
}

ParseResult parse(const Grammar &g, std::span<const std::string> words, ParseOptions options) {
  CompiledGrammar cg = compile_grammar(g);
  Parser p(cg, options);
  return p.parse(words);
}

std::optional<Term> apply_rule(const Mrs &rule, const Mrs &input, const TypeHierarchy &h,
                               MachineOptions options) {
  if (!rule.has_head || input.roots.size() + 1 != rule.roots.size())
    throw TermError("input length does not match the rule body");
  Grammar g{h, {{"rule", rule, {}}}, {}, std::nullopt};
  CompiledGrammar cg = compile_grammar(g);
  Parser p(cg, ParseOptions{{}, options, false});
  Mrs state;
  // Elements of one MRS share tags; each is passed on as its own term.
  FsGraph whole = to_graph(input);
  for (std::size_t k = 0; k < input.roots.size(); ++k) {
    Advanced a = p.advance(0, k, state, to_term(whole, k));
    if (a.failed()) return std::nullopt;
    if (a.complete()) return std::get<Term>(a.value);
    state = std::get<Mrs>(a.value);
  }
  return std::nullopt;
}

std::string dump_chart(const ParseResult &r, const Grammar &g) {
  std::vector<std::size_t> order(r.edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Edge &x = r.edges[a];
    const Edge &y = r.edges[b];
    return std::pair(x.from, x.to) < std::pair(y.from, y.to);
  });
  std::string out;
  for (std::size_t id : order) {
    const Edge &e = r.edges[id];
    out += "[" + std::to_string(e.from) + "," + std::to_string(e.to) + "] ";
    out += e.rule == kLexical ? "lex " + e.word : g.rules[e.rule].name;
    if (e.complete) {
      out += " => " + print(e.head, g.types);
    } else {
      out += " @ " + std::to_string(e.dot);
    }
    out += '\n';
  }
  return out;
}

}  // namespace tfsam
