//
// Copyright 2026 The tfsam Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "tfsam/typesys.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "tfsam/lexer.hpp"

namespace tfsam {

const char *to_string(FeatureOrigin origin) {
  switch (origin) {
    case FeatureOrigin::kRightOnly: return "RightOnly";
    case FeatureOrigin::kLeftOnly: return "LeftOnly";
    case FeatureOrigin::kBoth: return "Both";
    case FeatureOrigin::kIntroduced: return "Introduced";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Parsing

TypeStatement parse_type_statement(TokenStream &in) {
  TypeStatement st;
  const Token &subject = in.expect(TokenKind::kIdent, "type name");
  st.type = subject.text;
  st.pos = subject.pos;

  const Token &sub = in.expect(TokenKind::kIdent, "'sub'");
  if (sub.text != "sub") {
    throw SyntaxError("expected 'sub', found '" + sub.text + "'", sub.pos);
  }
  in.expect(TokenKind::kLBracket, "'['");
  if (!in.at(TokenKind::kRBracket)) {
    do {
      st.subtypes.push_back(in.expect(TokenKind::kIdent, "type name").text);
    } while (in.accept(TokenKind::kComma));
  }
  in.expect(TokenKind::kRBracket, "']'");

  if (in.at(TokenKind::kIdent) && in.peek().text == "intro") {
    in.next();
    in.expect(TokenKind::kLBracket, "'['");
    if (!in.at(TokenKind::kRBracket)) {
      do {
        std::string feature = in.expect(TokenKind::kIdent, "feature name").text;
        in.expect(TokenKind::kColon, "':'");
        std::string value = in.expect(TokenKind::kIdent, "type name").text;
        st.intro.emplace_back(std::move(feature), std::move(value));
      } while (in.accept(TokenKind::kComma));
    }
    in.expect(TokenKind::kRBracket, "']'");
  }
  in.expect(TokenKind::kPeriod, "'.'");
  return st;
}

TypeSpec parse_type_spec(std::string_view text) {
  TokenStream in(tokenize(text));
  TypeSpec spec;
  std::map<std::string, SourcePos, std::less<>> seen;
  while (!in.at_end()) {
    SourcePos pos = in.peek().pos;
    TypeStatement st = parse_type_statement(in);
    auto [it, inserted] = seen.emplace(st.type, st.pos);
    if (!inserted) {
      throw SyntaxError("duplicate characterization of type '" + st.type +
                            "' (first at line " +
                            std::to_string(it->second.line) + ")",
                        pos);
    }
    spec.statements.push_back(std::move(st));
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

std::string where(const TypeStatement &st) {
  return "line " + std::to_string(st.pos.line) + ": ";
}

}  // namespace

std::optional<TypeId> TypeHierarchy::find_type(std::string_view name) const {
  auto it = type_index_.find(std::string(name));
  if (it == type_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<FeatureId> TypeHierarchy::find_feature(
    std::string_view name) const {
  auto it = feature_index_.find(std::string(name));
  if (it == feature_index_.end()) return std::nullopt;
  return it->second;
}

TypeId TypeHierarchy::type(std::string_view name) const {
  if (auto t = find_type(name)) return *t;
  throw TermError("unknown type '" + std::string(name) + "'");
}

FeatureId TypeHierarchy::feature(std::string_view name) const {
  if (auto f = find_feature(name)) return *f;
  throw TermError("unknown feature '" + std::string(name) + "'");
}

std::optional<std::size_t> TypeHierarchy::feature_position(TypeId t,
                                                           FeatureId f) const {
  const auto &fs = features_[t.value];
  auto it = std::lower_bound(fs.begin(), fs.end(), f);
  if (it == fs.end() || *it != f) return std::nullopt;
  return static_cast<std::size_t>(it - fs.begin());
}

std::optional<TypeId> TypeHierarchy::approp(TypeId t, FeatureId f) const {
  if (auto pos = feature_position(t, f)) return arc_types_[t.value][*pos];
  return std::nullopt;
}

bool TypeHierarchy::has_appropriateness_loop() const {
  return std::any_of(finitely_expandable_.begin(), finitely_expandable_.end(),
                     [](char c) { return c == 0; });
}

std::size_t TypeHierarchy::consistent_pairs() const {
  return static_cast<std::size_t>(
      std::count_if(lub_.begin(), lub_.end(), [](std::int32_t r) { return r >= 0; }));
}

TypeHierarchy TypeHierarchy::validate(const TypeSpec &spec) {
  TypeHierarchy h;
  std::vector<std::string> errors;

  // Phase 1: names. bot is id 0; other types are interned in order of first
  // mention as a subject or a subtype.
  auto intern = [&h](const std::string &name) {
    auto it = h.type_index_.find(name);
    if (it != h.type_index_.end()) return it->second;
    TypeId id{static_cast<std::uint32_t>(h.type_names_.size())};
    h.type_names_.push_back(name);
    h.type_index_.emplace(name, id);
    return id;
  };
  intern(std::string(kBottomName));

  std::map<std::string, const TypeStatement *> characterized;
  for (const auto &st : spec.statements) {
    if (!characterized.emplace(st.type, &st).second) {
      errors.push_back(where(st) + "duplicate characterization of type '" +
                       st.type + "'");
    }
    intern(st.type);
    for (const auto &sub : st.subtypes) {
      if (sub == kBottomName) {
        errors.push_back(where(st) + "'bot' cannot be a subtype of '" +
                         st.type + "'");
        continue;
      }
      intern(sub);
    }
    std::set<std::string> local;
    for (const auto &[f, r] : st.intro) {
      if (!local.insert(f).second) {
        errors.push_back(where(st) + "feature '" + f +
                         "' introduced twice by '" + st.type + "'");
      }
    }
  }
  for (const auto &st : spec.statements) {
    for (const auto &[f, r] : st.intro) {
      if (!h.type_index_.count(r)) {
        errors.push_back(where(st) + "unknown type '" + r +
                         "' referenced as value of feature '" + f + "'");
      }
    }
  }
  if (!errors.empty()) throw SpecError(std::move(errors));

  const std::size_t n = h.type_names_.size();

  // Phase 2: immediate relation and its reflexive transitive closure.
  h.children_.assign(n, {});
  std::vector<std::vector<TypeId>> parents(n);
  for (const auto &st : spec.statements) {
    TypeId t = h.type_index_.at(st.type);
    for (const auto &sub : st.subtypes) {
      TypeId s = h.type_index_.at(sub);
      if (s == t) continue;
      auto &kids = h.children_[t.value];
      if (std::find(kids.begin(), kids.end(), s) == kids.end()) {
        kids.push_back(s);
        parents[s.value].push_back(t);
      }
    }
  }
  for (std::uint32_t t = 1; t < n; ++t) {
    if (parents[t].empty()) {
      h.children_[0].push_back(TypeId{t});
      parents[t].push_back(kBottom);
    }
  }

  h.closure_.assign(n * n, 0);
  for (std::uint32_t t = 0; t < n; ++t) {
    std::vector<std::uint32_t> work{t};
    char *row = &h.closure_[t * n];
    row[t] = 1;
    while (!work.empty()) {
      std::uint32_t u = work.back();
      work.pop_back();
      for (TypeId c : h.children_[u]) {
        if (!row[c.value]) {
          row[c.value] = 1;
          work.push_back(c.value);
        }
      }
    }
  }
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = a + 1; b < n; ++b) {
      if (h.closure_[a * n + b] && h.closure_[b * n + a]) {
        errors.push_back("subsumption is not a partial order: '" +
                         h.type_names_[a] + "' and '" + h.type_names_[b] +
                         "' lie on a cycle");
      }
    }
  }
  if (!errors.empty()) throw SpecError(std::move(errors));

  // Topological order: a type has strictly more ancestors than any of its
  // proper ancestors.
  std::vector<std::size_t> ancestors(n, 0);
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b) ancestors[b] += h.closure_[a * n + b];
  std::vector<std::uint32_t> topo(n);
  std::iota(topo.begin(), topo.end(), 0u);
  std::stable_sort(topo.begin(), topo.end(), [&](std::uint32_t x, std::uint32_t y) {
    return ancestors[x] < ancestors[y];
  });

  std::vector<std::size_t> level(n, 0);
  for (std::uint32_t t : topo) {
    for (TypeId c : h.children_[t])
      level[c.value] = std::max(level[c.value], level[t] + 1);
    h.depth_ = std::max(h.depth_, level[t]);
  }

  // Phase 3: bounded completeness; the lub of a pair is the unique minimal
  // common upper bound.
  h.lub_.assign(n * n, -1);
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = a; b < n; ++b) {
      std::vector<std::uint32_t> upper;
      for (std::uint32_t u = 0; u < n; ++u)
        if (h.closure_[a * n + u] && h.closure_[b * n + u]) upper.push_back(u);
      std::vector<std::uint32_t> minimal;
      for (std::uint32_t u : upper) {
        bool is_min = std::none_of(upper.begin(), upper.end(), [&](std::uint32_t v) {
          return v != u && h.closure_[v * n + u];
        });
        if (is_min) minimal.push_back(u);
      }
      if (minimal.size() == 1) {
        h.lub_[a * n + b] = h.lub_[b * n + a] = static_cast<std::int32_t>(minimal[0]);
      } else if (minimal.size() > 1) {
        std::string msg = "not bounded complete: '" + h.type_names_[a] +
                          "' and '" + h.type_names_[b] +
                          "' have minimal upper bounds";
        for (std::uint32_t u : minimal) msg += " '" + h.type_names_[u] + "'";
        errors.push_back(std::move(msg));
      }
    }
  }
  if (!errors.empty()) throw SpecError(std::move(errors));

  // Phase 4: features. Feature ids follow alphabetical name order.
  std::set<std::string> feature_set;
  for (const auto &st : spec.statements)
    for (const auto &[f, r] : st.intro) feature_set.insert(f);
  for (const auto &f : feature_set) {
    FeatureId id{static_cast<std::uint32_t>(h.feature_names_.size())};
    h.feature_names_.push_back(f);
    h.feature_index_.emplace(f, id);
  }
  const std::size_t nf = h.feature_names_.size();

  // declared[t][f] = value type, when t's statement mentions f.
  std::vector<std::map<std::uint32_t, TypeId>> declared(n);
  std::vector<std::vector<std::uint32_t>> declarers(nf);
  for (const auto &st : spec.statements) {
    TypeId t = h.type_index_.at(st.type);
    for (const auto &[f, r] : st.intro) {
      FeatureId fid = h.feature_index_.at(f);
      declared[t.value][fid.value] = h.type_index_.at(r);
      declarers[fid.value].push_back(t.value);
    }
  }
  h.introducers_.assign(nf, kBottom);
  for (std::size_t f = 0; f < nf; ++f) {
    std::vector<std::uint32_t> minimal;
    for (std::uint32_t d : declarers[f]) {
      bool is_min = std::none_of(declarers[f].begin(), declarers[f].end(),
                                 [&](std::uint32_t e) {
                                   return e != d && h.closure_[e * n + d];
                                 });
      if (is_min) minimal.push_back(d);
    }
    if (minimal.size() != 1) {
      std::string msg = "feature '" + h.feature_names_[f] +
                        "' has no unique least introducing type:";
      for (std::uint32_t d : minimal) msg += " '" + h.type_names_[d] + "'";
      errors.push_back(std::move(msg));
      continue;
    }
    h.introducers_[f] = TypeId{minimal[0]};
  }
  if (!errors.empty()) throw SpecError(std::move(errors));

  // Appropriateness by inheritance, supertypes first. A type inherits the
  // lub of its parents' values and may only specialize it.
  std::vector<std::map<std::uint32_t, TypeId>> approp(n);
  for (std::uint32_t t : topo) {
    auto &mine = approp[t];
    for (TypeId p : parents[t]) {
      if (p.value == t) continue;
      for (const auto &[f, v] : approp[p.value]) {
        auto it = mine.find(f);
        if (it == mine.end()) {
          mine.emplace(f, v);
          continue;
        }
        std::int32_t j = h.lub_[it->second.value * n + v.value];
        if (j < 0) {
          errors.push_back("inconsistent inherited appropriateness for '" +
                           h.type_names_[t] + "' feature '" +
                           h.feature_names_[f] + "'");
          continue;
        }
        it->second = TypeId{static_cast<std::uint32_t>(j)};
      }
    }
    for (const auto &[f, r] : declared[t]) {
      auto it = mine.find(f);
      if (it != mine.end() && !h.closure_[it->second.value * n + r.value]) {
        errors.push_back("non-monotone appropriateness: '" + h.type_names_[t] +
                         "' declares " + h.feature_names_[f] + ":" +
                         h.type_names_[r.value] + " but inherits " +
                         h.feature_names_[f] + ":" +
                         h.type_names_[it->second.value]);
        continue;
      }
      mine[f] = r;
    }
  }
  for (std::uint32_t t = 0; t < n; ++t) {
    for (std::uint32_t s = 0; s < n; ++s) {
      if (s == t || !h.closure_[t * n + s]) continue;
      for (const auto &[f, v] : approp[t]) {
        auto it = approp[s].find(f);
        if (it == approp[s].end()) {
          errors.push_back("feature '" + h.feature_names_[f] +
                           "' appropriate for '" + h.type_names_[t] +
                           "' but not for its subtype '" + h.type_names_[s] + "'");
        } else if (!h.closure_[v.value * n + it->second.value]) {
          errors.push_back("non-monotone appropriateness: " +
                           h.feature_names_[f] + " of '" + h.type_names_[t] +
                           "' is " + h.type_names_[v.value] + " but of '" +
                           h.type_names_[s] + "' is " +
                           h.type_names_[it->second.value]);
        }
      }
    }
  }
  if (!errors.empty()) throw SpecError(std::move(errors));

  h.features_.assign(n, {});
  h.arc_types_.assign(n, {});
  for (std::uint32_t t = 0; t < n; ++t) {
    for (const auto &[f, v] : approp[t]) {  // std::map: ascending feature id
      h.features_[t].push_back(FeatureId{f});
      h.arc_types_[t].push_back(v);
    }
  }

  // Phase 5: unification plans for every ordered pair.
  h.plans_.resize(n * n);
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = 0; b < n; ++b) {
      UnifyPlan &p = h.plans_[a * n + b];
      p.left = TypeId{a};
      p.right = TypeId{b};
      p.result = h.lub(p.left, p.right);
      if (!p.result) continue;
      const auto &rf = h.features_[p.result->value];
      for (std::size_t i = 0; i < rf.size(); ++i) {
        PlanStep step;
        step.feature = rf[i];
        step.value = h.arc_types_[p.result->value][i];
        auto in_left = h.feature_position(p.left, rf[i]);
        auto in_right = h.feature_position(p.right, rf[i]);
        if (in_right) step.right_position = static_cast<std::uint32_t>(*in_right + 1);
        if (in_left && in_right) {
          step.origin = FeatureOrigin::kBoth;
        } else if (in_right) {
          step.origin = FeatureOrigin::kRightOnly;
        } else if (in_left) {
          step.origin = FeatureOrigin::kLeftOnly;
        } else {
          step.origin = FeatureOrigin::kIntroduced;
        }
        p.steps.push_back(step);
      }
    }
  }

  // A type is finitely expandable iff no appropriateness cycle is reachable
  // from it through arc types.
  enum : char { kWhite, kGrey, kBlack };
  std::vector<char> colour(n, kWhite);
  h.finitely_expandable_.assign(n, 1);
  std::function<bool(std::uint32_t)> visit = [&](std::uint32_t t) -> bool {
    if (colour[t] == kGrey) return false;
    if (colour[t] == kBlack) return h.finitely_expandable_[t] != 0;
    colour[t] = kGrey;
    bool ok = true;
    for (TypeId v : h.arc_types_[t]) ok = visit(v.value) && ok;
    colour[t] = kBlack;
    h.finitely_expandable_[t] = ok ? 1 : 0;
    return ok;
  };
  for (std::uint32_t t = 0; t < n; ++t) visit(t);

  return h;
}

}  // namespace tfsam
