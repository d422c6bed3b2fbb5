//
// Copyright 2026 The tfsam Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TFSAM_TYPESYS_HPP_
#define TFSAM_TYPESYS_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tfsam/error.hpp"

namespace tfsam {

// Dense identifier of a type in a validated hierarchy. The most general
// type (written `bot`) is always id 0. The contradictory type is never
// interned; failure is represented out of band (std::nullopt).
struct TypeId {
  std::uint32_t value = 0;
  friend auto operator<=>(TypeId, TypeId) = default;
};

// Dense identifier of a feature. Ids follow the alphabetical order of the
// feature names, so sorting by id is sorting by name.
struct FeatureId {
  std::uint32_t value = 0;
  friend auto operator<=>(FeatureId, FeatureId) = default;
};

inline constexpr TypeId kBottom{0};
inline constexpr std::string_view kBottomName = "bot";

// One `t sub [t1,...,tn] intro [f1:r1,...,fm:rm].` statement.
struct TypeStatement {
  std::string type;
  std::vector<std::string> subtypes;
  std::vector<std::pair<std::string, std::string>> intro;
  SourcePos pos;
};

struct TypeSpec {
  std::vector<TypeStatement> statements;
};

// Parses a sequence of characterization statements. `intro [...]` may be
// omitted. Throws SyntaxError, also for a second statement characterizing
// an already characterized type.
TypeSpec parse_type_spec(std::string_view text);

class TokenStream;
// Parses one statement whose subject identifier is the next token.
TypeStatement parse_type_statement(TokenStream &in);

// Where a feature of a lub comes from, relative to the two operands.
enum class FeatureOrigin : std::uint8_t {
  kRightOnly,   // value taken from the right operand's arc
  kLeftOnly,    // value still to be supplied by the left operand (copy)
  kBoth,        // both operands carry it; values must be unified
  kIntroduced,  // new: most general value of approp(result, f)
};

const char *to_string(FeatureOrigin origin);

struct PlanStep {
  FeatureId feature;
  FeatureOrigin origin = FeatureOrigin::kIntroduced;
  // 1-based offset into the right operand's feature list; 0 when the right
  // operand does not carry the feature.
  std::uint32_t right_position = 0;
  // approp(result, feature); meaningful for every step, used by kIntroduced.
  TypeId value;

  friend bool operator==(const PlanStep &, const PlanStep &) = default;
};

// Precomputed unification of two types: the lub and, for every feature of
// the lub in feature order, the origin of its value.
struct UnifyPlan {
  TypeId left;
  TypeId right;
  std::optional<TypeId> result;
  std::vector<PlanStep> steps;

  bool failed() const { return !result.has_value(); }
  // The right operand already has the lub's type; nothing is built.
  bool keeps_right() const { return result && *result == right; }
};

// Validated, immutable type hierarchy with appropriateness, feature order,
// the full lub table and a unification plan for every type pair.
class TypeHierarchy {
 public:
  // Checks every hierarchy invariant and builds all tables. Throws
  // SpecError listing the violations of the first failing phase.
  static TypeHierarchy validate(const TypeSpec &spec);
  static TypeHierarchy from_text(std::string_view text) {
    return validate(parse_type_spec(text));
  }

  std::size_t type_count() const { return type_names_.size(); }
  std::size_t feature_count() const { return feature_names_.size(); }

  std::string_view type_name(TypeId t) const { return type_names_[t.value]; }
  std::string_view feature_name(FeatureId f) const {
    return feature_names_[f.value];
  }
  std::optional<TypeId> find_type(std::string_view name) const;
  std::optional<FeatureId> find_feature(std::string_view name) const;
  // Throws TermError for unknown names.
  TypeId type(std::string_view name) const;
  FeatureId feature(std::string_view name) const;

  // general ⊑ specific.
  bool subsumes(TypeId general, TypeId specific) const {
    return closure_[general.value * type_count() + specific.value] != 0;
  }
  std::optional<TypeId> lub(TypeId a, TypeId b) const {
    std::int32_t r = lub_[a.value * type_count() + b.value];
    if (r < 0) return std::nullopt;
    return TypeId{static_cast<std::uint32_t>(r)};
  }

  std::span<const FeatureId> features(TypeId t) const {
    return features_[t.value];
  }
  std::size_t arity(TypeId t) const { return features_[t.value].size(); }
  // 0-based position of f in features(t), if appropriate.
  std::optional<std::size_t> feature_position(TypeId t, FeatureId f) const;
  std::optional<TypeId> approp(TypeId t, FeatureId f) const;
  // approp(t, features(t)[i]).
  TypeId arc_type(TypeId t, std::size_t i) const {
    return arc_types_[t.value][i];
  }
  TypeId introducer(FeatureId f) const { return introducers_[f.value]; }

  const UnifyPlan &plan(TypeId left, TypeId right) const {
    return plans_[left.value * type_count() + right.value];
  }

  // Immediate subtypes as declared (after implicit attachment to bot).
  std::span<const TypeId> subtypes(TypeId t) const {
    return children_[t.value];
  }
  // Length of the longest strict subsumption chain starting at bot.
  std::size_t depth() const { return depth_; }
  // False when building the fully expanded most general feature structure
  // of t would not terminate because of an appropriateness loop.
  bool finitely_expandable(TypeId t) const {
    return finitely_expandable_[t.value] != 0;
  }
  bool has_appropriateness_loop() const;

  // Number of consistent (non-failing) ordered pairs in the lub table.
  std::size_t consistent_pairs() const;

 private:
  TypeHierarchy() = default;

  std::vector<std::string> type_names_;
  std::vector<std::string> feature_names_;
  std::unordered_map<std::string, TypeId> type_index_;
  std::unordered_map<std::string, FeatureId> feature_index_;
  std::vector<std::vector<TypeId>> children_;
  std::vector<char> closure_;         // n*n, row = general
  std::vector<std::int32_t> lub_;     // n*n, -1 = failure
  std::vector<std::vector<FeatureId>> features_;
  std::vector<std::vector<TypeId>> arc_types_;
  std::vector<TypeId> introducers_;
  std::vector<UnifyPlan> plans_;
  std::vector<char> finitely_expandable_;
  std::size_t depth_ = 0;
};

}  // namespace tfsam

template <>
struct std::hash<tfsam::TypeId> {
  std::size_t operator()(tfsam::TypeId t) const noexcept {
    return std::hash<std::uint32_t>{}(t.value);
  }
};

#endif  // TFSAM_TYPESYS_HPP_
