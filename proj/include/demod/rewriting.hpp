#pragma once

#include <optional>
#include <variant>

#include "demod/budgets.hpp"
#include "demod/syntax.hpp"

namespace demod {

enum class RuleKind { TermRule, PropRule };

// A named rewrite rule. Term rules rewrite terms, proposition rules
// rewrite atomic propositions into arbitrary propositions. Free variables
// of either side are the rule's pattern variables.
struct RewriteRule {
  std::string name;
  RuleKind kind = RuleKind::PropRule;
  TermPtr term_lhs, term_rhs;  // TermRule
  PropPtr prop_lhs, prop_rhs;  // PropRule; lhs is an atom
};

struct RewriteSystem {
  Signature sig;
  std::vector<RewriteRule> rules;

  const RewriteRule* find(const std::string& name) const;
  // Checks: unique rule names, atomic proposition LHS, non-variable term
  // LHS, rhs variables contained in lhs variables, both sides well-sorted.
  void validate() const;
  // The same system with proposition rules removed. Used by the fold/unfold
  // and supernatural checkers, where the propositional congruence is
  // replaced by explicit rule nodes and only term rewriting stays implicit.
  RewriteSystem term_only() const;
  bool has_prop_rules() const;
};

// One rewrite step: where it happened and with which rule. Positions are
// child-index paths from the root (atom/apply arguments and connective
// children in order, quantifier body = child 0).
struct RewriteStep {
  std::vector<int> pos;
  std::string rule;
};

std::optional<RewriteStep> rewrite_step(const TermPtr& e, const RewriteSystem& R, TermPtr* out);
std::optional<RewriteStep> rewrite_step(const PropPtr& e, const RewriteSystem& R, PropPtr* out);

// Replays recorded steps from `start`, verifying each against the
// leftmost-outermost strategy. Throws KernelError on divergence.
TermPtr replay_steps(const TermPtr& start, const std::vector<RewriteStep>& steps,
                     const RewriteSystem& R);
PropPtr replay_steps(const PropPtr& start, const std::vector<RewriteStep>& steps,
                     const RewriteSystem& R);

enum class NormalizeStatus { NormalForm, FuelExhausted };

template <class T>
struct NormalizeResult {
  NormalizeStatus status = NormalizeStatus::NormalForm;
  T value;
  std::vector<RewriteStep> steps;
};

NormalizeResult<TermPtr> normalize(const TermPtr& e, const RewriteSystem& R, std::size_t fuel);
NormalizeResult<PropPtr> normalize(const PropPtr& e, const RewriteSystem& R, std::size_t fuel);

// Weak-head normalization of a proposition: rewrites only while the root
// is still an atom, i.e. until a connective or quantifier is exposed.
NormalizeResult<PropPtr> whnf(const PropPtr& e, const RewriteSystem& R, std::size_t budget);

enum class Congruence { Yes, No, Unknown };

template <class T>
struct JoinWitness {
  std::vector<RewriteStep> from_a, from_b;
  T meet;
};

template <class T>
struct CongruenceResult {
  Congruence verdict = Congruence::Unknown;
  std::optional<JoinWitness<T>> witness;  // present iff Yes
};

// Joinability along the leftmost-outermost strategy. Yes comes with a
// replayable witness; No only when both sides reach distinct normal forms
// within `depth` steps; Unknown otherwise.
CongruenceResult<TermPtr> congruent(const TermPtr& a, const TermPtr& b, const RewriteSystem& R,
                                    std::size_t depth);
CongruenceResult<PropPtr> congruent(const PropPtr& a, const PropPtr& b, const RewriteSystem& R,
                                    std::size_t depth);

bool validate_witness(const TermPtr& a, const TermPtr& b, const JoinWitness<TermPtr>& w,
                      const RewriteSystem& R);
bool validate_witness(const PropPtr& a, const PropPtr& b, const JoinWitness<PropPtr>& w,
                      const RewriteSystem& R);

// First-order overlap with variables renamed apart and canonically
// renamed back (x1, x2, ...) in the reported peak.
struct CriticalPair {
  std::string rule1, rule2;
  std::variant<TermPtr, PropPtr> peak, left, right;
  bool joinable = false;  // within the given budget
};

std::vector<CriticalPair> critical_pairs(const RewriteSystem& R, std::size_t join_depth);

// First-order matching; extends `subst` in place. Pattern variables are
// the free variables of the pattern.
bool match_term(const TermPtr& pattern, const TermPtr& subject,
                std::map<std::string, TermPtr>& subst);
bool match_atom(const PropPtr& atom_pattern, const PropPtr& subject,
                std::map<std::string, TermPtr>& subst);

}  // namespace demod
