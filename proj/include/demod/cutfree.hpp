#pragma once

#include "demod/reduction.hpp"
#include "demod/semantics.hpp"

namespace demod {

// Bounded goal-directed search for normal (cut-free) proofs: introduction
// phases on the weak-head normalized goal alternated with elimination
// spines from hypotheses. Iterative deepening with memoized failures at
// (sequent, depth) keys; deterministic.
std::optional<ProofPtr> search_cutfree(const Sequent& seq, const RuleSystem& system,
                                       std::size_t depth, const Budgets& budgets);

// ---------------------------------------------------------------------------
// Context-set models. The universe is every duplicate-free context whose
// hypotheses come from the rewrite-normalized subformula closure of a goal
// sequent, capped at `hyp_cap` hypotheses. The algebra's carrier is all
// upward-closed context sets (Kripke: worlds are contexts, accessibility
// is inclusion); atoms denote the contexts from which they are provable
// by bounded search.

struct ContextUniverse {
  std::vector<PropPtr> formulas;            // normalized closure, deterministic order
  std::vector<std::vector<int>> contexts;   // sorted formula-index sets, small first
  std::size_t hyp_cap = 3;

  bool subset(std::size_t a, std::size_t b) const;  // contexts[a] included in contexts[b]
  Context materialize(std::size_t i) const;         // with hypothesis names c0, c1, ...
};

struct ContextModel {
  ContextUniverse universe;
  std::shared_ptr<FiniteTva> algebra;            // carrier = upward-closed sets
  std::vector<std::vector<bool>> carrier_sets;   // per carrier element, over contexts
  Model model;                                   // 0-ary atoms interpreted in the algebra
};

ContextModel build_context_model(const Sequent& goal, const RuleSystem& system,
                                 std::size_t depth, const Budgets& budgets);

struct SharpenedFailure {
  std::string kind;  // "membership" or "validity"
  std::string context_text;
  std::string formula_text;
};

struct SharpenedReport {
  std::size_t contexts = 0, formulas = 0, carrier = 0;
  std::size_t membership_checks = 0;
  std::vector<SharpenedFailure> failures;
  LawReport laws;
  bool goal_valid = false;  // empty context lies in the goal's denotation
};

// For every context G in the universe and formula A of the closure:
// membership of G in [[A]] must imply that G |- A has a cut-free proof
// within `depth`. `corpus` supplies proven sequents (from derivations)
// whose validity in the model is checked as the soundness instance.
SharpenedReport sharpened_completeness_check(const Sequent& goal, const RuleSystem& system,
                                             std::size_t depth,
                                             const std::vector<Sequent>& corpus,
                                             const Budgets& budgets);

// The membership-implies-provability half alone, reusable against a
// (possibly corrupted) model; used by the negative-control tests.
std::vector<SharpenedFailure> membership_failures(const ContextModel& cm,
                                                  const RuleSystem& system, std::size_t depth,
                                                  const Budgets& budgets,
                                                  std::size_t* checks = nullptr);

// Three-formalism provability agreement over all sequents with conclusions
// in `formulas` and contexts of at most `max_hyps` hypotheses from the
// same set.
struct AgreementRow {
  std::string sequent_text;
  bool modulo = false, foldunfold = false, supernatural = false;
  bool agree = false;
};

struct AgreementReport {
  std::vector<AgreementRow> rows;
  std::size_t disagreements = 0;
};

AgreementReport three_formalism_agreement(const RewriteSystem& theory,
                                          const std::vector<PropPtr>& formulas,
                                          std::size_t max_hyps, std::size_t depth,
                                          const Budgets& budgets);

}  // namespace demod
