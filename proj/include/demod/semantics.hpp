#pragma once

#include "demod/proofs.hpp"
#include "demod/tva.hpp"

namespace demod {

// ---------------------------------------------------------------------------
// Finite-algebra valued models. Domains are finite element lists; a
// truncated-nat domain is the initial segment 0..N-1 whose functions may
// overflow. Overflow is surfaced (denotation returns nullopt), never
// silently wrapped.

struct Domain {
  std::vector<std::string> elems;
  bool truncated_nat = false;

  static Domain named(std::vector<std::string> elems);
  static Domain nat(std::size_t bound);
};

struct FnInterp {
  // argument tuple (domain indices) -> result index; nullopt = overflow
  std::map<std::vector<std::size_t>, std::optional<std::size_t>> table;
};

template <class V>
struct PredInterp {
  std::map<std::vector<std::size_t>, V> table;
};

struct Model {
  TvaPtr algebra;
  std::map<SortName, Domain> domains;
  std::map<std::string, FnInterp> funcs;
  std::map<std::string, PredInterp<std::size_t>> preds;
};

// Free variable name -> domain element index (the variable's sort names
// the domain).
using Valuation = std::map<std::string, std::size_t>;

std::optional<std::size_t> denote_term(const TermPtr& t, const Valuation& phi, const Model& M);
std::optional<std::size_t> denote_prop(const PropPtr& p, const Valuation& phi, const Model& M);

// All valuations of the given variables into M's domains, in canonical
// (odometer) order.
std::vector<Valuation> all_valuations(const std::map<std::string, SortName>& vars,
                                      const Model& M);

enum class RuleValidity { Valid, Invalid, Inconclusive };

struct RuleValidReport {
  RuleValidity verdict = RuleValidity::Valid;
  Valuation phi;                          // witness valuation for Invalid/Inconclusive
  std::optional<std::size_t> lhs, rhs;    // denotations under phi
};

// Valid iff both sides denote equal values under every listed valuation.
// Truncation overflow under some valuation makes the result Inconclusive
// (reported with that valuation) rather than Valid or Invalid.
RuleValidReport rule_valid(const RewriteRule& rule, const Model& M,
                           const std::vector<Valuation>& valuations);
RuleValidReport rule_valid_everywhere(const RewriteRule& rule, const Model& M);

// Exhaustive search over interpretations into domains of the given size:
// predicates before functions, carrier elements in declared order. Returns
// the first model validating every rule over all valuations.
std::optional<Model> find_model(const RewriteSystem& theory, const TvaPtr& algebra,
                                std::size_t domain_size);

// Positive implication from the context meet to the goal, under every
// valuation of the sequent's free variables.
bool soundness_check(const Derivation& d, const Model& M);

// ---------------------------------------------------------------------------
// Candidate-valued models (pre-models at desk scale).

struct CandidateModel {
  std::map<SortName, Domain> domains;
  std::map<std::string, FnInterp> funcs;
  std::map<std::string, PredInterp<CandidatePtr>> preds;
  bool stabilized = true;  // rule-driven completion reached a fixpoint
};

std::optional<CandidatePtr> denote_candidate(const PropPtr& p, const Valuation& phi,
                                             const CandidateModel& M);

// Builds a candidate model of the theory: unconstrained predicate entries
// default to the strongly-normalizing candidate (overridable), then each
// proposition rule forces its LHS interpretation to the RHS denotation,
// iterated to a fixpoint. `stabilized` is false when no fixpoint exists
// within the pass budget (e.g. P --> (P => R)).
CandidateModel build_candidate_model(const RewriteSystem& theory, const Budgets& budgets,
                                     const std::map<std::string, CandidatePtr>& overrides = {});

// Same completion in a finite algebra (used for the truncated-nat rule
// P(f(x)) --> (P(x) => R), whose interpretation is forced pointwise).
struct FiniteCompletion {
  Model model;
  bool stabilized = true;
};
FiniteCompletion build_completed_model(const RewriteSystem& theory, const TvaPtr& algebra,
                                       std::size_t nat_bound, const Budgets& budgets);

// Membership of a closed proof in the candidate denotation of its
// proposition, with the candidate model built as above.
struct TaitReport {
  MemberEvidence evidence;
  CandidatePtr denotation;
  bool model_stabilized = true;
};
TaitReport tait_check(const ProofPtr& p, const PropPtr& prop, const RewriteSystem& theory,
                      const Budgets& budgets, const SampleMap& samples);

// ---------------------------------------------------------------------------
// Super-consistency battery.

struct LoopEvidence {
  std::string rule;
  ProofPtr witness;                 // the looping proof (omega omega shaped)
  PropPtr proved;                   // the proposition it typechecks against
  std::vector<ProofPtr> loop_prefix;
};

struct SuperConsistencyEntry {
  std::string algebra;
  bool model_found = false;
  std::optional<Model> model;
};

struct SuperConsistencyReport {
  std::vector<SuperConsistencyEntry> entries;
  bool all_found = false;
  // Finite-algebra successes are necessary-condition checks only; the
  // candidates algebra cannot be searched exhaustively. Reduction-level
  // negative evidence is attached when a looping proof is found.
  std::optional<LoopEvidence> not_sn;
};

SuperConsistencyReport super_consistency_report(const RewriteSystem& theory,
                                                const std::vector<TvaPtr>& battery,
                                                std::size_t domain_size,
                                                const Budgets& budgets);

}  // namespace demod
