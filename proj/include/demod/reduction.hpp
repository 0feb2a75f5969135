#pragma once

#include "demod/budgets.hpp"
#include "demod/proofs.hpp"

namespace demod {

// One proof-reduction step: the redex position (child-index path), the
// contraction rule, and the whole resulting proof.
struct TraceStep {
  std::vector<int> pos;
  std::string rule;
  ProofPtr result;
};

enum class TraceOutcome { Normal, Cycle, FuelExhausted };

struct ReductionTrace {
  ProofPtr initial;
  std::vector<TraceStep> steps;
  TraceOutcome outcome = TraceOutcome::Normal;
  std::size_t cycle_index = 0;  // index of the first repeated proof (Cycle only)
  ProofPtr final;
};

// True iff the root is an elimination whose principal premise is the
// matching introduction (including unfold(fold _) and selim(sintro _)).
bool is_cut(const ProofPtr& p);

// Leftmost-outermost contraction of a cut or of a commuting redex (an
// elimination whose principal premise is a case or unpack). Reduction is
// untyped and theory-independent.
std::optional<TraceStep> reduce_step(const ProofPtr& p);

// All one-step reducts, every redex position.
std::vector<TraceStep> all_reduction_steps(const ProofPtr& p);

ReductionTrace normalize_proof(const ProofPtr& p, std::size_t fuel);

enum class SnStatus { SN, NotSN, Unknown };

struct SnResult {
  SnStatus status = SnStatus::Unknown;
  // NotSN: a reduction prefix ending where it re-enters an earlier proof.
  std::vector<ProofPtr> loop_prefix;
  std::size_t visited = 0;
};

// Explores the full reduction graph (all redexes) with memoization. SN iff
// the graph below p is acyclic and exhausted within `fuel` node visits.
SnResult strongly_normalizing(const ProofPtr& p, std::size_t fuel);

struct Extraction {
  enum Kind { Disjunct, Witness, NotApplicable } kind = NotApplicable;
  bool right = false;    // Disjunct: which side
  ProofPtr subproof;     // Disjunct and Witness
  TermPtr witness;       // Witness
};

// Constructive content of a closed normal proof: the chosen disjunct or
// the existential witness, per the shape of the (weak-head normalized)
// proposition. Throws KernelError if the proof fails to end in the
// corresponding introduction, which would indicate a kernel bug.
Extraction extract_constructive_content(const ProofPtr& p, const PropPtr& prop,
                                        const RewriteSystem& theory, const Budgets& budgets);

}  // namespace demod
