#pragma once

#include "demod/budgets.hpp"
#include "demod/rewriting.hpp"
#include "demod/syntax.hpp"

namespace demod {

// ---------------------------------------------------------------------------
// Proof terms. Like propositions they are locally nameless: hypothesis
// binders (lambda, case branches, unpack) and term binders (gen, unpack,
// supernatural premise binders) are de Bruijn indices with display hints;
// free hypotheses refer to context entries by name.

struct Proof;
using ProofPtr = std::shared_ptr<const Proof>;

struct PrHyp {
  std::string name;
};
struct PrBoundHyp {
  int index;
};
struct PrLam {  // implication introduction, annotated binder
  std::string hint;
  PropPtr ann;
  ProofPtr body;
};
struct PrApp {
  ProofPtr fn, arg;
};
struct PrPair {
  ProofPtr l, r;
};
struct PrProj {
  bool second;
  ProofPtr p;
};
struct PrInj {
  bool right;
  ProofPtr p;
};
struct PrMatch {  // disjunction elimination, one hypothesis binder per branch
  ProofPtr scrut;
  std::string lhint, rhint;
  ProofPtr lbody, rbody;
};
struct PrGen {  // universal introduction, binds a term variable
  std::string hint;
  SortName sort;
  ProofPtr body;
};
struct PrInst {
  ProofPtr p;
  TermPtr witness;
};
struct PrPack {  // existential introduction
  TermPtr witness;
  ProofPtr p;
};
struct PrUnpack {  // existential elimination, binds a term variable then a hypothesis
  ProofPtr scrut;
  std::string vhint, hhint;
  ProofPtr body;
};
struct PrUnit {};
struct PrAbsurd {  // falsity elimination, annotated with the produced proposition
  ProofPtr p;
  PropPtr goal;
};
struct PrFold {
  std::string rule;
  ProofPtr p;
};
struct PrUnfold {
  std::string rule;
  ProofPtr p;
};

// One sub-proof of a supernatural introduction. `binders` mirror the
// decomposition path of the rule RHS in order, outermost first; var binders
// bind a term variable, hyp binders a hypothesis.
struct SuperBinder {
  bool is_var = false;
  std::string name;
};
struct SuperSub {
  std::vector<SuperBinder> binders;
  ProofPtr body;
};
struct PrSuperIntro {
  std::string rule;
  std::vector<SuperSub> subs;
};
// Supernatural elimination at a given leaf of the rule decomposition.
// `args` follow the leaf's path: a term for each var binder, a proof for
// each hypothesis binder.
struct PrSuperElim {
  std::string rule;
  int leaf = 0;
  ProofPtr main;
  std::vector<std::variant<TermPtr, ProofPtr>> args;
};

struct Proof {
  std::variant<PrHyp, PrBoundHyp, PrLam, PrApp, PrPair, PrProj, PrInj, PrMatch, PrGen, PrInst,
               PrPack, PrUnpack, PrUnit, PrAbsurd, PrFold, PrUnfold, PrSuperIntro, PrSuperElim>
      node;
};

ProofPtr mk_hyp(std::string name);
ProofPtr mk_bound_hyp(int index);
ProofPtr mk_lam(std::string hint, PropPtr ann, ProofPtr body);
ProofPtr mk_papp(ProofPtr fn, ProofPtr arg);
ProofPtr mk_pair(ProofPtr l, ProofPtr r);
ProofPtr mk_proj(bool second, ProofPtr p);
ProofPtr mk_inj(bool right, ProofPtr p);
ProofPtr mk_match(ProofPtr scrut, std::string lhint, ProofPtr lbody, std::string rhint,
                  ProofPtr rbody);
ProofPtr mk_gen(std::string hint, SortName sort, ProofPtr body);
ProofPtr mk_inst(ProofPtr p, TermPtr witness);
ProofPtr mk_pack(TermPtr witness, ProofPtr p);
ProofPtr mk_unpack(ProofPtr scrut, std::string vhint, std::string hhint, ProofPtr body);
ProofPtr mk_unit();
ProofPtr mk_absurd(ProofPtr p, PropPtr goal);
ProofPtr mk_fold(std::string rule, ProofPtr p);
ProofPtr mk_unfold(std::string rule, ProofPtr p);
ProofPtr mk_super_intro(std::string rule, std::vector<SuperSub> subs);
ProofPtr mk_super_elim(std::string rule, int leaf, ProofPtr main,
                       std::vector<std::variant<TermPtr, ProofPtr>> args);

bool alpha_eq(const ProofPtr& a, const ProofPtr& b);

// Hypothesis-binder opening/closing (beta substitution of a locally closed
// proof for bound hypothesis k) and term-binder opening/closing, which
// also descends into embedded propositions and terms.
ProofPtr open_hyp_at(const ProofPtr& p, int k, const ProofPtr& value);
ProofPtr close_hyp_at(const ProofPtr& p, int k, const std::string& name);
ProofPtr open_pvar_at(const ProofPtr& p, int k, const TermPtr& value);
ProofPtr close_pvar_at(const ProofPtr& p, int k, const std::string& name);

std::set<std::string> free_hyps(const ProofPtr& p);
bool closed_proof(const ProofPtr& p);

enum class NodeClass { Introduction, Elimination, Hypothesis, FoldUnfoldNode, SuperNode };
NodeClass classify_last_rule(const ProofPtr& p);
std::string node_class_name(NodeClass c);

// ---------------------------------------------------------------------------
// Rule systems and derived rules.

enum class SystemKind { Modulo, FoldUnfold, SuperNatural };
std::string system_name(SystemKind k);

// Printable inference-rule schema. Free variables of the source rewrite
// rule act as schema parameters; `fresh` lists generalized variables local
// to a premise.
struct SchemaSequent {
  std::vector<PropPtr> hyps;  // extensions of the ambient context
  PropPtr concl;
  std::vector<std::pair<std::string, SortName>> fresh;
};
struct DerivedRule {
  std::string label;
  std::vector<SchemaSequent> premises;
  SchemaSequent conclusion;
};

struct FoldUnfoldRules {
  DerivedRule fold, unfold;
};

// Decomposition of a supernatural rule RHS (built from atoms with =>, /\
// and forall): one leaf per elimination rule, each with its binder path.
struct SuperLeafBinder {
  bool is_var = false;
  std::string name;    // display name
  SortName sort;       // var binders
  PropPtr hyp;         // hyp binders; may mention rule parameters and path vars
};
struct SuperLeaf {
  std::vector<SuperLeafBinder> path;
  PropPtr concl;  // atomic leaf, mentions rule parameters and path vars
};
struct SuperRuleInfo {
  PropPtr lhs;  // atom pattern
  std::vector<SuperLeaf> leaves;
};

struct SuperDerived {
  DerivedRule intro;
  std::vector<DerivedRule> elims;
  SuperRuleInfo info;
};

FoldUnfoldRules derive_fold_unfold(const RewriteRule& rule);
SuperDerived derive_supernatural(const RewriteRule& rule);

struct RuleSystem {
  SystemKind kind = SystemKind::Modulo;
  RewriteSystem theory;
  RewriteSystem congruence;  // full theory for Modulo, term rules otherwise
  std::map<std::string, SuperRuleInfo> super;

  static RuleSystem make(SystemKind kind, RewriteSystem theory);
};

// ---------------------------------------------------------------------------
// Type checking.

// Congruence evidence recorded in a derivation: either a comparison
// between two propositions or a weak-head exposure of the goal.
struct CongruenceUse {
  std::string kind;  // "compare" or "expose"
  PropPtr from, to;
  std::vector<RewriteStep> steps_from, steps_to;
};

struct DerivationNode {
  std::string rule;  // e.g. "imp-intro", "imp-elim", "hyp"
  Sequent seq;
  std::vector<CongruenceUse> congruences;
  std::vector<DerivationNode> children;
};

struct Derivation {
  SystemKind system = SystemKind::Modulo;
  DerivationNode root;
};

enum class RejectReason { Mismatch, Budget, Scope, IllegalNode, CannotInfer, Sort, UnknownRule };
std::string reject_reason_name(RejectReason r);

struct Rejection {
  RejectReason reason = RejectReason::Mismatch;
  std::vector<int> path;  // child indices from the proof root to the failing node
  std::string message;
};

using CheckResult = std::variant<Derivation, Rejection>;

CheckResult typecheck(const ProofPtr& proof, const Context& ctx, const PropPtr& goal,
                      const RuleSystem& system, const Budgets& budgets);

bool derivation_ok(const CheckResult& r);
const Rejection& rejection_of(const CheckResult& r);
const Derivation& derivation_of(const CheckResult& r);

// Re-validates every congruence witness recorded in a derivation.
bool replay_derivation(const Derivation& d, const RuleSystem& system);

}  // namespace demod
