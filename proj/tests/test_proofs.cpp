#include "helpers.hpp"

using namespace demod;

namespace {

Budgets budgets() { return Budgets::defaults(); }

RuleSystem modulo(const RewriteSystem& R) { return RuleSystem::make(SystemKind::Modulo, R); }

}  // namespace

TEST_CASE("omega omega typechecks against R modulo the loop rule") {
  TheoryFile crabbe = th::load_theory("crabbe.dmt");
  RuleSystem sys = modulo(crabbe.system);
  ProofPtr omega = parse_proof("fun x : P . x x", crabbe.system);
  ProofPtr oo = mk_papp(omega, omega);
  CheckResult r = typecheck(oo, {}, mk_atom("R"), sys, budgets());
  REQUIRE(derivation_ok(r));
  CHECK(replay_derivation(derivation_of(r), sys));
}

TEST_CASE("the displayed implication elimination instance") {
  TheoryFile qr = th::load_theory("qr.dmt");
  RuleSystem sys = modulo(qr.system);
  Context ctx{{"p", mk_atom("P")}, {"q", mk_atom("Q")}};
  CheckResult r = typecheck(parse_proof("p q", qr.system), ctx, mk_atom("R"), sys, budgets());
  REQUIRE(derivation_ok(r));
  CHECK(derivation_of(r).root.rule == "imp-elim");
}

TEST_CASE("identity does not prove an unrelated atom") {
  TheoryFile base = th::load_theory("base.dmt");
  RuleSystem sys = modulo(base.system);
  CheckResult r = typecheck(parse_proof("fun x : Q . x", base.system), {}, mk_atom("R"), sys,
                            budgets());
  REQUIRE_FALSE(derivation_ok(r));
  CHECK(rejection_of(r).reason == RejectReason::Mismatch);
}

TEST_CASE("undecided congruence is a budget rejection, not a mismatch") {
  TheoryFile crabbe = th::load_theory("crabbe.dmt");
  RuleSystem sys = modulo(crabbe.system);
  Context ctx{{"h", mk_atom("P")}};
  CheckResult r = typecheck(mk_hyp("h"), ctx, mk_atom("R"), sys, budgets());
  REQUIRE_FALSE(derivation_ok(r));
  CHECK(rejection_of(r).reason == RejectReason::Budget);
}

TEST_CASE("typechecking is deterministic") {
  TheoryFile qr = th::load_theory("qr.dmt");
  RuleSystem sys = modulo(qr.system);
  Context ctx{{"p", mk_atom("P")}, {"q", mk_atom("Q")}};
  ProofPtr p = parse_proof("p q", qr.system);
  CheckResult a = typecheck(p, ctx, mk_atom("R"), sys, budgets());
  CheckResult b = typecheck(p, ctx, mk_atom("R"), sys, budgets());
  REQUIRE(derivation_ok(a));
  REQUIRE(derivation_ok(b));
  CHECK(print_sequent(derivation_of(a).root.seq) == print_sequent(derivation_of(b).root.seq));
}

TEST_CASE("weakening preserves typechecking") {
  TheoryFile qr = th::load_theory("qr.dmt");
  RuleSystem sys = modulo(qr.system);
  ProofFile proofs = th::load_proof_file("qr_modulo.prf", qr.system);
  for (const auto& e : proofs.proofs) {
    REQUIRE(derivation_ok(typecheck(e.proof, e.seq.ctx, e.seq.goal, sys, budgets())));
    Context extended = e.seq.ctx;
    extended.push_back(Hypothesis{"fresh_hyp", mk_atom("Q")});
    CHECK(derivation_ok(typecheck(e.proof, extended, e.seq.goal, sys, budgets())));
  }
}

TEST_CASE("fold and unfold nodes are legal only in the fold/unfold system") {
  TheoryFile qr = th::load_theory("qr.dmt");
  ProofPtr p = parse_proof("fold r (fun q : Q . h)", qr.system);
  Context ctx{{"h", mk_atom("R")}};
  CheckResult in_modulo = typecheck(p, ctx, mk_atom("P"), modulo(qr.system), budgets());
  REQUIRE_FALSE(derivation_ok(in_modulo));
  CHECK(rejection_of(in_modulo).reason == RejectReason::IllegalNode);
  RuleSystem fu = RuleSystem::make(SystemKind::FoldUnfold, qr.system);
  CHECK(derivation_ok(typecheck(p, ctx, mk_atom("P"), fu, budgets())));
}

TEST_CASE("the fold/unfold corpus typechecks in its system") {
  TheoryFile qr = th::load_theory("qr.dmt");
  RuleSystem fu = RuleSystem::make(SystemKind::FoldUnfold, qr.system);
  ProofFile proofs = th::load_proof_file("qr_fold.prf", qr.system);
  CHECK(proofs.system == SystemKind::FoldUnfold);
  for (const auto& e : proofs.proofs) {
    CheckResult r = typecheck(e.proof, e.seq.ctx, e.seq.goal, fu, budgets());
    INFO(e.name);
    CHECK(derivation_ok(r));
  }
}

TEST_CASE("the supernatural corpus typechecks in its system") {
  TheoryFile qr = th::load_theory("qr.dmt");
  RuleSystem sn = RuleSystem::make(SystemKind::SuperNatural, qr.system);
  ProofFile proofs = th::load_proof_file("qr_super.prf", qr.system);
  CHECK(proofs.system == SystemKind::SuperNatural);
  for (const auto& e : proofs.proofs) {
    CheckResult r = typecheck(e.proof, e.seq.ctx, e.seq.goal, sn, budgets());
    INFO(e.name);
    CHECK(derivation_ok(r));
  }
}

TEST_CASE("derivation congruence witnesses replay") {
  TheoryFile qr = th::load_theory("qr.dmt");
  RuleSystem sys = modulo(qr.system);
  ProofFile proofs = th::load_proof_file("qr_modulo.prf", qr.system);
  for (const auto& e : proofs.proofs) {
    CheckResult r = typecheck(e.proof, e.seq.ctx, e.seq.goal, sys, budgets());
    REQUIRE(derivation_ok(r));
    CHECK(replay_derivation(derivation_of(r), sys));
  }
}

TEST_CASE("derive_fold_unfold produces the two passage rules") {
  TheoryFile qr = th::load_theory("qr.dmt");
  FoldUnfoldRules fu = derive_fold_unfold(qr.system.rules[0]);
  REQUIRE(fu.fold.premises.size() == 1);
  CHECK(alpha_eq(fu.fold.premises[0].concl, mk_imp(mk_atom("Q"), mk_atom("R"))));
  CHECK(alpha_eq(fu.fold.conclusion.concl, mk_atom("P")));
  CHECK(alpha_eq(fu.unfold.premises[0].concl, mk_atom("P")));
  CHECK(alpha_eq(fu.unfold.conclusion.concl, mk_imp(mk_atom("Q"), mk_atom("R"))));

  RewriteRule term_rule = th::load_theory("ff.dmt").system.rules[0];
  CHECK_THROWS_AS(derive_fold_unfold(term_rule), Error);
}

TEST_CASE("fold/unfold schemas keep rule parameters") {
  RewriteSystem sys =
      parse_theory("sort s\npred P : s\nprop R\nrule pr : P(x) --> (P(x) => R)\n").system;
  FoldUnfoldRules fu = derive_fold_unfold(sys.rules[0]);
  auto fv = free_vars(fu.fold.conclusion.concl);
  CHECK(fv.count("x") == 1);
}

TEST_CASE("derive_supernatural on the paper rule") {
  TheoryFile qr = th::load_theory("qr.dmt");
  SuperDerived sd = derive_supernatural(qr.system.rules[0]);
  REQUIRE(sd.intro.premises.size() == 1);
  REQUIRE(sd.intro.premises[0].hyps.size() == 1);
  CHECK(alpha_eq(sd.intro.premises[0].hyps[0], mk_atom("Q")));
  CHECK(alpha_eq(sd.intro.premises[0].concl, mk_atom("R")));
  CHECK(alpha_eq(sd.intro.conclusion.concl, mk_atom("P")));
  REQUIRE(sd.elims.size() == 1);
  REQUIRE(sd.elims[0].premises.size() == 2);
  CHECK(alpha_eq(sd.elims[0].premises[0].concl, mk_atom("P")));
  CHECK(alpha_eq(sd.elims[0].premises[1].concl, mk_atom("Q")));
  CHECK(alpha_eq(sd.elims[0].conclusion.concl, mk_atom("R")));
}

TEST_CASE("derive_supernatural absorbs nested implication stacks") {
  RewriteSystem sys =
      parse_theory("prop P\nprop Q\nprop R\nrule r : P --> (Q => (R => Q))\n").system;
  SuperDerived sd = derive_supernatural(sys.rules[0]);
  REQUIRE(sd.intro.premises.size() == 1);
  REQUIRE(sd.intro.premises[0].hyps.size() == 2);
  CHECK(alpha_eq(sd.intro.premises[0].hyps[0], mk_atom("Q")));
  CHECK(alpha_eq(sd.intro.premises[0].hyps[1], mk_atom("R")));
  CHECK(alpha_eq(sd.intro.premises[0].concl, mk_atom("Q")));
  REQUIRE(sd.elims.size() == 1);
  REQUIRE(sd.elims[0].premises.size() == 3);
  CHECK(alpha_eq(sd.elims[0].conclusion.concl, mk_atom("Q")));
}

TEST_CASE("derive_supernatural splits conjunctions and tracks quantifiers") {
  RewriteSystem sys = parse_theory(
                          "sort s\nprop P\nprop Q\npred S : s\n"
                          "rule r : P --> (Q /\\ forall x : s . S(x))\n")
                          .system;
  SuperDerived sd = derive_supernatural(sys.rules[0]);
  REQUIRE(sd.intro.premises.size() == 2);
  CHECK(alpha_eq(sd.intro.premises[0].concl, mk_atom("Q")));
  CHECK(sd.intro.premises[1].fresh.size() == 1);
  REQUIRE(sd.elims.size() == 2);
  CHECK(sd.elims[0].label == "r-elim-1");
  CHECK(sd.elims[1].label == "r-elim-2");
}

TEST_CASE("derive_supernatural rejects disjunctive right-hand sides") {
  RewriteSystem sys =
      parse_theory("prop P\nprop Q\nprop R\nrule r : P --> (Q \\/ R)\n").system;
  CHECK_THROWS_AS(derive_supernatural(sys.rules[0]), Error);
}

TEST_CASE("last-rule classification") {
  RewriteSystem base = th::load_theory("base.dmt").system;
  CHECK(classify_last_rule(parse_proof("fun x : Q . x", base)) == NodeClass::Introduction);
  CHECK(classify_last_rule(mk_papp(mk_hyp("p"), mk_hyp("q"))) == NodeClass::Elimination);
  CHECK(classify_last_rule(mk_hyp("p")) == NodeClass::Hypothesis);
  CHECK(classify_last_rule(mk_fold("r", mk_unit())) == NodeClass::FoldUnfoldNode);
  CHECK(classify_last_rule(mk_super_intro("r", {})) == NodeClass::SuperNode);
}

TEST_CASE("first-order modulo proofs typecheck") {
  TheoryFile nat = th::load_theory("nat_alpha.dmt");
  RuleSystem sys = modulo(nat.system);
  ProofFile proofs = th::load_proof_file("nat.prf", nat.system);
  for (const auto& e : proofs.proofs) {
    CheckResult r = typecheck(e.proof, e.seq.ctx, e.seq.goal, sys, budgets());
    INFO(e.name);
    CHECK(derivation_ok(r));
  }
}

TEST_CASE("scope errors are reported as such") {
  TheoryFile base = th::load_theory("base.dmt");
  CheckResult r = typecheck(mk_hyp("nope"), {}, mk_atom("Q"), modulo(base.system), budgets());
  REQUIRE_FALSE(derivation_ok(r));
  CHECK(rejection_of(r).reason == RejectReason::Scope);
}
