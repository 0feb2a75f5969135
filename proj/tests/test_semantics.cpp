#include "helpers.hpp"

using namespace demod;

namespace {

Budgets budgets() { return Budgets::defaults(); }

// A hand-built propositional bool2 model with chosen atom values.
Model bool2_model(const RewriteSystem& theory, const std::map<std::string, std::string>& vals) {
  Model M;
  M.algebra = make_algebra("bool2");
  const auto& alg = static_cast<const FiniteTva&>(*M.algebra);
  for (const auto& s : theory.sig.sorts) M.domains.emplace(s, Domain::named({"d0"}));
  for (const auto& [name, args] : theory.sig.predicates) {
    PredInterp<std::size_t> interp;
    interp.table[{}] = alg.index_of(vals.at(name));
    M.preds.emplace(name, std::move(interp));
  }
  return M;
}

}  // namespace

TEST_CASE("denotation is the expected boolean value") {
  RewriteSystem qr = th::load_theory("qr.dmt").system;
  Model M = bool2_model(qr, {{"P", "1"}, {"Q", "1"}, {"R", "1"}});
  PropPtr p = mk_imp(mk_atom("Q"), mk_atom("R"));
  auto v = denote_prop(p, {}, M);
  REQUIRE(v);
  CHECK(M.algebra->elem_name(*v) == "1");
}

TEST_CASE("denotation is compositional on random propositions") {
  RewriteSystem qr = th::load_theory("qr.dmt").system;
  Model M = bool2_model(qr, {{"P", "1"}, {"Q", "1"}, {"R", "0"}});
  th::Rng rng;
  for (int i = 0; i < 100; ++i) {
    // Propositional samples only: the hand-built model has no P : s.
    PropPtr a = rng.below(2) ? mk_atom("Q") : mk_atom("R");
    PropPtr b = rng.below(2) ? mk_atom("P") : mk_atom("Q");
    auto va = denote_prop(a, {}, M), vb = denote_prop(b, {}, M);
    auto vimp = denote_prop(mk_imp(a, b), {}, M);
    auto vand = denote_prop(mk_and(a, b), {}, M);
    auto vor = denote_prop(mk_or(a, b), {}, M);
    REQUIRE((va && vb && vimp && vand && vor));
    CHECK(*vimp == M.algebra->imp(*va, *vb));
    CHECK(*vand == M.algebra->conj(*va, *vb));
    CHECK(*vor == M.algebra->disj(*va, *vb));
  }
}

TEST_CASE("the truncated-nat alpha construction validates the rule") {
  RewriteSystem nat = th::load_theory("nat_alpha.dmt").system;
  for (const auto& B : default_battery()) {
    FiniteCompletion fc = build_completed_model(nat, B, 9, budgets());
    INFO(B->name());
    CHECK(fc.stabilized);
    // alpha(n+1) = alpha(n) => [[R]], pointwise.
    std::size_t rval = fc.model.preds.at("R").table.at({});
    for (std::size_t n = 0; n + 1 < 9; ++n) {
      std::size_t an = fc.model.preds.at("P").table.at({n});
      std::size_t an1 = fc.model.preds.at("P").table.at({n + 1});
      CHECK(an1 == B->imp(an, rval));
    }
    // Valid for every phi(x) in 0..7 (f(7) = 8 stays inside the bound).
    std::vector<Valuation> phis;
    for (std::size_t v = 0; v <= 7; ++v) phis.push_back({{"x", v}});
    CHECK(rule_valid(nat.rules[0], fc.model, phis).verdict == RuleValidity::Valid);
  }
}

TEST_CASE("denotation of a quantifier is the family operation") {
  RewriteSystem nat = th::load_theory("nat_alpha.dmt").system;
  TvaPtr B = make_algebra("chain3");
  FiniteCompletion fc = build_completed_model(nat, B, 2, budgets());
  PropPtr all = mk_forall("x", "nat", mk_atom("P", {mk_bound(0)}));
  auto v = denote_prop(all, {}, fc.model);
  REQUIRE(v);
  std::vector<std::size_t> family{fc.model.preds.at("P").table.at({0}),
                                  fc.model.preds.at("P").table.at({1})};
  CHECK(*v == B->forall(family));
}

TEST_CASE("truncation overflow is inconclusive, not silently wrapped") {
  RewriteSystem nat = th::load_theory("nat_alpha.dmt").system;
  FiniteCompletion fc = build_completed_model(nat, make_algebra("bool2"), 4, budgets());
  std::vector<Valuation> phis{{{"x", 3}}};  // f(3) = 4 overflows the bound
  RuleValidReport r = rule_valid(nat.rules[0], fc.model, phis);
  CHECK(r.verdict == RuleValidity::Inconclusive);
}

TEST_CASE("rule validity in hand-built boolean models") {
  RewriteSystem qr = th::load_theory("qr.dmt").system;
  Model good = bool2_model(qr, {{"P", "1"}, {"Q", "1"}, {"R", "1"}});
  CHECK(rule_valid_everywhere(qr.rules[0], good).verdict == RuleValidity::Valid);
  Model bad = bool2_model(qr, {{"P", "1"}, {"Q", "1"}, {"R", "0"}});
  RuleValidReport r = rule_valid_everywhere(qr.rules[0], bad);
  CHECK(r.verdict == RuleValidity::Invalid);
  REQUIRE((r.lhs && r.rhs));
  CHECK(good.algebra->elem_name(*r.lhs) == "1");
  CHECK(good.algebra->elem_name(*r.rhs) == "0");
}

TEST_CASE("find_model returns the canonical first model") {
  RewriteSystem qr = th::load_theory("qr.dmt").system;
  auto M = find_model(qr, make_algebra("bool2"), 1);
  REQUIRE(M);
  CHECK(M->algebra->elem_name(M->preds.at("P").table.at({})) == "1");
  CHECK(M->algebra->elem_name(M->preds.at("Q").table.at({})) == "1");
  CHECK(M->algebra->elem_name(M->preds.at("R").table.at({})) == "1");

  RewriteSystem crabbe = th::load_theory("crabbe.dmt").system;
  auto C = find_model(crabbe, make_algebra("bool2"), 1);
  REQUIRE(C);
  CHECK(C->algebra->elem_name(C->preds.at("P").table.at({})) == "1");
  CHECK(C->algebra->elem_name(C->preds.at("R").table.at({})) == "1");
}

TEST_CASE("found models re-verify as valid") {
  for (const auto& name : {"qr.dmt", "crabbe.dmt", "qp.dmt"}) {
    RewriteSystem theory = th::load_theory(name).system;
    for (const auto& B : default_battery()) {
      auto M = find_model(theory, B, 1);
      INFO(name << " in " << B->name());
      REQUIRE(M);
      for (const auto& rule : theory.rules)
        CHECK(rule_valid_everywhere(rule, *M).verdict == RuleValidity::Valid);
    }
  }
}

TEST_CASE("the empty theory trivially has models") {
  RewriteSystem base = th::load_theory("base.dmt").system;
  for (const auto& B : default_battery()) CHECK(find_model(base, B, 1).has_value());
}

TEST_CASE("super-consistency battery reports") {
  Budgets b = budgets();
  RewriteSystem qr = th::load_theory("qr.dmt").system;
  SuperConsistencyReport rep = super_consistency_report(qr, default_battery(), 1, b);
  CHECK(rep.all_found);
  CHECK(rep.entries.size() == 4);
  CHECK_FALSE(rep.not_sn.has_value());

  RewriteSystem crabbe = th::load_theory("crabbe.dmt").system;
  SuperConsistencyReport crep = super_consistency_report(crabbe, default_battery(), 1, b);
  CHECK(crep.all_found);  // finite models exist; they are only necessary conditions
  REQUIRE(crep.not_sn.has_value());
  CHECK(crep.not_sn->rule == "cr");
  CHECK(crep.not_sn->loop_prefix.size() >= 2);
}

TEST_CASE("soundness of corpus derivations in found models") {
  TheoryFile qr = th::load_theory("qr.dmt");
  RuleSystem sys = RuleSystem::make(SystemKind::Modulo, qr.system);
  ProofFile proofs = th::load_proof_file("qr_modulo.prf", qr.system);
  auto M = find_model(qr.system, make_algebra("bool2"), 1);
  REQUIRE(M);
  for (const auto& e : proofs.proofs) {
    CheckResult r = typecheck(e.proof, e.seq.ctx, e.seq.goal, sys, budgets());
    REQUIRE(derivation_ok(r));
    INFO(e.name);
    CHECK(soundness_check(derivation_of(r), *M));
  }
}

TEST_CASE("a corrupted derivation fails the soundness check") {
  RewriteSystem qr = th::load_theory("qr.dmt").system;
  Model M = bool2_model(qr, {{"P", "1"}, {"Q", "1"}, {"R", "1"}});
  Derivation fake;
  fake.root.rule = "hyp";
  fake.root.seq = Sequent{{}, mk_falsity()};
  CHECK_FALSE(soundness_check(fake, M));
}

TEST_CASE("candidate models force rule interpretations") {
  RewriteSystem qr = th::load_theory("qr.dmt").system;
  CandidateModel M = build_candidate_model(qr, budgets());
  CHECK(M.stabilized);
  CandidatePtr p = M.preds.at("P").table.at({});
  CHECK(candidate_eq(p, c_imp(c_top(), c_top())));

  RewriteSystem crabbe = th::load_theory("crabbe.dmt").system;
  CandidateModel C = build_candidate_model(crabbe, budgets());
  CHECK_FALSE(C.stabilized);
}

TEST_CASE("tait membership for small closed proofs") {
  Budgets b = budgets();
  SampleMap samples = SampleMap::standard();
  RewriteSystem base = th::load_theory("base.dmt").system;
  TaitReport id = tait_check(parse_proof("fun x : Q . x", base),
                             mk_imp(mk_atom("Q"), mk_atom("Q")), base, b, samples);
  CHECK(id.evidence.verdict == Membership::Member);

  RewriteSystem crabbe = th::load_theory("crabbe.dmt").system;
  ProofPtr omega = parse_proof("fun x : P . x x", crabbe);
  TaitReport oo = tait_check(mk_papp(omega, omega), mk_atom("R"), crabbe, b, samples);
  CHECK(oo.evidence.verdict == Membership::NonMember);
  CHECK(candidate_eq(oo.denotation, c_top()));
}
