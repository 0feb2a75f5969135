#include "helpers.hpp"

using namespace demod;

namespace {

ProofPtr omega(const RewriteSystem& crabbe) { return parse_proof("fun x : P . x x", crabbe); }

}  // namespace

TEST_CASE("cut recognition at the root") {
  RewriteSystem base = th::load_theory("base.dmt").system;
  ProofPtr id = parse_proof("fun x : Q . x", base);
  CHECK(is_cut(mk_papp(id, mk_hyp("q"))));
  CHECK_FALSE(is_cut(id));
  CHECK(is_cut(mk_unfold("r", mk_fold("r", mk_unit()))));
  CHECK_FALSE(is_cut(mk_unfold("r", mk_fold("other", mk_unit()))));
  CHECK(is_cut(mk_proj(false, mk_pair(mk_unit(), mk_unit()))));
  CHECK(is_cut(mk_inst(mk_gen("x", "i", mk_unit()), mk_app("c", {}))));
}

TEST_CASE("beta and projection steps") {
  RewriteSystem base = th::load_theory("base.dmt").system;
  ProofPtr redex = mk_papp(parse_proof("fun x : Q . x", base), mk_hyp("q"));
  auto step = reduce_step(redex);
  REQUIRE(step.has_value());
  CHECK(step->rule == "beta");
  CHECK(alpha_eq(step->result, mk_hyp("q")));

  auto proj = reduce_step(mk_proj(false, mk_pair(mk_hyp("a"), mk_hyp("b"))));
  REQUIRE(proj.has_value());
  CHECK(alpha_eq(proj->result, mk_hyp("a")));
}

TEST_CASE("omega omega reduces to itself") {
  RewriteSystem crabbe = th::load_theory("crabbe.dmt").system;
  ProofPtr oo = mk_papp(omega(crabbe), omega(crabbe));
  auto step = reduce_step(oo);
  REQUIRE(step.has_value());
  CHECK(alpha_eq(step->result, oo));
}

TEST_CASE("normalization outcomes") {
  RewriteSystem base = th::load_theory("base.dmt").system;
  ProofPtr redex = mk_papp(parse_proof("fun x : Q . x", base), mk_hyp("q"));
  ReductionTrace t = normalize_proof(redex, 10);
  CHECK(t.outcome == TraceOutcome::Normal);
  CHECK(t.steps.size() == 1);
  CHECK(alpha_eq(t.final, mk_hyp("q")));

  RewriteSystem crabbe = th::load_theory("crabbe.dmt").system;
  ProofPtr oo = mk_papp(omega(crabbe), omega(crabbe));
  ReductionTrace loop = normalize_proof(oo, 10);
  CHECK(loop.outcome == TraceOutcome::Cycle);
  CHECK(loop.steps.size() == 1);
  CHECK(loop.cycle_index == 0);

  ReductionTrace id = normalize_proof(parse_proof("fun x : Q . x", base), 0);
  CHECK(id.outcome == TraceOutcome::Normal);
}

TEST_CASE("trace steps replay deterministically") {
  RewriteSystem base = th::load_theory("base.dmt").system;
  ProofPtr p = parse_proof("fst (case h of a . <tt, tt> | b . <tt, tt>)", base);
  ReductionTrace t = normalize_proof(p, 100);
  CHECK(t.outcome == TraceOutcome::Normal);
  ProofPtr cur = t.initial;
  for (const auto& step : t.steps) {
    auto recomputed = reduce_step(cur);
    REQUIRE(recomputed.has_value());
    CHECK(recomputed->pos == step.pos);
    CHECK(recomputed->rule == step.rule);
    CHECK(alpha_eq(recomputed->result, step.result));
    cur = step.result;
  }
  CHECK(alpha_eq(cur, t.final));
}

TEST_CASE("commuting conversions push eliminations past case") {
  RewriteSystem base = th::load_theory("base.dmt").system;
  ProofPtr p = parse_proof("fst (case h of a . <tt, tt> | b . <tt, tt>)", base);
  auto step = reduce_step(p);
  REQUIRE(step.has_value());
  CHECK(step->rule == "comm-case");
  ReductionTrace t = normalize_proof(p, 100);
  CHECK(t.outcome == TraceOutcome::Normal);
  CHECK(alpha_eq(t.final, parse_proof("case h of a . tt | b . tt", base)));
}

TEST_CASE("commuting conversions push eliminations past unpack") {
  RewriteSystem base = th::load_theory("base.dmt").system;
  ProofPtr p = parse_proof("fst (unpack h as x, k in <tt, tt>)", base);
  auto step = reduce_step(p);
  REQUIRE(step.has_value());
  CHECK(step->rule == "comm-unpack");
  CHECK(alpha_eq(step->result, parse_proof("unpack h as x, k in fst <tt, tt>", base)));
}

TEST_CASE("strong normalization probe") {
  RewriteSystem base = th::load_theory("base.dmt").system;
  RewriteSystem crabbe = th::load_theory("crabbe.dmt").system;
  CHECK(strongly_normalizing(parse_proof("fun x : Q . x", base), 100).status == SnStatus::SN);
  CHECK(strongly_normalizing(omega(crabbe), 100).status == SnStatus::SN);
  SnResult oo = strongly_normalizing(mk_papp(omega(crabbe), omega(crabbe)), 100);
  CHECK(oo.status == SnStatus::NotSN);
  CHECK(oo.loop_prefix.size() >= 2);
}

TEST_CASE("not-SN proofs loop under the deterministic strategy too") {
  RewriteSystem crabbe = th::load_theory("crabbe.dmt").system;
  ProofPtr oo = mk_papp(omega(crabbe), omega(crabbe));
  REQUIRE(strongly_normalizing(oo, 100).status == SnStatus::NotSN);
  ReductionTrace t = normalize_proof(oo, 50);
  CHECK(t.outcome != TraceOutcome::Normal);
}

TEST_CASE("constructive content extraction") {
  TheoryFile base = th::load_theory("base.dmt");
  Budgets b;
  ProofPtr inl_proof = parse_proof("inl (fun x : Q . x)", base.system);
  PropPtr disj = mk_or(mk_imp(mk_atom("Q"), mk_atom("Q")), mk_atom("R"));
  Extraction e = extract_constructive_content(inl_proof, disj, base.system, b);
  CHECK(e.kind == Extraction::Disjunct);
  CHECK_FALSE(e.right);
  CHECK(alpha_eq(e.subproof, parse_proof("fun x : Q . x", base.system)));

  ProofPtr packed = parse_proof("pack c, tt", base.system);
  PropPtr ex = mk_exists("x", "i", mk_truth());
  Extraction w = extract_constructive_content(packed, ex, base.system, b);
  CHECK(w.kind == Extraction::Witness);
  CHECK(alpha_eq(w.witness, mk_app("c", {})));

  Extraction na = extract_constructive_content(parse_proof("fun x : Q . x", base.system),
                                               mk_imp(mk_atom("Q"), mk_atom("Q")),
                                               base.system, b);
  CHECK(na.kind == Extraction::NotApplicable);
}

TEST_CASE("extraction sees through the congruence") {
  RewriteSystem sys =
      parse_theory("prop P\nprop Q\nprop R\nrule d : P --> (top \\/ R)\n").system;
  Budgets b;
  // P rewrites to top \/ R at the head, so a closed normal proof of P ends
  // in an injection.
  Extraction e = extract_constructive_content(parse_proof("inl tt", sys), mk_atom("P"), sys, b);
  CHECK(e.kind == Extraction::Disjunct);
  CHECK(alpha_eq(e.subproof, mk_unit()));
}

TEST_CASE("extraction rejects open or reducible proofs") {
  TheoryFile base = th::load_theory("base.dmt");
  Budgets b;
  CHECK_THROWS_AS(extract_constructive_content(mk_hyp("h"), mk_atom("Q"), base.system, b),
                  Error);
  ProofPtr redex = mk_papp(parse_proof("fun x : Q . x", base.system), mk_unit());
  CHECK_THROWS_AS(extract_constructive_content(redex, mk_atom("Q"), base.system, b), Error);
}
