#include "helpers.hpp"

using namespace demod;

namespace {

std::size_t idx(const TvaView& B, const std::string& name) {
  for (std::size_t i = 0; i < B.size(); ++i)
    if (B.elem_name(i) == name) return i;
  throw Error("no element " + name);
}

}  // namespace

TEST_CASE("bool2 operation table") {
  TvaPtr B = make_algebra("bool2");
  std::size_t one = idx(*B, "1"), zero = idx(*B, "0");
  CHECK(B->imp(one, zero) == zero);
  CHECK(B->imp(zero, zero) == one);
  CHECK(B->positive(one));
  CHECK_FALSE(B->positive(zero));
  CHECK(pre_order(*B, zero, one));
  CHECK_FALSE(pre_order(*B, one, zero));
}

TEST_CASE("chain3 relative complement values") {
  TvaPtr B = make_algebra("chain3");
  std::size_t one = idx(*B, "1"), half = idx(*B, "half"), zero = idx(*B, "0");
  CHECK(B->imp(half, zero) == zero);
  CHECK(B->imp(one, half) == half);
  CHECK(B->imp(half, half) == one);
  CHECK_FALSE(pre_order(*B, half, zero));
}

TEST_CASE("doubled_top is a TVA but not a Heyting algebra") {
  TvaPtr B = make_algebra("doubled_top");
  std::size_t t = idx(*B, "t"), tp = idx(*B, "tp");
  CHECK(t != tp);
  CHECK(B->positive(B->imp(t, tp)));
  CHECK(B->positive(B->imp(tp, t)));
  CHECK(pre_order(*B, t, tp));
  CHECK(pre_order(*B, tp, t));
  LawReport rep = check_laws(*B);
  CHECK(rep.tva_ok);
  CHECK_FALSE(rep.antisymmetry);
  CHECK_FALSE(rep.heyting_ok);
}

TEST_CASE("the bundled Heyting algebras pass every law") {
  for (const auto& name : {"bool2", "chain3", "diamond4"}) {
    LawReport rep = check_laws(*make_algebra(name));
    INFO(name);
    CHECK(rep.tva_ok);
    CHECK(rep.antisymmetry);
    CHECK(rep.heyting_ok);
  }
}

TEST_CASE("positivity modus ponens closure holds across the battery") {
  for (const auto& B : default_battery()) {
    LawReport rep = check_laws(*B);
    bool found = false;
    for (const auto& l : rep.laws)
      if (l.law == "positivity-modus-ponens") {
        found = true;
        CHECK(l.pass);
      }
    CHECK(found);
  }
}

TEST_CASE("a =>~ a is positive and top =>~ top is top in Heyting algebras") {
  for (const auto& name : {"bool2", "chain3", "diamond4"}) {
    TvaPtr B = make_algebra(name);
    for (std::size_t a = 0; a < B->size(); ++a) CHECK(B->positive(B->imp(a, a)));
    CHECK(B->imp(B->top(), B->top()) == B->top());
  }
}

TEST_CASE("non-distributive lattices are rejected") {
  // M3: three incomparable middles; relative complements do not exist.
  LatticeSpec m3;
  m3.name = "m3";
  m3.elems = {"1", "a", "b", "c", "0"};
  m3.le = {{"0", "a"}, {"0", "b"}, {"0", "c"}, {"a", "1"}, {"b", "1"}, {"c", "1"}};
  m3.top = "1";
  m3.bottom = "0";
  CHECK_THROWS_AS(make_algebra(m3), Error);
}

TEST_CASE("lattice files build algebras") {
  LatticeSpec spec = parse_lattice(read_file(th::corpus_path("chain3.lat")));
  TvaPtr B = make_algebra(spec);
  CHECK(B->size() == 3);
  CHECK(check_laws(*B).heyting_ok);
}

TEST_CASE("omega is in Top but not in Top =>~ Top") {
  RewriteSystem crabbe = th::load_theory("crabbe.dmt").system;
  ProofPtr omega = parse_proof("fun x : P . x x", crabbe);
  SampleMap samples = SampleMap::standard();
  samples.samples[print_candidate(c_top())].push_back(omega);

  MemberEvidence in_top = candidate_member(c_top(), omega, 500, samples);
  CHECK(in_top.verdict == Membership::Member);

  MemberEvidence in_imp = candidate_member(c_imp(c_top(), c_top()), omega, 500, samples);
  CHECK(in_imp.verdict == Membership::NonMember);
  REQUIRE(in_imp.counterexample);
  CHECK(alpha_eq(in_imp.counterexample, omega));
}

TEST_CASE("the identity inhabits Top =>~ Top on sampled arguments") {
  RewriteSystem base = th::load_theory("base.dmt").system;
  ProofPtr id = parse_proof("fun x : Q . x", base);
  MemberEvidence m = candidate_member(c_imp(c_top(), c_top()), id, 500, SampleMap::standard());
  CHECK(m.verdict == Membership::Member);
}

TEST_CASE("candidate expressions compare structurally") {
  CHECK(candidate_eq(c_top(), c_top()));
  CHECK_FALSE(candidate_eq(c_top(), c_imp(c_top(), c_top())));
  CHECK(candidate_eq(c_imp(c_top(), c_top()), c_imp(c_top(), c_top())));
}

TEST_CASE("pair and injection membership") {
  SampleMap samples = SampleMap::standard();
  ProofPtr pair = mk_pair(mk_unit(), mk_unit());
  CHECK(candidate_member(c_and(c_top(), c_top()), pair, 200, samples).verdict ==
        Membership::Member);
  ProofPtr inj = mk_inj(false, mk_unit());
  CHECK(candidate_member(c_or(c_top(), c_top()), inj, 200, samples).verdict ==
        Membership::Member);
}
