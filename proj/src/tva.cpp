#include "demod/tva.hpp"

#include <algorithm>

#include "demod/print.hpp"

namespace demod {

std::size_t TvaView::forall(const std::vector<std::size_t>& family) const {
  std::size_t acc = top();
  for (std::size_t x : family) acc = conj(acc, x);
  return acc;
}

std::size_t TvaView::exists(const std::vector<std::size_t>& family) const {
  std::size_t acc = bottom();
  for (std::size_t x : family) acc = disj(acc, x);
  return acc;
}

std::size_t FiniteTva::index_of(const std::string& elem) const {
  for (std::size_t i = 0; i < elems.size(); ++i)
    if (elems[i] == elem) return i;
  throw Error("unknown carrier element: " + elem);
}

FiniteTva FiniteTva::from_lattice(const LatticeSpec& spec) {
  FiniteTva B;
  B.algebra_name = spec.name.empty() ? "lattice" : spec.name;
  B.elems = spec.elems;
  std::size_t n = B.elems.size();
  if (n == 0) throw Error("lattice needs at least one element");
  {
    std::set<std::string> seen(B.elems.begin(), B.elems.end());
    if (seen.size() != n) throw Error("duplicate lattice elements");
  }
  B.top_idx = B.index_of(spec.top);
  B.bottom_idx = B.index_of(spec.bottom);

  // Reflexive-transitive closure of the declared order.
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) leq[i][i] = true;
  for (const auto& [a, b] : spec.le) leq[B.index_of(a)][B.index_of(b)] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (leq[i][k] && leq[k][j]) leq[i][j] = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && leq[i][j] && leq[j][i])
        throw Error("lattice order is not antisymmetric: " + B.elems[i] + ", " + B.elems[j]);
  for (std::size_t i = 0; i < n; ++i) {
    if (!leq[i][B.top_idx]) throw Error("declared top is not greatest");
    if (!leq[B.bottom_idx][i]) throw Error("declared bottom is not least");
  }

  auto greatest_of = [&](const std::vector<std::size_t>& set,
                         const std::string& what) -> std::size_t {
    for (std::size_t g : set) {
      bool ok = true;
      for (std::size_t c : set)
        if (!leq[c][g]) {
          ok = false;
          break;
        }
      if (ok) return g;
    }
    throw Error(what + " does not exist; the spec is not a bounded distributive lattice");
  };
  auto least_of = [&](const std::vector<std::size_t>& set,
                      const std::string& what) -> std::size_t {
    for (std::size_t g : set) {
      bool ok = true;
      for (std::size_t c : set)
        if (!leq[g][c]) {
          ok = false;
          break;
        }
      if (ok) return g;
    }
    throw Error(what + " does not exist; the spec is not a bounded distributive lattice");
  };

  B.conj_t.assign(n, std::vector<std::size_t>(n));
  B.disj_t.assign(n, std::vector<std::size_t>(n));
  B.imp_t.assign(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      std::vector<std::size_t> lower, upper;
      for (std::size_t c = 0; c < n; ++c) {
        if (leq[c][a] && leq[c][b]) lower.push_back(c);
        if (leq[a][c] && leq[b][c]) upper.push_back(c);
      }
      B.conj_t[a][b] = greatest_of(lower, "glb(" + B.elems[a] + ", " + B.elems[b] + ")");
      B.disj_t[a][b] = least_of(upper, "lub(" + B.elems[a] + ", " + B.elems[b] + ")");
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      // a => b is the greatest c with a /\ c <= b.
      std::vector<std::size_t> set;
      for (std::size_t c = 0; c < n; ++c)
        if (leq[B.conj_t[a][c]][b]) set.push_back(c);
      B.imp_t[a][b] =
          greatest_of(set, "relative complement " + B.elems[a] + " => " + B.elems[b]);
    }
  }
  B.positives = {B.top_idx};
  return B;
}

namespace {

LatticeSpec builtin_lattice(const std::string& name) {
  // Elements are declared top-first: the canonical model enumeration tries
  // larger truth values before smaller ones.
  if (name == "bool2") return LatticeSpec{"bool2", {"1", "0"}, {{"0", "1"}}, "1", "0"};
  if (name == "chain3")
    return LatticeSpec{"chain3", {"1", "half", "0"}, {{"0", "half"}, {"half", "1"}}, "1", "0"};
  if (name == "diamond4")
    return LatticeSpec{"diamond4",
                       {"1", "a", "b", "0"},
                       {{"0", "a"}, {"0", "b"}, {"a", "1"}, {"b", "1"}},
                       "1",
                       "0"};
  throw Error("unknown algebra: " + name);
}

FiniteTva make_doubled_top() {
  // bool2 with the top element split in two: t and tp are both positive
  // and mutually below each other, yet distinct, so antisymmetry fails
  // while every other law holds. Operations collapse to bool2 through
  // t, tp |-> 1 and produce t for true results.
  FiniteTva B;
  B.algebra_name = "doubled_top";
  B.elems = {"t", "tp", "0"};
  B.top_idx = 0;
  B.bottom_idx = 2;
  auto to_bool = [](std::size_t i) { return i != 2; };
  auto lift = [](bool b) -> std::size_t { return b ? 0 : 2; };
  std::size_t n = 3;
  B.conj_t.assign(n, std::vector<std::size_t>(n));
  B.disj_t.assign(n, std::vector<std::size_t>(n));
  B.imp_t.assign(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      B.conj_t[a][b] = lift(to_bool(a) && to_bool(b));
      B.disj_t[a][b] = lift(to_bool(a) || to_bool(b));
      B.imp_t[a][b] = lift(!to_bool(a) || to_bool(b));
    }
  }
  B.positives = {0, 1};
  return B;
}

}  // namespace

TvaPtr make_algebra(const std::string& name) {
  if (name == "doubled_top") return std::make_shared<FiniteTva>(make_doubled_top());
  return std::make_shared<FiniteTva>(FiniteTva::from_lattice(builtin_lattice(name)));
}

TvaPtr make_algebra(const LatticeSpec& spec) {
  return std::make_shared<FiniteTva>(FiniteTva::from_lattice(spec));
}

std::vector<TvaPtr> default_battery() {
  return {make_algebra("bool2"), make_algebra("chain3"), make_algebra("diamond4"),
          make_algebra("doubled_top")};
}

bool pre_order(const TvaView& B, std::size_t a, std::size_t b) {
  return B.positive(B.imp(a, b));
}

namespace {

std::vector<std::vector<std::size_t>> law_families(std::size_t n) {
  std::vector<std::vector<std::size_t>> fams;
  if (n <= 5) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      std::vector<std::size_t> f;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (std::size_t{1} << i)) f.push_back(i);
      fams.push_back(std::move(f));
    }
    return fams;
  }
  fams.push_back({});
  for (std::size_t i = 0; i < n; ++i) fams.push_back({i});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) fams.push_back({i, j});
  std::vector<std::size_t> full(n);
  for (std::size_t i = 0; i < n; ++i) full[i] = i;
  fams.push_back(std::move(full));
  return fams;
}

}  // namespace

LawReport check_laws(const TvaView& B) {
  LawReport rep;
  rep.algebra = B.name();
  std::size_t n = B.size();
  auto le = [&](std::size_t a, std::size_t b) { return pre_order(B, a, b); };
  auto nm = [&](std::size_t a) { return B.elem_name(a); };

  auto add = [&](const std::string& law, bool pass, const std::string& cex) {
    rep.laws.push_back(LawCheck{law, pass, pass ? "" : cex});
  };

  {
    bool ok = true;
    std::string cex;
    for (std::size_t a = 0; a < n && ok; ++a)
      if (!le(a, a)) {
        ok = false;
        cex = nm(a);
      }
    add("pre-order-reflexive", ok, cex);
  }
  {
    bool ok = true;
    std::string cex;
    for (std::size_t a = 0; a < n && ok; ++a)
      for (std::size_t b = 0; b < n && ok; ++b)
        for (std::size_t c = 0; c < n && ok; ++c)
          if (le(a, b) && le(b, c) && !le(a, c)) {
            ok = false;
            cex = nm(a) + ", " + nm(b) + ", " + nm(c);
          }
    add("pre-order-transitive", ok, cex);
  }
  {
    bool ok = true;
    std::string cex;
    for (std::size_t a = 0; a < n && ok; ++a)
      for (std::size_t b = 0; b < n && ok; ++b) {
        std::size_t g = B.conj(a, b);
        if (!le(g, a) || !le(g, b)) {
          ok = false;
          cex = nm(a) + " /\\ " + nm(b);
          break;
        }
        for (std::size_t c = 0; c < n; ++c)
          if (le(c, a) && le(c, b) && !le(c, g)) {
            ok = false;
            cex = nm(c) + " vs " + nm(a) + " /\\ " + nm(b);
            break;
          }
      }
    add("conj-is-glb", ok, cex);
  }
  {
    bool ok = true;
    std::string cex;
    for (std::size_t a = 0; a < n && ok; ++a)
      for (std::size_t b = 0; b < n && ok; ++b) {
        std::size_t g = B.disj(a, b);
        if (!le(a, g) || !le(b, g)) {
          ok = false;
          cex = nm(a) + " \\/ " + nm(b);
          break;
        }
        for (std::size_t c = 0; c < n; ++c)
          if (le(a, c) && le(b, c) && !le(g, c)) {
            ok = false;
            cex = nm(c) + " vs " + nm(a) + " \\/ " + nm(b);
            break;
          }
      }
    add("disj-is-lub", ok, cex);
  }
  {
    bool ok = true;
    std::string cex;
    for (std::size_t a = 0; a < n && ok; ++a)
      if (!le(a, B.top())) {
        ok = false;
        cex = nm(a);
      }
    add("top-greatest", ok, cex);
  }
  {
    bool ok = true;
    std::string cex;
    for (std::size_t a = 0; a < n && ok; ++a)
      if (!le(B.bottom(), a)) {
        ok = false;
        cex = nm(a);
      }
    add("bottom-least", ok, cex);
  }
  {
    bool ok = true;
    std::string cex;
    for (std::size_t a = 0; a < n && ok; ++a)
      for (std::size_t b = 0; b < n && ok; ++b)
        for (std::size_t c = 0; c < n && ok; ++c) {
          bool lhs = le(c, B.imp(a, b));
          bool rhs = le(B.conj(a, c), b);
          if (lhs != rhs) {
            ok = false;
            cex = nm(a) + ", " + nm(b) + ", " + nm(c);
          }
        }
    add("imp-relative-complement", ok, cex);
  }
  {
    bool okA = true, okE = true;
    std::string cexA, cexE;
    for (const auto& fam : law_families(n)) {
      std::size_t g = B.forall(fam);
      std::size_t l = B.exists(fam);
      for (std::size_t x : fam) {
        if (okA && !le(g, x)) {
          okA = false;
          cexA = "forall family member " + nm(x);
        }
        if (okE && !le(x, l)) {
          okE = false;
          cexE = "exists family member " + nm(x);
        }
      }
      for (std::size_t c = 0; c < n; ++c) {
        bool below_all = true, above_all = true;
        for (std::size_t x : fam) {
          below_all = below_all && le(c, x);
          above_all = above_all && le(x, c);
        }
        if (okA && below_all && !le(c, g)) {
          okA = false;
          cexA = nm(c) + " under a forall family";
        }
        if (okE && above_all && !le(l, c)) {
          okE = false;
          cexE = nm(c) + " over an exists family";
        }
      }
    }
    add("forall-glb-of-families", okA, cexA);
    add("exists-lub-of-families", okE, cexE);
  }
  {
    bool ok = true;
    std::string cex;
    for (std::size_t a = 0; a < n && ok; ++a)
      for (std::size_t b = 0; b < n && ok; ++b)
        if (B.positive(B.imp(a, b)) && B.positive(a) && !B.positive(b)) {
          ok = false;
          cex = nm(a) + " => " + nm(b);
        }
    add("positivity-modus-ponens", ok, cex);
  }

  rep.tva_ok = std::all_of(rep.laws.begin(), rep.laws.end(),
                           [](const LawCheck& l) { return l.pass; });
  {
    bool ok = true;
    std::string cex;
    for (std::size_t a = 0; a < n && ok; ++a)
      for (std::size_t b = 0; b < n && ok; ++b)
        if (a != b && le(a, b) && le(b, a)) {
          ok = false;
          cex = nm(a) + " and " + nm(b);
        }
    rep.antisymmetry = ok;
    rep.laws.push_back(LawCheck{"antisymmetry", ok, cex});
  }
  rep.heyting_ok = rep.tva_ok && rep.antisymmetry;
  return rep;
}

// ---------------------------------------------------------------------------
// Candidates.

CandidatePtr c_top() {
  static CandidatePtr t = std::make_shared<Candidate>(Candidate{Candidate::Top, nullptr, nullptr, {}});
  return t;
}
CandidatePtr c_imp(CandidatePtr a, CandidatePtr b) {
  return std::make_shared<Candidate>(Candidate{Candidate::Imp, std::move(a), std::move(b), {}});
}
CandidatePtr c_and(CandidatePtr a, CandidatePtr b) {
  return std::make_shared<Candidate>(Candidate{Candidate::And, std::move(a), std::move(b), {}});
}
CandidatePtr c_or(CandidatePtr a, CandidatePtr b) {
  return std::make_shared<Candidate>(Candidate{Candidate::Or, std::move(a), std::move(b), {}});
}
CandidatePtr c_forall(std::vector<CandidatePtr> family) {
  return std::make_shared<Candidate>(
      Candidate{Candidate::Forall, nullptr, nullptr, std::move(family)});
}
CandidatePtr c_exists(std::vector<CandidatePtr> family) {
  return std::make_shared<Candidate>(
      Candidate{Candidate::Exists, nullptr, nullptr, std::move(family)});
}
CandidatePtr c_bottom() { return c_top(); }

bool candidate_eq(const CandidatePtr& a, const CandidatePtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Candidate::Top:
      return true;
    case Candidate::Imp:
    case Candidate::And:
    case Candidate::Or:
      return candidate_eq(a->a, b->a) && candidate_eq(a->b, b->b);
    case Candidate::Forall:
    case Candidate::Exists: {
      if (a->family.size() != b->family.size()) return false;
      for (size_t i = 0; i < a->family.size(); ++i)
        if (!candidate_eq(a->family[i], b->family[i])) return false;
      return true;
    }
  }
  return false;
}

std::string print_candidate(const CandidatePtr& c) {
  switch (c->kind) {
    case Candidate::Top:
      return "T~";
    case Candidate::Imp:
      return "(" + print_candidate(c->a) + " =>~ " + print_candidate(c->b) + ")";
    case Candidate::And:
      return "(" + print_candidate(c->a) + " /\\~ " + print_candidate(c->b) + ")";
    case Candidate::Or:
      return "(" + print_candidate(c->a) + " \\/~ " + print_candidate(c->b) + ")";
    case Candidate::Forall:
    case Candidate::Exists: {
      std::string out = c->kind == Candidate::Forall ? "forall~{" : "exists~{";
      for (size_t i = 0; i < c->family.size(); ++i) {
        if (i) out += ", ";
        out += print_candidate(c->family[i]);
      }
      return out + "}";
    }
  }
  return "?";
}

std::vector<ProofPtr> SampleMap::for_candidate(const CandidatePtr& c) const {
  std::vector<ProofPtr> out = defaults;
  auto it = samples.find(print_candidate(c));
  if (it != samples.end()) out.insert(out.end(), it->second.begin(), it->second.end());
  return out;
}

SampleMap SampleMap::standard() {
  SampleMap m;
  m.defaults = {mk_unit()};
  return m;
}

namespace {

// All proofs reachable by reduction, bounded. Sets `complete` to false
// when the bound is hit.
std::vector<ProofPtr> reachable_reducts(const ProofPtr& p, std::size_t bound, bool& complete) {
  complete = true;
  std::vector<ProofPtr> out;
  std::set<std::string> seen;
  std::vector<ProofPtr> queue{p};
  seen.insert(canonical_key(p));
  while (!queue.empty()) {
    ProofPtr cur = queue.back();
    queue.pop_back();
    out.push_back(cur);
    for (const auto& step : all_reduction_steps(cur)) {
      if (seen.insert(canonical_key(step.result)).second) {
        if (out.size() + queue.size() >= bound) {
          complete = false;
          return out;
        }
        queue.push_back(step.result);
      }
    }
  }
  return out;
}

std::string loop_detail(const SnResult& sn) {
  std::string out = "reduction loop:";
  for (const auto& q : sn.loop_prefix) out += " " + print_proof(q) + " ~>";
  out += " ...";
  return out;
}

}  // namespace

MemberEvidence candidate_member(const CandidatePtr& c, const ProofPtr& p, std::size_t fuel,
                                const SampleMap& samples) {
  // Every candidate contains only strongly normalizing proofs.
  SnResult sn = strongly_normalizing(p, fuel);
  if (sn.status == SnStatus::NotSN)
    return MemberEvidence{Membership::NonMember, loop_detail(sn), p};
  if (sn.status == SnStatus::Unknown)
    return MemberEvidence{Membership::Unknown, "strong normalization undecided within fuel", {}};
  if (c->kind == Candidate::Top) return MemberEvidence{Membership::Member, "strongly normalizing", {}};

  bool complete = true;
  std::vector<ProofPtr> reducts = reachable_reducts(p, fuel, complete);
  bool pending = !complete;

  auto sub_member = [&](const CandidatePtr& sc, const ProofPtr& sp) {
    return candidate_member(sc, sp, fuel, samples);
  };

  for (const auto& r : reducts) {
    switch (c->kind) {
      case Candidate::Imp: {
        auto* lam = std::get_if<PrLam>(&r->node);
        if (!lam) break;
        for (const auto& s : samples.for_candidate(c->a)) {
          MemberEvidence in_domain = sub_member(c->a, s);
          if (in_domain.verdict != Membership::Member) continue;
          MemberEvidence res = sub_member(c->b, open_hyp_at(lam->body, 0, s));
          if (res.verdict == Membership::NonMember)
            return MemberEvidence{Membership::NonMember,
                                  "argument " + print_proof(s) + " leaves the codomain: " +
                                      res.detail,
                                  s};
          if (res.verdict == Membership::Unknown) pending = true;
        }
        break;
      }
      case Candidate::And: {
        auto* pair = std::get_if<PrPair>(&r->node);
        if (!pair) break;
        MemberEvidence l = sub_member(c->a, pair->l);
        if (l.verdict == Membership::NonMember)
          return MemberEvidence{Membership::NonMember, "first component: " + l.detail,
                                l.counterexample};
        MemberEvidence rr = sub_member(c->b, pair->r);
        if (rr.verdict == Membership::NonMember)
          return MemberEvidence{Membership::NonMember, "second component: " + rr.detail,
                                rr.counterexample};
        if (l.verdict == Membership::Unknown || rr.verdict == Membership::Unknown) pending = true;
        break;
      }
      case Candidate::Or: {
        auto* inj = std::get_if<PrInj>(&r->node);
        if (!inj) break;
        MemberEvidence m = sub_member(inj->right ? c->b : c->a, inj->p);
        if (m.verdict == Membership::NonMember)
          return MemberEvidence{Membership::NonMember, "injected proof: " + m.detail,
                                m.counterexample};
        if (m.verdict == Membership::Unknown) pending = true;
        break;
      }
      case Candidate::Forall: {
        auto* gen = std::get_if<PrGen>(&r->node);
        if (!gen) break;
        ProofPtr body = open_pvar_at(gen->body, 0, mk_var("#c", gen->sort));
        for (const auto& fc : c->family) {
          MemberEvidence m = sub_member(fc, body);
          if (m.verdict == Membership::NonMember)
            return MemberEvidence{Membership::NonMember, "generalized body: " + m.detail,
                                  m.counterexample};
          if (m.verdict == Membership::Unknown) pending = true;
        }
        break;
      }
      case Candidate::Exists: {
        auto* pack = std::get_if<PrPack>(&r->node);
        if (!pack) break;
        bool any_member = false, any_unknown = false;
        for (const auto& fc : c->family) {
          MemberEvidence m = sub_member(fc, pack->p);
          if (m.verdict == Membership::Member) {
            any_member = true;
            break;
          }
          if (m.verdict == Membership::Unknown) any_unknown = true;
        }
        if (!any_member) {
          if (any_unknown || c->family.empty())
            pending = true;
          else
            return MemberEvidence{Membership::NonMember,
                                  "packed proof is in no family member", pack->p};
        }
        break;
      }
      case Candidate::Top:
        break;
    }
  }
  if (pending) return MemberEvidence{Membership::Unknown, "bounded exploration incomplete", {}};
  return MemberEvidence{Membership::Member, "all sampled tests passed", {}};
}

}  // namespace demod
