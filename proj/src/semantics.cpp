#include "demod/semantics.hpp"

#include <algorithm>

#include "demod/print.hpp"

namespace demod {

Domain Domain::named(std::vector<std::string> elems) { return Domain{std::move(elems), false}; }

Domain Domain::nat(std::size_t bound) {
  Domain d;
  d.truncated_nat = true;
  for (std::size_t i = 0; i < bound; ++i) d.elems.push_back(std::to_string(i));
  return d;
}

namespace {

const Domain& domain_of(const Model& M, const SortName& sort) {
  auto it = M.domains.find(sort);
  if (it == M.domains.end()) throw Error("no domain for sort " + sort);
  return it->second;
}

template <class ModelT>
std::optional<std::size_t> denote_term_in(const TermPtr& t, const Valuation& phi,
                                          const ModelT& M) {
  return std::visit(
      overloaded{
          [&](const TVar& v) -> std::optional<std::size_t> {
            auto it = phi.find(v.name);
            if (it == phi.end()) throw Error("valuation misses variable " + v.name);
            return it->second;
          },
          [&](const TBound&) -> std::optional<std::size_t> {
            throw KernelError("denotation of a loose bound variable");
          },
          [&](const TApp& a) -> std::optional<std::size_t> {
            std::vector<std::size_t> args;
            args.reserve(a.args.size());
            for (const auto& arg : a.args) {
              auto v = denote_term_in(arg, phi, M);
              if (!v) return std::nullopt;  // overflow propagates
              args.push_back(*v);
            }
            auto it = M.funcs.find(a.fn);
            if (it == M.funcs.end()) throw Error("no interpretation for function " + a.fn);
            auto entry = it->second.table.find(args);
            if (entry == it->second.table.end())
              throw Error("function interpretation incomplete: " + a.fn);
            return entry->second;
          },
      },
      t->node);
}

// Generic denotation: `Ops` supplies the algebra operations for the value
// type (finite carrier index or candidate expression).
template <class V, class ModelT, class Ops>
std::optional<V> denote_in(const PropPtr& p, const Valuation& phi, const ModelT& M,
                           const Ops& ops, int depth) {
  auto rec = [&](const PropPtr& q, const Valuation& phi2, int d) {
    return denote_in<V>(q, phi2, M, ops, d);
  };
  return std::visit(
      overloaded{
          [&](const PAtom& a) -> std::optional<V> {
            std::vector<std::size_t> args;
            for (const auto& arg : a.args) {
              auto v = denote_term_in(arg, phi, M);
              if (!v) return std::nullopt;
              args.push_back(*v);
            }
            auto it = M.preds.find(a.pred);
            if (it == M.preds.end()) throw Error("no interpretation for predicate " + a.pred);
            auto entry = it->second.table.find(args);
            if (entry == it->second.table.end())
              throw Error("predicate interpretation incomplete: " + a.pred);
            return entry->second;
          },
          [&](const PTruth&) -> std::optional<V> { return ops.top(); },
          [&](const PFalsity&) -> std::optional<V> { return ops.bottom(); },
          [&](const PAnd& b) -> std::optional<V> {
            auto l = rec(b.l, phi, depth), r = rec(b.r, phi, depth);
            if (!l || !r) return std::nullopt;
            return ops.conj(*l, *r);
          },
          [&](const POr& b) -> std::optional<V> {
            auto l = rec(b.l, phi, depth), r = rec(b.r, phi, depth);
            if (!l || !r) return std::nullopt;
            return ops.disj(*l, *r);
          },
          [&](const PImp& b) -> std::optional<V> {
            auto l = rec(b.l, phi, depth), r = rec(b.r, phi, depth);
            if (!l || !r) return std::nullopt;
            return ops.imp(*l, *r);
          },
          [&](const PForall& q) -> std::optional<V> {
            auto it = M.domains.find(q.sort);
            if (it == M.domains.end()) throw Error("no domain for sort " + q.sort);
            std::string fresh = "#d" + std::to_string(depth);
            std::vector<V> family;
            for (std::size_t d = 0; d < it->second.elems.size(); ++d) {
              Valuation phi2 = phi;
              phi2[fresh] = d;
              auto v = rec(open_body(q.body, mk_var(fresh, q.sort)), phi2, depth + 1);
              if (!v) return std::nullopt;
              family.push_back(*v);
            }
            return ops.forall(family);
          },
          [&](const PExists& q) -> std::optional<V> {
            auto it = M.domains.find(q.sort);
            if (it == M.domains.end()) throw Error("no domain for sort " + q.sort);
            std::string fresh = "#d" + std::to_string(depth);
            std::vector<V> family;
            for (std::size_t d = 0; d < it->second.elems.size(); ++d) {
              Valuation phi2 = phi;
              phi2[fresh] = d;
              auto v = rec(open_body(q.body, mk_var(fresh, q.sort)), phi2, depth + 1);
              if (!v) return std::nullopt;
              family.push_back(*v);
            }
            return ops.exists(family);
          },
      },
      p->node);
}

struct FiniteOps {
  const TvaView* B;
  std::size_t top() const { return B->top(); }
  std::size_t bottom() const { return B->bottom(); }
  std::size_t imp(std::size_t a, std::size_t b) const { return B->imp(a, b); }
  std::size_t conj(std::size_t a, std::size_t b) const { return B->conj(a, b); }
  std::size_t disj(std::size_t a, std::size_t b) const { return B->disj(a, b); }
  std::size_t forall(const std::vector<std::size_t>& f) const { return B->forall(f); }
  std::size_t exists(const std::vector<std::size_t>& f) const { return B->exists(f); }
};

struct CandidateOps {
  CandidatePtr top() const { return c_top(); }
  CandidatePtr bottom() const { return c_bottom(); }
  CandidatePtr imp(CandidatePtr a, CandidatePtr b) const { return c_imp(a, b); }
  CandidatePtr conj(CandidatePtr a, CandidatePtr b) const { return c_and(a, b); }
  CandidatePtr disj(CandidatePtr a, CandidatePtr b) const { return c_or(a, b); }
  CandidatePtr forall(const std::vector<CandidatePtr>& f) const { return c_forall(f); }
  CandidatePtr exists(const std::vector<CandidatePtr>& f) const { return c_exists(f); }
};

}  // namespace

std::optional<std::size_t> denote_term(const TermPtr& t, const Valuation& phi, const Model& M) {
  return denote_term_in(t, phi, M);
}

std::optional<std::size_t> denote_prop(const PropPtr& p, const Valuation& phi, const Model& M) {
  FiniteOps ops{M.algebra.get()};
  return denote_in<std::size_t>(p, phi, M, ops, 0);
}

std::vector<Valuation> all_valuations(const std::map<std::string, SortName>& vars,
                                      const Model& M) {
  std::vector<std::pair<std::string, std::size_t>> slots;  // name, domain size
  for (const auto& [name, sort] : vars) slots.emplace_back(name, domain_of(M, sort).elems.size());
  std::vector<Valuation> out;
  std::vector<std::size_t> idx(slots.size(), 0);
  while (true) {
    Valuation phi;
    for (std::size_t i = 0; i < slots.size(); ++i) phi[slots[i].first] = idx[i];
    out.push_back(std::move(phi));
    std::size_t k = slots.size();
    while (k > 0) {
      --k;
      if (++idx[k] < slots[k].second) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
    if (slots.empty()) return out;
  }
}

namespace {

std::map<std::string, SortName> rule_vars(const RewriteRule& rule) {
  std::map<std::string, SortName> vars;
  if (rule.kind == RuleKind::TermRule) {
    vars = free_vars(rule.term_lhs);
    for (const auto& [n, s] : free_vars(rule.term_rhs)) vars.emplace(n, s);
  } else {
    vars = free_vars(rule.prop_lhs);
    for (const auto& [n, s] : free_vars(rule.prop_rhs)) vars.emplace(n, s);
  }
  return vars;
}

}  // namespace

RuleValidReport rule_valid(const RewriteRule& rule, const Model& M,
                           const std::vector<Valuation>& valuations) {
  std::optional<RuleValidReport> inconclusive;
  for (const auto& phi : valuations) {
    std::optional<std::size_t> l, r;
    if (rule.kind == RuleKind::TermRule) {
      l = denote_term(rule.term_lhs, phi, M);
      r = denote_term(rule.term_rhs, phi, M);
    } else {
      l = denote_prop(rule.prop_lhs, phi, M);
      r = denote_prop(rule.prop_rhs, phi, M);
    }
    if (!l || !r) {
      if (!inconclusive)
        inconclusive = RuleValidReport{RuleValidity::Inconclusive, phi, l, r};
      continue;
    }
    if (*l != *r) return RuleValidReport{RuleValidity::Invalid, phi, l, r};
  }
  if (inconclusive) return *inconclusive;
  return RuleValidReport{RuleValidity::Valid, {}, {}, {}};
}

RuleValidReport rule_valid_everywhere(const RewriteRule& rule, const Model& M) {
  return rule_valid(rule, M, all_valuations(rule_vars(rule), M));
}

std::optional<Model> find_model(const RewriteSystem& theory, const TvaPtr& algebra,
                                std::size_t domain_size) {
  if (domain_size == 0) throw Error("domain size must be positive");
  Model M;
  M.algebra = algebra;
  std::vector<std::string> delems;
  for (std::size_t i = 0; i < domain_size; ++i) delems.push_back("d" + std::to_string(i));
  for (const auto& s : theory.sig.sorts) M.domains.emplace(s, Domain::named(delems));

  // Assignment slots: predicate entries first, then function entries.
  struct Slot {
    bool is_pred;
    std::string name;
    std::vector<std::size_t> tuple;
    std::size_t choices;
  };
  std::vector<Slot> slots;
  auto tuples_for = [&](std::size_t arity) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> idx(arity, 0);
    while (true) {
      out.push_back(idx);
      std::size_t k = arity;
      while (k > 0) {
        --k;
        if (++idx[k] < domain_size) break;
        idx[k] = 0;
        if (k == 0) return out;
      }
      if (arity == 0) return out;
    }
  };
  for (const auto& [name, argsorts] : theory.sig.predicates)
    for (auto& t : tuples_for(argsorts.size()))
      slots.push_back(Slot{true, name, t, algebra->size()});
  for (const auto& [name, decl] : theory.sig.functions)
    for (auto& t : tuples_for(decl.args.size()))
      slots.push_back(Slot{false, name, t, domain_size});

  double space = 1;
  for (const auto& s : slots) space *= static_cast<double>(s.choices);
  if (space > 1e7) throw Error("model search space too large; lower the domain size");

  std::vector<std::size_t> choice(slots.size(), 0);
  while (true) {
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (slots[i].is_pred)
        M.preds[slots[i].name].table[slots[i].tuple] = choice[i];
      else
        M.funcs[slots[i].name].table[slots[i].tuple] = choice[i];
    }
    bool ok = true;
    for (const auto& rule : theory.rules) {
      if (rule_valid_everywhere(rule, M).verdict != RuleValidity::Valid) {
        ok = false;
        break;
      }
    }
    if (ok) return M;
    std::size_t k = slots.size();
    bool advanced = false;
    while (k > 0) {
      --k;
      if (++choice[k] < slots[k].choices) {
        advanced = true;
        break;
      }
      choice[k] = 0;
    }
    if (!advanced) return std::nullopt;
  }
}

bool soundness_check(const Derivation& d, const Model& M) {
  const Sequent& seq = d.root.seq;
  std::map<std::string, SortName> vars;
  for (const auto& h : seq.ctx)
    for (const auto& [n, s] : free_vars(h.prop)) vars.emplace(n, s);
  for (const auto& [n, s] : free_vars(seq.goal)) vars.emplace(n, s);
  for (const auto& phi : all_valuations(vars, M)) {
    std::size_t meet = M.algebra->top();
    bool overflow = false;
    for (const auto& h : seq.ctx) {
      auto v = denote_prop(h.prop, phi, M);
      if (!v) {
        overflow = true;
        break;
      }
      meet = M.algebra->conj(meet, *v);
    }
    auto goal = denote_prop(seq.goal, phi, M);
    if (overflow || !goal) return false;
    if (!M.algebra->positive(M.algebra->imp(meet, *goal))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Candidate models.

std::optional<CandidatePtr> denote_candidate(const PropPtr& p, const Valuation& phi,
                                             const CandidateModel& M) {
  CandidateOps ops;
  return denote_in<CandidatePtr>(p, phi, M, ops, 0);
}

namespace {

// Desk-scale default interpretations on truncated-nat domains: constants
// denote 0, an n-ary function denotes 1 + the sum of its arguments (the
// unary case is the successor), overflowing above the bound.
FnInterp default_fn_interp(const FunDecl& decl, std::size_t bound) {
  FnInterp out;
  std::vector<std::size_t> idx(decl.args.size(), 0);
  while (true) {
    std::size_t sum = decl.args.empty() ? 0 : 1;
    for (std::size_t v : idx) sum += v;
    out.table[idx] = sum < bound ? std::optional<std::size_t>(sum) : std::nullopt;
    std::size_t k = idx.size();
    bool advanced = false;
    while (k > 0) {
      --k;
      if (++idx[k] < bound) {
        advanced = true;
        break;
      }
      idx[k] = 0;
    }
    if (!advanced) return out;
  }
}

template <class ModelT, class V, class DenoteRhs, class Equal>
bool complete_by_rules(ModelT& M, const RewriteSystem& theory, std::size_t passes,
                       const DenoteRhs& denote_rhs, const Equal& equal,
                       std::map<std::string, PredInterp<V>>& preds) {
  for (std::size_t pass = 0; pass < passes; ++pass) {
    bool changed = false;
    for (const auto& rule : theory.rules) {
      if (rule.kind != RuleKind::PropRule) continue;
      const auto& atom = std::get<PAtom>(rule.prop_lhs->node);
      std::map<std::string, SortName> vars = rule_vars(rule);
      // Valuations in ascending odometer order; for the successor pattern
      // this computes the alpha recursion bottom-up within one pass.
      std::vector<Valuation> vals;
      {
        std::vector<std::pair<std::string, std::size_t>> slots;
        for (const auto& [name, sort] : vars) {
          auto it = M.domains.find(sort);
          if (it == M.domains.end()) throw Error("no domain for sort " + sort);
          slots.emplace_back(name, it->second.elems.size());
        }
        std::vector<std::size_t> idx(slots.size(), 0);
        while (true) {
          Valuation phi;
          for (std::size_t i = 0; i < slots.size(); ++i) phi[slots[i].first] = idx[i];
          vals.push_back(std::move(phi));
          std::size_t k = slots.size();
          bool advanced = false;
          while (k > 0) {
            --k;
            if (++idx[k] < slots[k].second) {
              advanced = true;
              break;
            }
            idx[k] = 0;
          }
          if (!advanced) break;
        }
      }
      for (const auto& phi : vals) {
        std::vector<std::size_t> tuple;
        bool overflow = false;
        for (const auto& arg : atom.args) {
          auto v = denote_term_in(arg, phi, M);
          if (!v) {
            overflow = true;
            break;
          }
          tuple.push_back(*v);
        }
        if (overflow) continue;
        auto rhs = denote_rhs(rule.prop_rhs, phi);
        if (!rhs) continue;
        auto& entry = preds[atom.pred].table[tuple];
        if (!equal(entry, *rhs)) {
          entry = *rhs;
          changed = true;
        }
      }
    }
    if (!changed) return true;
  }
  return false;
}

}  // namespace

CandidateModel build_candidate_model(const RewriteSystem& theory, const Budgets& budgets,
                                     const std::map<std::string, CandidatePtr>& overrides) {
  CandidateModel M;
  for (const auto& s : theory.sig.sorts) M.domains.emplace(s, Domain::nat(budgets.domain_bound));
  for (const auto& [name, decl] : theory.sig.functions)
    M.funcs.emplace(name, default_fn_interp(decl, budgets.domain_bound));
  for (const auto& [name, argsorts] : theory.sig.predicates) {
    CandidatePtr init = c_top();
    if (auto it = overrides.find(name); it != overrides.end()) init = it->second;
    PredInterp<CandidatePtr> interp;
    std::vector<std::size_t> idx(argsorts.size(), 0);
    while (true) {
      interp.table[idx] = init;
      std::size_t k = idx.size();
      bool advanced = false;
      while (k > 0) {
        --k;
        if (++idx[k] < budgets.domain_bound) {
          advanced = true;
          break;
        }
        idx[k] = 0;
      }
      if (!advanced) break;
    }
    M.preds.emplace(name, std::move(interp));
  }
  M.stabilized = complete_by_rules<CandidateModel, CandidatePtr>(
      M, theory, budgets.model_passes,
      [&](const PropPtr& rhs, const Valuation& phi) { return denote_candidate(rhs, phi, M); },
      [](const CandidatePtr& a, const CandidatePtr& b) { return a && candidate_eq(a, b); },
      M.preds);
  return M;
}

FiniteCompletion build_completed_model(const RewriteSystem& theory, const TvaPtr& algebra,
                                       std::size_t nat_bound, const Budgets& budgets) {
  FiniteCompletion out;
  Model& M = out.model;
  M.algebra = algebra;
  for (const auto& s : theory.sig.sorts) M.domains.emplace(s, Domain::nat(nat_bound));
  for (const auto& [name, decl] : theory.sig.functions)
    M.funcs.emplace(name, default_fn_interp(decl, nat_bound));
  for (const auto& [name, argsorts] : theory.sig.predicates) {
    PredInterp<std::size_t> interp;
    std::vector<std::size_t> idx(argsorts.size(), 0);
    while (true) {
      interp.table[idx] = algebra->top();
      std::size_t k = idx.size();
      bool advanced = false;
      while (k > 0) {
        --k;
        if (++idx[k] < nat_bound) {
          advanced = true;
          break;
        }
        idx[k] = 0;
      }
      if (!advanced) break;
    }
    M.preds.emplace(name, std::move(interp));
  }
  out.stabilized = complete_by_rules<Model, std::size_t>(
      M, theory, budgets.model_passes,
      [&](const PropPtr& rhs, const Valuation& phi) { return denote_prop(rhs, phi, M); },
      [](std::size_t a, std::size_t b) { return a == b; }, M.preds);
  return out;
}

TaitReport tait_check(const ProofPtr& p, const PropPtr& prop, const RewriteSystem& theory,
                      const Budgets& budgets, const SampleMap& samples) {
  CandidateModel M = build_candidate_model(theory, budgets);
  TaitReport rep;
  rep.model_stabilized = M.stabilized;
  auto c = denote_candidate(prop, {}, M);
  if (!c) {
    rep.evidence = MemberEvidence{Membership::Unknown, "denotation overflow", {}};
    return rep;
  }
  rep.denotation = *c;
  rep.evidence = candidate_member(*c, p, budgets.candidate_fuel, samples);
  return rep;
}

SuperConsistencyReport super_consistency_report(const RewriteSystem& theory,
                                                const std::vector<TvaPtr>& battery,
                                                std::size_t domain_size,
                                                const Budgets& budgets) {
  SuperConsistencyReport rep;
  rep.all_found = true;
  for (const auto& B : battery) {
    SuperConsistencyEntry e;
    e.algebra = B->name();
    e.model = find_model(theory, B, domain_size);
    e.model_found = e.model.has_value();
    rep.all_found = rep.all_found && e.model_found;
    rep.entries.push_back(std::move(e));
  }

  // Reduction-level probe for the Crabbe pattern: a rule L --> (B => C)
  // with B congruent to L admits omega = fun x : L . x x, and omega omega
  // proves C. A reduction loop on it is negative evidence attached to the
  // report; the finite-model successes above are only necessary conditions.
  RuleSystem modulo = RuleSystem::make(SystemKind::Modulo, theory);
  for (const auto& rule : theory.rules) {
    if (rule.kind != RuleKind::PropRule) continue;
    if (!free_vars(rule.prop_lhs).empty()) continue;
    PropPtr rhs = whnf(rule.prop_rhs, theory, budgets.congruence_depth).value;
    auto* imp = std::get_if<PImp>(&rhs->node);
    if (!imp) continue;
    if (congruent(imp->l, rule.prop_lhs, theory, budgets.congruence_depth).verdict !=
        Congruence::Yes)
      continue;
    ProofPtr omega = mk_lam("x", rule.prop_lhs, mk_papp(mk_bound_hyp(0), mk_bound_hyp(0)));
    ProofPtr omega_omega = mk_papp(omega, omega);
    if (!derivation_ok(typecheck(omega_omega, {}, imp->r, modulo, budgets))) continue;
    SnResult sn = strongly_normalizing(omega_omega, budgets.sn_fuel);
    if (sn.status == SnStatus::NotSN) {
      rep.not_sn = LoopEvidence{rule.name, omega_omega, imp->r, sn.loop_prefix};
      break;
    }
  }
  return rep;
}

}  // namespace demod
