#include "demod/proofs.hpp"

namespace demod {

ProofPtr mk_hyp(std::string name) { return std::make_shared<Proof>(Proof{PrHyp{std::move(name)}}); }
ProofPtr mk_bound_hyp(int index) { return std::make_shared<Proof>(Proof{PrBoundHyp{index}}); }
ProofPtr mk_lam(std::string hint, PropPtr ann, ProofPtr body) {
  return std::make_shared<Proof>(Proof{PrLam{std::move(hint), std::move(ann), std::move(body)}});
}
ProofPtr mk_papp(ProofPtr fn, ProofPtr arg) {
  return std::make_shared<Proof>(Proof{PrApp{std::move(fn), std::move(arg)}});
}
ProofPtr mk_pair(ProofPtr l, ProofPtr r) {
  return std::make_shared<Proof>(Proof{PrPair{std::move(l), std::move(r)}});
}
ProofPtr mk_proj(bool second, ProofPtr p) {
  return std::make_shared<Proof>(Proof{PrProj{second, std::move(p)}});
}
ProofPtr mk_inj(bool right, ProofPtr p) {
  return std::make_shared<Proof>(Proof{PrInj{right, std::move(p)}});
}
ProofPtr mk_match(ProofPtr scrut, std::string lhint, ProofPtr lbody, std::string rhint,
                  ProofPtr rbody) {
  return std::make_shared<Proof>(Proof{
      PrMatch{std::move(scrut), std::move(lhint), std::move(rhint), std::move(lbody),
              std::move(rbody)}});
}
ProofPtr mk_gen(std::string hint, SortName sort, ProofPtr body) {
  return std::make_shared<Proof>(Proof{PrGen{std::move(hint), std::move(sort), std::move(body)}});
}
ProofPtr mk_inst(ProofPtr p, TermPtr witness) {
  return std::make_shared<Proof>(Proof{PrInst{std::move(p), std::move(witness)}});
}
ProofPtr mk_pack(TermPtr witness, ProofPtr p) {
  return std::make_shared<Proof>(Proof{PrPack{std::move(witness), std::move(p)}});
}
ProofPtr mk_unpack(ProofPtr scrut, std::string vhint, std::string hhint, ProofPtr body) {
  return std::make_shared<Proof>(
      Proof{PrUnpack{std::move(scrut), std::move(vhint), std::move(hhint), std::move(body)}});
}
ProofPtr mk_unit() { return std::make_shared<Proof>(Proof{PrUnit{}}); }
ProofPtr mk_absurd(ProofPtr p, PropPtr goal) {
  return std::make_shared<Proof>(Proof{PrAbsurd{std::move(p), std::move(goal)}});
}
ProofPtr mk_fold(std::string rule, ProofPtr p) {
  return std::make_shared<Proof>(Proof{PrFold{std::move(rule), std::move(p)}});
}
ProofPtr mk_unfold(std::string rule, ProofPtr p) {
  return std::make_shared<Proof>(Proof{PrUnfold{std::move(rule), std::move(p)}});
}
ProofPtr mk_super_intro(std::string rule, std::vector<SuperSub> subs) {
  return std::make_shared<Proof>(Proof{PrSuperIntro{std::move(rule), std::move(subs)}});
}
ProofPtr mk_super_elim(std::string rule, int leaf, ProofPtr main,
                       std::vector<std::variant<TermPtr, ProofPtr>> args) {
  return std::make_shared<Proof>(
      Proof{PrSuperElim{std::move(rule), leaf, std::move(main), std::move(args)}});
}

bool alpha_eq(const ProofPtr& a, const ProofPtr& b) {
  if (a.get() == b.get()) return true;
  return std::visit(
      overloaded{
          [&](const PrHyp& x) {
            auto* y = std::get_if<PrHyp>(&b->node);
            return y && y->name == x.name;
          },
          [&](const PrBoundHyp& x) {
            auto* y = std::get_if<PrBoundHyp>(&b->node);
            return y && y->index == x.index;
          },
          [&](const PrLam& x) {
            auto* y = std::get_if<PrLam>(&b->node);
            return y && alpha_eq(x.ann, y->ann) && alpha_eq(x.body, y->body);
          },
          [&](const PrApp& x) {
            auto* y = std::get_if<PrApp>(&b->node);
            return y && alpha_eq(x.fn, y->fn) && alpha_eq(x.arg, y->arg);
          },
          [&](const PrPair& x) {
            auto* y = std::get_if<PrPair>(&b->node);
            return y && alpha_eq(x.l, y->l) && alpha_eq(x.r, y->r);
          },
          [&](const PrProj& x) {
            auto* y = std::get_if<PrProj>(&b->node);
            return y && y->second == x.second && alpha_eq(x.p, y->p);
          },
          [&](const PrInj& x) {
            auto* y = std::get_if<PrInj>(&b->node);
            return y && y->right == x.right && alpha_eq(x.p, y->p);
          },
          [&](const PrMatch& x) {
            auto* y = std::get_if<PrMatch>(&b->node);
            return y && alpha_eq(x.scrut, y->scrut) && alpha_eq(x.lbody, y->lbody) &&
                   alpha_eq(x.rbody, y->rbody);
          },
          [&](const PrGen& x) {
            auto* y = std::get_if<PrGen>(&b->node);
            return y && y->sort == x.sort && alpha_eq(x.body, y->body);
          },
          [&](const PrInst& x) {
            auto* y = std::get_if<PrInst>(&b->node);
            return y && alpha_eq(x.p, y->p) && alpha_eq(x.witness, y->witness);
          },
          [&](const PrPack& x) {
            auto* y = std::get_if<PrPack>(&b->node);
            return y && alpha_eq(x.witness, y->witness) && alpha_eq(x.p, y->p);
          },
          [&](const PrUnpack& x) {
            auto* y = std::get_if<PrUnpack>(&b->node);
            return y && alpha_eq(x.scrut, y->scrut) && alpha_eq(x.body, y->body);
          },
          [&](const PrUnit&) { return std::holds_alternative<PrUnit>(b->node); },
          [&](const PrAbsurd& x) {
            auto* y = std::get_if<PrAbsurd>(&b->node);
            return y && alpha_eq(x.p, y->p) && alpha_eq(x.goal, y->goal);
          },
          [&](const PrFold& x) {
            auto* y = std::get_if<PrFold>(&b->node);
            return y && y->rule == x.rule && alpha_eq(x.p, y->p);
          },
          [&](const PrUnfold& x) {
            auto* y = std::get_if<PrUnfold>(&b->node);
            return y && y->rule == x.rule && alpha_eq(x.p, y->p);
          },
          [&](const PrSuperIntro& x) {
            auto* y = std::get_if<PrSuperIntro>(&b->node);
            if (!y || y->rule != x.rule || y->subs.size() != x.subs.size()) return false;
            for (size_t i = 0; i < x.subs.size(); ++i) {
              if (x.subs[i].binders.size() != y->subs[i].binders.size()) return false;
              for (size_t j = 0; j < x.subs[i].binders.size(); ++j)
                if (x.subs[i].binders[j].is_var != y->subs[i].binders[j].is_var) return false;
              if (!alpha_eq(x.subs[i].body, y->subs[i].body)) return false;
            }
            return true;
          },
          [&](const PrSuperElim& x) {
            auto* y = std::get_if<PrSuperElim>(&b->node);
            if (!y || y->rule != x.rule || y->leaf != x.leaf || !alpha_eq(x.main, y->main) ||
                y->args.size() != x.args.size())
              return false;
            for (size_t i = 0; i < x.args.size(); ++i) {
              if (x.args[i].index() != y->args[i].index()) return false;
              if (auto* t = std::get_if<TermPtr>(&x.args[i])) {
                if (!alpha_eq(*t, std::get<TermPtr>(y->args[i]))) return false;
              } else if (!alpha_eq(std::get<ProofPtr>(x.args[i]),
                                   std::get<ProofPtr>(y->args[i]))) {
                return false;
              }
            }
            return true;
          },
      },
      a->node);
}

// ---------------------------------------------------------------------------
// Binder manipulation. Substituted values are locally closed, so no index
// shifting is ever required; a loose index above the target is a bug.

namespace {

int hyp_binders(const SuperSub& s) {
  int n = 0;
  for (const auto& b : s.binders)
    if (!b.is_var) ++n;
  return n;
}
int var_binders(const SuperSub& s) {
  int n = 0;
  for (const auto& b : s.binders)
    if (b.is_var) ++n;
  return n;
}

template <class FHyp, class FVarTerm, class FVarProp>
ProofPtr map_proof(const ProofPtr& p, int hk, int vk, const FHyp& fhyp, const FVarTerm& fterm,
                   const FVarProp& fprop) {
  auto rec = [&](const ProofPtr& q, int dh, int dv) {
    return map_proof(q, hk + dh, vk + dv, fhyp, fterm, fprop);
  };
  return std::visit(
      overloaded{
          [&](const PrHyp&) -> ProofPtr { return fhyp(p, hk); },
          [&](const PrBoundHyp&) -> ProofPtr { return fhyp(p, hk); },
          [&](const PrLam& x) -> ProofPtr {
            return mk_lam(x.hint, fprop(x.ann, vk), rec(x.body, 1, 0));
          },
          [&](const PrApp& x) -> ProofPtr { return mk_papp(rec(x.fn, 0, 0), rec(x.arg, 0, 0)); },
          [&](const PrPair& x) -> ProofPtr { return mk_pair(rec(x.l, 0, 0), rec(x.r, 0, 0)); },
          [&](const PrProj& x) -> ProofPtr { return mk_proj(x.second, rec(x.p, 0, 0)); },
          [&](const PrInj& x) -> ProofPtr { return mk_inj(x.right, rec(x.p, 0, 0)); },
          [&](const PrMatch& x) -> ProofPtr {
            return mk_match(rec(x.scrut, 0, 0), x.lhint, rec(x.lbody, 1, 0), x.rhint,
                            rec(x.rbody, 1, 0));
          },
          [&](const PrGen& x) -> ProofPtr {
            return mk_gen(x.hint, x.sort, rec(x.body, 0, 1));
          },
          [&](const PrInst& x) -> ProofPtr {
            return mk_inst(rec(x.p, 0, 0), fterm(x.witness, vk));
          },
          [&](const PrPack& x) -> ProofPtr {
            return mk_pack(fterm(x.witness, vk), rec(x.p, 0, 0));
          },
          [&](const PrUnpack& x) -> ProofPtr {
            return mk_unpack(rec(x.scrut, 0, 0), x.vhint, x.hhint, rec(x.body, 1, 1));
          },
          [&](const PrUnit&) -> ProofPtr { return p; },
          [&](const PrAbsurd& x) -> ProofPtr {
            return mk_absurd(rec(x.p, 0, 0), fprop(x.goal, vk));
          },
          [&](const PrFold& x) -> ProofPtr { return mk_fold(x.rule, rec(x.p, 0, 0)); },
          [&](const PrUnfold& x) -> ProofPtr { return mk_unfold(x.rule, rec(x.p, 0, 0)); },
          [&](const PrSuperIntro& x) -> ProofPtr {
            std::vector<SuperSub> subs;
            subs.reserve(x.subs.size());
            for (const auto& s : x.subs)
              subs.push_back(SuperSub{s.binders, rec(s.body, hyp_binders(s), var_binders(s))});
            return mk_super_intro(x.rule, std::move(subs));
          },
          [&](const PrSuperElim& x) -> ProofPtr {
            std::vector<std::variant<TermPtr, ProofPtr>> args;
            args.reserve(x.args.size());
            for (const auto& a : x.args) {
              if (auto* t = std::get_if<TermPtr>(&a))
                args.emplace_back(fterm(*t, vk));
              else
                args.emplace_back(rec(std::get<ProofPtr>(a), 0, 0));
            }
            return mk_super_elim(x.rule, x.leaf, rec(x.main, 0, 0), std::move(args));
          },
      },
      p->node);
}

}  // namespace

ProofPtr open_hyp_at(const ProofPtr& p, int k, const ProofPtr& value) {
  return map_proof(
      p, k, 0,
      [&](const ProofPtr& q, int hk) -> ProofPtr {
        if (auto* b = std::get_if<PrBoundHyp>(&q->node)) {
          if (b->index == hk) return value;
          if (b->index > hk) throw KernelError("loose hypothesis index above opening target");
        }
        return q;
      },
      [](const TermPtr& t, int) { return t; }, [](const PropPtr& pr, int) { return pr; });
}

ProofPtr close_hyp_at(const ProofPtr& p, int k, const std::string& name) {
  return map_proof(
      p, k, 0,
      [&](const ProofPtr& q, int hk) -> ProofPtr {
        if (auto* h = std::get_if<PrHyp>(&q->node); h && h->name == name)
          return mk_bound_hyp(hk);
        return q;
      },
      [](const TermPtr& t, int) { return t; }, [](const PropPtr& pr, int) { return pr; });
}

ProofPtr open_pvar_at(const ProofPtr& p, int k, const TermPtr& value) {
  return map_proof(
      p, 0, k, [](const ProofPtr& q, int) { return q; },
      [&](const TermPtr& t, int vk) { return open_term_at(t, vk, value); },
      [&](const PropPtr& pr, int vk) { return open_prop_at(pr, vk, value); });
}

ProofPtr close_pvar_at(const ProofPtr& p, int k, const std::string& name) {
  return map_proof(
      p, 0, k, [](const ProofPtr& q, int) { return q; },
      [&](const TermPtr& t, int vk) { return close_term_at(t, vk, name); },
      [&](const PropPtr& pr, int vk) { return close_prop_at(pr, vk, name); });
}

std::set<std::string> free_hyps(const ProofPtr& p) {
  std::set<std::string> out;
  map_proof(
      p, 0, 0,
      [&](const ProofPtr& q, int) {
        if (auto* h = std::get_if<PrHyp>(&q->node)) out.insert(h->name);
        return q;
      },
      [](const TermPtr& t, int) { return t; }, [](const PropPtr& pr, int) { return pr; });
  return out;
}

bool closed_proof(const ProofPtr& p) { return free_hyps(p).empty(); }

NodeClass classify_last_rule(const ProofPtr& p) {
  return std::visit(
      overloaded{
          [](const PrHyp&) { return NodeClass::Hypothesis; },
          [](const PrBoundHyp&) { return NodeClass::Hypothesis; },
          [](const PrLam&) { return NodeClass::Introduction; },
          [](const PrApp&) { return NodeClass::Elimination; },
          [](const PrPair&) { return NodeClass::Introduction; },
          [](const PrProj&) { return NodeClass::Elimination; },
          [](const PrInj&) { return NodeClass::Introduction; },
          [](const PrMatch&) { return NodeClass::Elimination; },
          [](const PrGen&) { return NodeClass::Introduction; },
          [](const PrInst&) { return NodeClass::Elimination; },
          [](const PrPack&) { return NodeClass::Introduction; },
          [](const PrUnpack&) { return NodeClass::Elimination; },
          [](const PrUnit&) { return NodeClass::Introduction; },
          [](const PrAbsurd&) { return NodeClass::Elimination; },
          [](const PrFold&) { return NodeClass::FoldUnfoldNode; },
          [](const PrUnfold&) { return NodeClass::FoldUnfoldNode; },
          [](const PrSuperIntro&) { return NodeClass::SuperNode; },
          [](const PrSuperElim&) { return NodeClass::SuperNode; },
      },
      p->node);
}

std::string node_class_name(NodeClass c) {
  switch (c) {
    case NodeClass::Introduction: return "introduction";
    case NodeClass::Elimination: return "elimination";
    case NodeClass::Hypothesis: return "hypothesis";
    case NodeClass::FoldUnfoldNode: return "fold-unfold";
    case NodeClass::SuperNode: return "supernatural";
  }
  return "?";
}

std::string system_name(SystemKind k) {
  switch (k) {
    case SystemKind::Modulo: return "modulo";
    case SystemKind::FoldUnfold: return "foldunfold";
    case SystemKind::SuperNatural: return "supernatural";
  }
  return "?";
}

std::string reject_reason_name(RejectReason r) {
  switch (r) {
    case RejectReason::Mismatch: return "mismatch";
    case RejectReason::Budget: return "budget";
    case RejectReason::Scope: return "scope";
    case RejectReason::IllegalNode: return "illegal-node";
    case RejectReason::CannotInfer: return "cannot-infer";
    case RejectReason::Sort: return "sort";
    case RejectReason::UnknownRule: return "unknown-rule";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Derived rules.

FoldUnfoldRules derive_fold_unfold(const RewriteRule& rule) {
  if (rule.kind != RuleKind::PropRule)
    throw Error("fold/unfold rules exist only for proposition rules: " + rule.name);
  FoldUnfoldRules out;
  out.fold.label = "fold";
  out.fold.premises.push_back(SchemaSequent{{}, rule.prop_rhs, {}});
  out.fold.conclusion = SchemaSequent{{}, rule.prop_lhs, {}};
  out.unfold.label = "unfold";
  out.unfold.premises.push_back(SchemaSequent{{}, rule.prop_lhs, {}});
  out.unfold.conclusion = SchemaSequent{{}, rule.prop_rhs, {}};
  return out;
}

namespace {

void decompose_rhs(const PropPtr& a, std::vector<SuperLeafBinder>& path,
                   std::vector<SuperLeaf>& leaves, std::set<std::string>& used, int& hyp_count) {
  std::visit(
      overloaded{
          [&](const PAtom&) { leaves.push_back(SuperLeaf{path, a}); },
          [&](const PImp& b) {
            SuperLeafBinder bind;
            bind.is_var = false;
            bind.name = "h" + std::to_string(++hyp_count);
            bind.hyp = b.l;
            path.push_back(bind);
            decompose_rhs(b.r, path, leaves, used, hyp_count);
            path.pop_back();
          },
          [&](const PAnd& b) {
            decompose_rhs(b.l, path, leaves, used, hyp_count);
            decompose_rhs(b.r, path, leaves, used, hyp_count);
          },
          [&](const PForall& q) {
            std::string v = fresh_name(q.hint.empty() ? "x" : q.hint, used);
            used.insert(v);
            SuperLeafBinder bind;
            bind.is_var = true;
            bind.name = v;
            bind.sort = q.sort;
            path.push_back(bind);
            decompose_rhs(open_body(q.body, mk_var(v, q.sort)), path, leaves, used, hyp_count);
            path.pop_back();
          },
          [&](const auto&) {
            throw Error(
                "supernatural rules require a right-hand side built from atoms with =>, /\\ "
                "and forall");
          },
      },
      a->node);
}

}  // namespace

SuperDerived derive_supernatural(const RewriteRule& rule) {
  if (rule.kind != RuleKind::PropRule)
    throw Error("supernatural rules exist only for proposition rules: " + rule.name);
  SuperDerived out;
  out.info.lhs = rule.prop_lhs;
  std::set<std::string> used;
  for (const auto& [v, s] : free_vars(rule.prop_lhs)) used.insert(v);
  std::vector<SuperLeafBinder> path;
  int hyp_count = 0;
  decompose_rhs(rule.prop_rhs, path, out.info.leaves, used, hyp_count);

  out.intro.label = rule.name + "-intro";
  for (const auto& leaf : out.info.leaves) {
    SchemaSequent prem;
    for (const auto& b : leaf.path) {
      if (b.is_var)
        prem.fresh.emplace_back(b.name, b.sort);
      else
        prem.hyps.push_back(b.hyp);
    }
    prem.concl = leaf.concl;
    out.intro.premises.push_back(std::move(prem));
  }
  out.intro.conclusion = SchemaSequent{{}, rule.prop_lhs, {}};

  for (size_t k = 0; k < out.info.leaves.size(); ++k) {
    const auto& leaf = out.info.leaves[k];
    DerivedRule elim;
    elim.label = rule.name + "-elim";
    if (out.info.leaves.size() > 1) elim.label += "-" + std::to_string(k + 1);
    elim.premises.push_back(SchemaSequent{{}, rule.prop_lhs, {}});
    SchemaSequent concl;
    concl.concl = leaf.concl;
    for (const auto& b : leaf.path) {
      if (b.is_var)
        concl.fresh.emplace_back(b.name, b.sort);  // instantiated by an arbitrary term
      else
        elim.premises.push_back(SchemaSequent{{}, b.hyp, {}});
    }
    elim.conclusion = std::move(concl);
    out.elims.push_back(std::move(elim));
  }
  return out;
}

RuleSystem RuleSystem::make(SystemKind kind, RewriteSystem theory) {
  theory.validate();
  RuleSystem out;
  out.kind = kind;
  out.congruence = (kind == SystemKind::Modulo) ? theory : theory.term_only();
  out.theory = std::move(theory);
  if (kind == SystemKind::SuperNatural) {
    for (const auto& r : out.theory.rules)
      if (r.kind == RuleKind::PropRule) out.super.emplace(r.name, derive_supernatural(r).info);
  }
  return out;
}

bool derivation_ok(const CheckResult& r) { return std::holds_alternative<Derivation>(r); }
const Rejection& rejection_of(const CheckResult& r) { return std::get<Rejection>(r); }
const Derivation& derivation_of(const CheckResult& r) { return std::get<Derivation>(r); }

}  // namespace demod
