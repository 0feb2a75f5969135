#include "demod/cutfree.hpp"

#include <algorithm>

#include "demod/print.hpp"

namespace demod {

namespace {

std::set<std::string> names_in(const Context& ctx, const PropPtr& goal) {
  std::set<std::string> used;
  for (const auto& h : ctx) {
    used.insert(h.name);
    for (const auto& [n, s] : free_vars(h.prop)) used.insert(n);
  }
  for (const auto& [n, s] : free_vars(goal)) used.insert(n);
  return used;
}

struct Searcher {
  const RuleSystem& sys;
  const Budgets& budgets;
  // Failure memo: canonical sequent -> largest depth at which search failed.
  std::map<std::string, std::size_t> failed;

  std::string memo_key(const Context& ctx, const PropPtr& goal) {
    std::vector<std::string> keys;
    for (const auto& h : ctx) keys.push_back(canonical_key(h.prop));
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::string out;
    for (const auto& k : keys) out += k + ",";
    return out + "|" + canonical_key(goal);
  }

  bool same(const PropPtr& a, const PropPtr& b) {
    return congruent(a, b, sys.congruence, budgets.congruence_depth).verdict == Congruence::Yes;
  }

  // Small deterministic pool of instantiation terms of a sort: variables
  // free in the sequent, constants, and one level of applications.
  std::vector<TermPtr> candidate_terms(const Context& ctx, const PropPtr& goal,
                                       const SortName& sort) {
    std::map<std::string, SortName> vars;
    for (const auto& h : ctx)
      for (const auto& [n, s] : free_vars(h.prop)) vars.emplace(n, s);
    for (const auto& [n, s] : free_vars(goal)) vars.emplace(n, s);
    std::vector<TermPtr> pool;
    for (const auto& [n, s] : vars)
      if (s == sort) pool.push_back(mk_var(n, s));
    std::vector<TermPtr> leaves = pool;
    for (const auto& [fn, decl] : sys.theory.sig.functions)
      if (decl.args.empty() && decl.result == sort) pool.push_back(mk_app(fn, {}));
    for (const auto& [fn, decl] : sys.theory.sig.functions) {
      if (decl.args.empty() || decl.result != sort) continue;
      // One level of application over variables and constants.
      std::vector<std::vector<TermPtr>> per_arg;
      bool feasible = true;
      for (const auto& argsort : decl.args) {
        std::vector<TermPtr> options;
        for (const auto& [n, s] : vars)
          if (s == argsort) options.push_back(mk_var(n, s));
        for (const auto& [fn2, decl2] : sys.theory.sig.functions)
          if (decl2.args.empty() && decl2.result == argsort) options.push_back(mk_app(fn2, {}));
        if (options.empty()) {
          feasible = false;
          break;
        }
        per_arg.push_back(std::move(options));
      }
      if (!feasible) continue;
      std::vector<std::size_t> idx(per_arg.size(), 0);
      while (pool.size() < 32) {
        std::vector<TermPtr> args;
        for (std::size_t i = 0; i < per_arg.size(); ++i) args.push_back(per_arg[i][idx[i]]);
        pool.push_back(mk_app(fn, std::move(args)));
        std::size_t k = idx.size();
        bool advanced = false;
        while (k > 0) {
          --k;
          if (++idx[k] < per_arg[k].size()) {
            advanced = true;
            break;
          }
          idx[k] = 0;
        }
        if (!advanced) break;
      }
    }
    std::set<std::string> seen;
    std::vector<TermPtr> out;
    for (const auto& t : pool)
      if (seen.insert(canonical_key(t)).second) out.push_back(t);
    return out;
  }

  std::optional<ProofPtr> prove(const Context& ctx, const PropPtr& goal, std::size_t depth) {
    std::string key = memo_key(ctx, goal);
    if (auto it = failed.find(key); it != failed.end() && it->second >= depth)
      return std::nullopt;
    auto result = prove_inner(ctx, goal, depth);
    if (!result) {
      auto [it, inserted] = failed.emplace(key, depth);
      if (!inserted) it->second = std::max(it->second, depth);
    }
    return result;
  }

  std::optional<ProofPtr> prove_inner(const Context& ctx, const PropPtr& goal,
                                      std::size_t depth) {
    if (depth == 0) return std::nullopt;
    PropPtr g = whnf(goal, sys.congruence, budgets.congruence_depth).value;

    // Introduction phase on the exposed goal.
    if (std::holds_alternative<PTruth>(g->node)) return mk_unit();
    if (auto* imp = std::get_if<PImp>(&g->node)) {
      std::string h = fresh_name("h", names_in(ctx, g));
      Context ctx2 = ctx;
      ctx2.push_back(Hypothesis{h, imp->l});
      if (auto body = prove(ctx2, imp->r, depth - 1))
        return mk_lam(h, imp->l, close_hyp_at(*body, 0, h));
    } else if (auto* conj = std::get_if<PAnd>(&g->node)) {
      if (auto l = prove(ctx, conj->l, depth - 1))
        if (auto r = prove(ctx, conj->r, depth - 1)) return mk_pair(*l, *r);
    } else if (auto* all = std::get_if<PForall>(&g->node)) {
      std::string v = fresh_name(all->hint.empty() ? "x" : all->hint, names_in(ctx, g));
      if (auto body = prove(ctx, open_body(all->body, mk_var(v, all->sort)), depth - 1))
        return mk_gen(all->hint.empty() ? "x" : all->hint, all->sort,
                      close_pvar_at(*body, 0, v));
    } else if (auto* orp = std::get_if<POr>(&g->node)) {
      if (auto l = prove(ctx, orp->l, depth - 1)) return mk_inj(false, *l);
      if (auto r = prove(ctx, orp->r, depth - 1)) return mk_inj(true, *r);
    } else if (auto* ex = std::get_if<PExists>(&g->node)) {
      for (const auto& t : candidate_terms(ctx, g, ex->sort))
        if (auto body = prove(ctx, open_body(ex->body, t), depth - 1)) return mk_pack(t, *body);
    } else if (std::holds_alternative<PAtom>(g->node)) {
      // Goal-directed non-logical rules on atoms.
      if (sys.kind == SystemKind::FoldUnfold) {
        for (const auto& rule : sys.theory.rules) {
          if (rule.kind != RuleKind::PropRule) continue;
          std::map<std::string, TermPtr> subst;
          if (!match_atom(rule.prop_lhs, g, subst)) continue;
          if (auto sub = prove(ctx, substitute(rule.prop_rhs, subst), depth - 1))
            return mk_fold(rule.name, *sub);
        }
      } else if (sys.kind == SystemKind::SuperNatural) {
        for (const auto& [rname, info] : sys.super) {
          std::map<std::string, TermPtr> subst;
          if (!match_atom(info.lhs, g, subst)) continue;
          if (auto proof = try_super_intro(ctx, rname, info, subst, depth)) return proof;
        }
      }
    }

    // Elimination spines from each hypothesis.
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      if (auto proof = spine(ctx, mk_hyp(ctx[i].name), ctx[i].prop, g, depth - 1)) return proof;
    }
    return std::nullopt;
  }

  std::optional<ProofPtr> try_super_intro(const Context& ctx, const std::string& rname,
                                          const SuperRuleInfo& info,
                                          const std::map<std::string, TermPtr>& subst,
                                          std::size_t depth) {
    std::vector<SuperSub> subs;
    for (const auto& leaf : info.leaves) {
      std::map<std::string, TermPtr> inst = subst;
      Context ctx2 = ctx;
      std::vector<SuperBinder> binders;
      std::vector<std::pair<bool, std::string>> opened;
      for (const auto& b : leaf.path) {
        if (b.is_var) {
          std::string v = fresh_name(b.name, names_in(ctx2, info.lhs));
          inst[b.name] = mk_var(v, b.sort);
          binders.push_back(SuperBinder{true, b.name});
          opened.emplace_back(true, v);
        } else {
          std::string h = fresh_name("h", names_in(ctx2, info.lhs));
          ctx2.push_back(Hypothesis{h, substitute(b.hyp, inst)});
          binders.push_back(SuperBinder{false, h});
          opened.emplace_back(false, h);
        }
      }
      auto sub = prove(ctx2, substitute(leaf.concl, inst), depth - 1);
      if (!sub) return std::nullopt;
      ProofPtr body = *sub;
      int hyp_index = 0, var_index = 0;
      for (auto it = opened.rbegin(); it != opened.rend(); ++it) {
        if (it->first)
          body = close_pvar_at(body, var_index++, it->second);
        else
          body = close_hyp_at(body, hyp_index++, it->second);
      }
      subs.push_back(SuperSub{std::move(binders), body});
    }
    return mk_super_intro(rname, std::move(subs));
  }

  std::optional<ProofPtr> spine(const Context& ctx, const ProofPtr& proof, const PropPtr& prop,
                                const PropPtr& goal, std::size_t depth) {
    if (same(prop, goal)) return proof;
    PropPtr b = whnf(prop, sys.congruence, budgets.congruence_depth).value;
    if (std::holds_alternative<PFalsity>(b->node)) return mk_absurd(proof, goal);
    if (depth == 0) return std::nullopt;
    if (auto* imp = std::get_if<PImp>(&b->node)) {
      if (auto arg = prove(ctx, imp->l, depth - 1))
        return spine(ctx, mk_papp(proof, *arg), imp->r, goal, depth - 1);
      return std::nullopt;
    }
    if (auto* conj = std::get_if<PAnd>(&b->node)) {
      if (auto l = spine(ctx, mk_proj(false, proof), conj->l, goal, depth - 1)) return l;
      return spine(ctx, mk_proj(true, proof), conj->r, goal, depth - 1);
    }
    if (auto* all = std::get_if<PForall>(&b->node)) {
      for (const auto& t : candidate_terms(ctx, goal, all->sort))
        if (auto r = spine(ctx, mk_inst(proof, t), open_body(all->body, t), goal, depth - 1))
          return r;
      return std::nullopt;
    }
    if (auto* orp = std::get_if<POr>(&b->node)) {
      std::string hl = fresh_name("h", names_in(ctx, goal));
      Context ctxl = ctx;
      ctxl.push_back(Hypothesis{hl, orp->l});
      auto l = prove(ctxl, goal, depth - 1);
      if (!l) return std::nullopt;
      std::string hr = fresh_name("h", names_in(ctx, goal));
      Context ctxr = ctx;
      ctxr.push_back(Hypothesis{hr, orp->r});
      auto r = prove(ctxr, goal, depth - 1);
      if (!r) return std::nullopt;
      return mk_match(proof, hl, close_hyp_at(*l, 0, hl), hr, close_hyp_at(*r, 0, hr));
    }
    if (auto* ex = std::get_if<PExists>(&b->node)) {
      std::string v = fresh_name(ex->hint.empty() ? "x" : ex->hint, names_in(ctx, goal));
      std::string h = fresh_name("h", names_in(ctx, goal));
      Context ctx2 = ctx;
      ctx2.push_back(Hypothesis{h, open_body(ex->body, mk_var(v, ex->sort))});
      auto sub = prove(ctx2, goal, depth - 1);
      if (!sub) return std::nullopt;
      return mk_unpack(proof, v, h, close_pvar_at(close_hyp_at(*sub, 0, h), 0, v));
    }
    if (std::holds_alternative<PAtom>(b->node)) {
      if (sys.kind == SystemKind::FoldUnfold) {
        for (const auto& rule : sys.theory.rules) {
          if (rule.kind != RuleKind::PropRule) continue;
          std::map<std::string, TermPtr> subst;
          if (!match_atom(rule.prop_lhs, b, subst)) continue;
          if (auto r = spine(ctx, mk_unfold(rule.name, proof), substitute(rule.prop_rhs, subst),
                             goal, depth - 1))
            return r;
        }
      } else if (sys.kind == SystemKind::SuperNatural) {
        for (const auto& [rname, info] : sys.super) {
          std::map<std::string, TermPtr> subst;
          if (!match_atom(info.lhs, b, subst)) continue;
          for (std::size_t k = 0; k < info.leaves.size(); ++k) {
            std::vector<std::variant<TermPtr, ProofPtr>> args;
            if (auto r = try_super_elim(ctx, proof, info.leaves[k], 0, subst, args, goal,
                                        rname, static_cast<int>(k), depth))
              return r;
          }
        }
      }
    }
    return std::nullopt;
  }

  // Builds elimination arguments along a leaf path: a candidate term per
  // var binder, a searched proof per hypothesis binder; succeeds when the
  // instantiated leaf conclusion matches the goal.
  std::optional<ProofPtr> try_super_elim(const Context& ctx, const ProofPtr& main,
                                         const SuperLeaf& leaf, std::size_t j,
                                         std::map<std::string, TermPtr> inst,
                                         std::vector<std::variant<TermPtr, ProofPtr>>& args,
                                         const PropPtr& goal, const std::string& rname, int k,
                                         std::size_t depth) {
    if (j == leaf.path.size()) {
      if (!same(substitute(leaf.concl, inst), goal)) return std::nullopt;
      return mk_super_elim(rname, k, main, args);
    }
    const auto& b = leaf.path[j];
    if (b.is_var) {
      for (const auto& t : candidate_terms(ctx, goal, b.sort)) {
        inst[b.name] = t;
        args.emplace_back(t);
        if (auto r = try_super_elim(ctx, main, leaf, j + 1, inst, args, goal, rname, k, depth))
          return r;
        args.pop_back();
      }
      return std::nullopt;
    }
    if (depth == 0) return std::nullopt;
    auto sub = prove(ctx, substitute(b.hyp, inst), depth - 1);
    if (!sub) return std::nullopt;
    args.emplace_back(*sub);
    if (auto r = try_super_elim(ctx, main, leaf, j + 1, inst, args, goal, rname, k, depth - 1))
      return r;
    args.pop_back();
    return std::nullopt;
  }
};

}  // namespace

std::optional<ProofPtr> search_cutfree(const Sequent& seq, const RuleSystem& system,
                                       std::size_t depth, const Budgets& budgets) {
  Searcher s{system, budgets};
  for (std::size_t d = 0; d <= depth; ++d) {
    if (auto proof = s.prove(seq.ctx, seq.goal, d)) return proof;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Context universe and algebra.

bool ContextUniverse::subset(std::size_t a, std::size_t b) const {
  return std::includes(contexts[b].begin(), contexts[b].end(), contexts[a].begin(),
                       contexts[a].end());
}

Context ContextUniverse::materialize(std::size_t i) const {
  Context out;
  int n = 0;
  for (int fi : contexts[i]) out.push_back(Hypothesis{"c" + std::to_string(n++), formulas[fi]});
  return out;
}

namespace {

std::vector<PropPtr> normalized_closure(const Sequent& goal, const RewriteSystem& theory,
                                        const Budgets& budgets) {
  std::vector<PropPtr> seeds{goal.goal};
  for (const auto& h : goal.ctx) seeds.push_back(h.prop);
  std::vector<PropPtr> out;
  auto add = [&](const PropPtr& p) {
    for (const auto& q : out)
      if (alpha_eq(q, p)) return;
    out.push_back(p);
  };
  for (const auto& s : seeds) {
    auto n = normalize(s, theory, budgets.fuel);
    if (n.status != NormalizeStatus::NormalForm)
      throw Error("context universe formula does not normalize within fuel");
    // Subformulas of a normal form are normal.
    for (const auto& sub : subformulas(n.value)) add(sub);
  }
  std::sort(out.begin(), out.end(), [](const PropPtr& a, const PropPtr& b) {
    return canonical_key(a) < canonical_key(b);
  });
  return out;
}

}  // namespace

ContextModel build_context_model(const Sequent& goal, const RuleSystem& system,
                                 std::size_t depth, const Budgets& budgets) {
  for (const auto& [name, args] : system.theory.sig.predicates)
    if (!args.empty())
      throw Error("context models support propositional signatures only (predicate " + name +
                  " takes arguments)");

  ContextModel cm;
  cm.universe.hyp_cap = budgets.hyp_cap;
  cm.universe.formulas = normalized_closure(goal, system.theory, budgets);
  std::size_t nf = cm.universe.formulas.size();
  if (nf > 12) throw Error("context universe explosion: " + std::to_string(nf) + " formulas");

  for (std::size_t mask = 0; mask < (std::size_t{1} << nf); ++mask) {
    std::vector<int> ctx;
    for (std::size_t i = 0; i < nf; ++i)
      if (mask & (std::size_t{1} << i)) ctx.push_back(static_cast<int>(i));
    if (ctx.size() <= cm.universe.hyp_cap) cm.universe.contexts.push_back(std::move(ctx));
  }
  std::sort(cm.universe.contexts.begin(), cm.universe.contexts.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  std::size_t nc = cm.universe.contexts.size();

  // Supersets of each context, for upward closure.
  std::vector<std::vector<std::size_t>> supersets(nc);
  for (std::size_t i = 0; i < nc; ++i)
    for (std::size_t j = 0; j < nc; ++j)
      if (i != j && cm.universe.subset(i, j)) supersets[i].push_back(j);

  // Enumerate all upward-closed context sets: walk contexts from large to
  // small, a context may be included only when all its supersets are in.
  std::vector<std::size_t> order(nc);
  for (std::size_t i = 0; i < nc; ++i) order[i] = nc - 1 - i;  // decreasing size
  std::vector<std::vector<bool>> carrier;
  std::vector<bool> current(nc, false);
  std::function<void(std::size_t)> enumerate = [&](std::size_t k) {
    if (carrier.size() > budgets.max_carrier)
      throw Error("context algebra carrier exceeds the configured bound");
    if (k == nc) {
      carrier.push_back(current);
      return;
    }
    std::size_t c = order[k];
    enumerate(k + 1);  // exclude c
    bool can_include = true;
    for (std::size_t s : supersets[c])
      if (!current[s]) {
        can_include = false;
        break;
      }
    if (can_include) {
      current[c] = true;
      enumerate(k + 1);
      current[c] = false;
    }
  };
  enumerate(0);
  std::sort(carrier.begin(), carrier.end());
  cm.carrier_sets = carrier;

  auto index_of_set = [&](const std::vector<bool>& s) -> std::size_t {
    auto it = std::lower_bound(carrier.begin(), carrier.end(), s);
    if (it == carrier.end() || *it != s) throw KernelError("operation left the carrier");
    return static_cast<std::size_t>(it - carrier.begin());
  };

  auto algebra = std::make_shared<FiniteTva>();
  algebra->algebra_name = "context-sets";
  std::size_t n = carrier.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::string name = "{";
    bool first = true;
    for (std::size_t c = 0; c < nc; ++c)
      if (carrier[i][c]) {
        if (!first) name += ",";
        name += std::to_string(c);
        first = false;
      }
    algebra->elems.push_back(name + "}");
  }
  algebra->bottom_idx = index_of_set(std::vector<bool>(nc, false));
  algebra->top_idx = index_of_set(std::vector<bool>(nc, true));
  algebra->conj_t.assign(n, std::vector<std::size_t>(n));
  algebra->disj_t.assign(n, std::vector<std::size_t>(n));
  algebra->imp_t.assign(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      std::vector<bool> meet(nc), join(nc), imp(nc);
      for (std::size_t c = 0; c < nc; ++c) {
        meet[c] = carrier[a][c] && carrier[b][c];
        join[c] = carrier[a][c] || carrier[b][c];
        bool all = true;
        for (std::size_t d2 = 0; d2 < nc; ++d2) {
          bool reachable = (d2 == c) || cm.universe.subset(c, d2);
          if (reachable && carrier[a][d2] && !carrier[b][d2]) {
            all = false;
            break;
          }
        }
        imp[c] = all;
      }
      algebra->conj_t[a][b] = index_of_set(meet);
      algebra->disj_t[a][b] = index_of_set(join);
      algebra->imp_t[a][b] = index_of_set(imp);
    }
  }
  // Positive = the sets containing the empty context (context 0 after the
  // size-first sort).
  for (std::size_t i = 0; i < n; ++i)
    if (carrier[i][0]) algebra->positives.insert(i);
  cm.algebra = algebra;

  // Atom denotations by bounded search, explicitly closed upward (search
  // success persists under weakening).
  cm.model.algebra = algebra;
  Searcher shared{system, budgets};
  for (const auto& [pred, args] : system.theory.sig.predicates) {
    PropPtr atom = mk_atom(pred, {});
    std::vector<bool> set(nc, false);
    for (std::size_t i = 0; i < nc; ++i) {
      bool found = false;
      for (std::size_t d = 0; d <= depth && !found; ++d)
        found = shared.prove(cm.universe.materialize(i).empty() ? Context{}
                                                                : cm.universe.materialize(i),
                             atom, d)
                    .has_value();
      set[i] = found;
    }
    for (std::size_t i = 0; i < nc; ++i)
      if (set[i])
        for (std::size_t j = 0; j < nc; ++j)
          if (cm.universe.subset(i, j)) set[j] = true;
    PredInterp<std::size_t> interp;
    interp.table[{}] = index_of_set(set);
    cm.model.preds.emplace(pred, std::move(interp));
  }
  return cm;
}

std::vector<SharpenedFailure> membership_failures(const ContextModel& cm,
                                                  const RuleSystem& system, std::size_t depth,
                                                  const Budgets& budgets, std::size_t* checks) {
  std::vector<SharpenedFailure> out;
  std::size_t count = 0;
  for (std::size_t fi = 0; fi < cm.universe.formulas.size(); ++fi) {
    const PropPtr& f = cm.universe.formulas[fi];
    auto v = denote_prop(f, {}, cm.model);
    if (!v) throw KernelError("context-model denotation overflow");
    const std::vector<bool>& set = cm.carrier_sets[*v];
    for (std::size_t ci = 0; ci < cm.universe.contexts.size(); ++ci) {
      ++count;
      if (!set[ci]) continue;
      Sequent seq{cm.universe.materialize(ci), f};
      if (!search_cutfree(seq, system, depth, budgets))
        out.push_back(SharpenedFailure{"membership", print_context(seq.ctx), print_prop(f)});
    }
  }
  if (checks) *checks = count;
  return out;
}

SharpenedReport sharpened_completeness_check(const Sequent& goal, const RuleSystem& system,
                                             std::size_t depth,
                                             const std::vector<Sequent>& corpus,
                                             const Budgets& budgets) {
  ContextModel cm = build_context_model(goal, system, depth, budgets);
  SharpenedReport rep;
  rep.contexts = cm.universe.contexts.size();
  rep.formulas = cm.universe.formulas.size();
  rep.carrier = cm.carrier_sets.size();
  rep.failures = membership_failures(cm, system, depth, budgets, &rep.membership_checks);
  rep.laws = check_laws(*cm.algebra);

  auto formula_index = [&](const PropPtr& p) -> std::optional<std::size_t> {
    auto n = normalize(p, system.theory, budgets.fuel);
    for (std::size_t i = 0; i < cm.universe.formulas.size(); ++i)
      if (alpha_eq(cm.universe.formulas[i], n.value)) return i;
    return std::nullopt;
  };
  // Soundness instances: provable sequents inside the universe must be
  // valid in this model.
  for (const auto& seq : corpus) {
    std::vector<int> ctx_indices;
    bool inside = true;
    for (const auto& h : seq.ctx) {
      auto fi = formula_index(h.prop);
      if (!fi) {
        inside = false;
        break;
      }
      ctx_indices.push_back(static_cast<int>(*fi));
    }
    auto gi = formula_index(seq.goal);
    if (!inside || !gi) continue;
    std::sort(ctx_indices.begin(), ctx_indices.end());
    ctx_indices.erase(std::unique(ctx_indices.begin(), ctx_indices.end()), ctx_indices.end());
    std::optional<std::size_t> ci;
    for (std::size_t i = 0; i < cm.universe.contexts.size(); ++i)
      if (cm.universe.contexts[i] == ctx_indices) ci = i;
    if (!ci) continue;
    auto v = denote_prop(cm.universe.formulas[*gi], {}, cm.model);
    if (!v || !cm.carrier_sets[*v][*ci])
      rep.failures.push_back(SharpenedFailure{"validity", print_context(seq.ctx),
                                              print_prop(seq.goal)});
  }

  auto gv = denote_prop(normalize(goal.goal, system.theory, budgets.fuel).value, {}, cm.model);
  rep.goal_valid = gv && cm.carrier_sets[*gv][0];
  return rep;
}

AgreementReport three_formalism_agreement(const RewriteSystem& theory,
                                          const std::vector<PropPtr>& formulas,
                                          std::size_t max_hyps, std::size_t depth,
                                          const Budgets& budgets) {
  RuleSystem mod = RuleSystem::make(SystemKind::Modulo, theory);
  RuleSystem fu = RuleSystem::make(SystemKind::FoldUnfold, theory);
  RuleSystem sn = RuleSystem::make(SystemKind::SuperNatural, theory);

  AgreementReport rep;
  std::size_t nf = formulas.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << nf); ++mask) {
    std::vector<int> hyps;
    for (std::size_t i = 0; i < nf; ++i)
      if (mask & (std::size_t{1} << i)) hyps.push_back(static_cast<int>(i));
    if (hyps.size() > max_hyps) continue;
    for (const auto& concl : formulas) {
      Sequent seq;
      int n = 0;
      for (int fi : hyps) seq.ctx.push_back(Hypothesis{"a" + std::to_string(n++), formulas[fi]});
      seq.goal = concl;
      AgreementRow row;
      row.sequent_text = print_sequent(seq);
      row.modulo = search_cutfree(seq, mod, depth, budgets).has_value();
      row.foldunfold = search_cutfree(seq, fu, depth, budgets).has_value();
      row.supernatural = search_cutfree(seq, sn, depth, budgets).has_value();
      row.agree = (row.modulo == row.foldunfold) && (row.foldunfold == row.supernatural);
      if (!row.agree) ++rep.disagreements;
      rep.rows.push_back(std::move(row));
    }
  }
  return rep;
}

}  // namespace demod
