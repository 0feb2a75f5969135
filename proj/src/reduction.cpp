#include "demod/reduction.hpp"

#include <functional>

#include "demod/print.hpp"

namespace demod {

namespace {

bool same_rule_fold(const PrUnfold& u) {
  auto* f = std::get_if<PrFold>(&u.p->node);
  return f && f->rule == u.rule;
}

bool super_redex(const PrSuperElim& e) {
  auto* i = std::get_if<PrSuperIntro>(&e.main->node);
  if (!i || i->rule != e.rule) return false;
  if (e.leaf < 0 || static_cast<size_t>(e.leaf) >= i->subs.size()) return false;
  const SuperSub& sub = i->subs[static_cast<size_t>(e.leaf)];
  if (sub.binders.size() != e.args.size()) return false;
  for (size_t j = 0; j < sub.binders.size(); ++j) {
    bool is_term = std::holds_alternative<TermPtr>(e.args[j]);
    if (sub.binders[j].is_var != is_term) return false;
  }
  return true;
}

ProofPtr contract_super(const PrSuperElim& e) {
  const auto& i = std::get<PrSuperIntro>(e.main->node);
  const SuperSub& sub = i.subs[static_cast<size_t>(e.leaf)];
  ProofPtr body = sub.body;
  int hyps_left = 0, vars_left = 0;
  for (const auto& b : sub.binders) (b.is_var ? vars_left : hyps_left)++;
  for (size_t j = 0; j < sub.binders.size(); ++j) {
    if (sub.binders[j].is_var)
      body = open_pvar_at(body, --vars_left, std::get<TermPtr>(e.args[j]));
    else
      body = open_hyp_at(body, --hyps_left, std::get<ProofPtr>(e.args[j]));
  }
  return body;
}

// Rebuilds an elimination frame around a new principal premise; used by
// the commuting conversions that push eliminations past case/unpack.
using Frame = std::function<ProofPtr(const ProofPtr&)>;

std::optional<std::pair<std::string, ProofPtr>> commute(const ProofPtr& principal,
                                                        const Frame& rebuild) {
  if (auto* m = std::get_if<PrMatch>(&principal->node)) {
    return std::make_pair(std::string("comm-case"),
                          mk_match(m->scrut, m->lhint, rebuild(m->lbody), m->rhint,
                                   rebuild(m->rbody)));
  }
  if (auto* u = std::get_if<PrUnpack>(&principal->node)) {
    return std::make_pair(std::string("comm-unpack"),
                          mk_unpack(u->scrut, u->vhint, u->hhint, rebuild(u->body)));
  }
  return std::nullopt;
}

// A contraction applying at the root of p, if any. At the point of use all
// enclosing binders have been opened, so subterms substituted here are
// locally closed.
std::optional<std::pair<std::string, ProofPtr>> root_redex(const ProofPtr& p) {
  using R = std::optional<std::pair<std::string, ProofPtr>>;
  return std::visit(
      overloaded{
          [&](const PrApp& x) -> R {
            if (auto* lam = std::get_if<PrLam>(&x.fn->node))
              return std::make_pair(std::string("beta"), open_hyp_at(lam->body, 0, x.arg));
            return commute(x.fn, [&](const ProofPtr& q) { return mk_papp(q, x.arg); });
          },
          [&](const PrProj& x) -> R {
            if (auto* pair = std::get_if<PrPair>(&x.p->node))
              return std::make_pair(std::string(x.second ? "proj-2" : "proj-1"),
                                    x.second ? pair->r : pair->l);
            return commute(x.p, [&](const ProofPtr& q) { return mk_proj(x.second, q); });
          },
          [&](const PrMatch& x) -> R {
            if (auto* inj = std::get_if<PrInj>(&x.scrut->node))
              return std::make_pair(std::string(inj->right ? "case-inr" : "case-inl"),
                                    open_hyp_at(inj->right ? x.rbody : x.lbody, 0, inj->p));
            return commute(x.scrut, [&](const ProofPtr& q) {
              return mk_match(q, x.lhint, x.lbody, x.rhint, x.rbody);
            });
          },
          [&](const PrInst& x) -> R {
            if (auto* gen = std::get_if<PrGen>(&x.p->node))
              return std::make_pair(std::string("inst"), open_pvar_at(gen->body, 0, x.witness));
            return commute(x.p, [&](const ProofPtr& q) { return mk_inst(q, x.witness); });
          },
          [&](const PrUnpack& x) -> R {
            if (auto* pack = std::get_if<PrPack>(&x.scrut->node))
              return std::make_pair(
                  std::string("unpack"),
                  open_hyp_at(open_pvar_at(x.body, 0, pack->witness), 0, pack->p));
            return commute(x.scrut, [&](const ProofPtr& q) {
              return mk_unpack(q, x.vhint, x.hhint, x.body);
            });
          },
          [&](const PrAbsurd& x) -> R {
            return commute(x.p, [&](const ProofPtr& q) { return mk_absurd(q, x.goal); });
          },
          [&](const PrUnfold& x) -> R {
            if (same_rule_fold(x))
              return std::make_pair(std::string("unfold-fold"),
                                    std::get<PrFold>(x.p->node).p);
            return commute(x.p, [&](const ProofPtr& q) { return mk_unfold(x.rule, q); });
          },
          [&](const PrSuperElim& x) -> R {
            if (super_redex(x))
              return std::make_pair(std::string("super"), contract_super(x));
            return commute(x.main, [&](const ProofPtr& q) {
              return mk_super_elim(x.rule, x.leaf, q, x.args);
            });
          },
          [&](const auto&) -> R { return std::nullopt; },
      },
      p->node);
}

struct LocalRed {
  std::vector<int> pos;
  std::string rule;
  ProofPtr replacement;  // the rewritten subtree
};

// Collects contractions within p, leftmost-outermost first. When
// `first_only` is set, stops after one. Binders are opened with reserved
// names while descending and closed back around the replacement.
void collect(const ProofPtr& p, bool first_only, int& fresh, std::vector<LocalRed>& out) {
  if (auto r = root_redex(p)) {
    out.push_back(LocalRed{{}, r->first, r->second});
    if (first_only) return;
  }

  auto child = [&](int index, const ProofPtr& sub, const Frame& rebuild) {
    if (first_only && !out.empty()) return;
    std::vector<LocalRed> inner;
    collect(sub, first_only, fresh, inner);
    for (auto& red : inner) {
      red.pos.insert(red.pos.begin(), index);
      red.replacement = rebuild(red.replacement);
      out.push_back(std::move(red));
      if (first_only) return;
    }
  };

  std::visit(
      overloaded{
          [&](const PrLam& x) {
            std::string h = "#h" + std::to_string(fresh++);
            child(0, open_hyp_at(x.body, 0, mk_hyp(h)), [&](const ProofPtr& q) {
              return mk_lam(x.hint, x.ann, close_hyp_at(q, 0, h));
            });
          },
          [&](const PrApp& x) {
            child(0, x.fn, [&](const ProofPtr& q) { return mk_papp(q, x.arg); });
            child(1, x.arg, [&](const ProofPtr& q) { return mk_papp(x.fn, q); });
          },
          [&](const PrPair& x) {
            child(0, x.l, [&](const ProofPtr& q) { return mk_pair(q, x.r); });
            child(1, x.r, [&](const ProofPtr& q) { return mk_pair(x.l, q); });
          },
          [&](const PrProj& x) {
            child(0, x.p, [&](const ProofPtr& q) { return mk_proj(x.second, q); });
          },
          [&](const PrInj& x) {
            child(0, x.p, [&](const ProofPtr& q) { return mk_inj(x.right, q); });
          },
          [&](const PrMatch& x) {
            child(0, x.scrut, [&](const ProofPtr& q) {
              return mk_match(q, x.lhint, x.lbody, x.rhint, x.rbody);
            });
            std::string hl = "#h" + std::to_string(fresh++);
            child(1, open_hyp_at(x.lbody, 0, mk_hyp(hl)), [&](const ProofPtr& q) {
              return mk_match(x.scrut, x.lhint, close_hyp_at(q, 0, hl), x.rhint, x.rbody);
            });
            std::string hr = "#h" + std::to_string(fresh++);
            child(2, open_hyp_at(x.rbody, 0, mk_hyp(hr)), [&](const ProofPtr& q) {
              return mk_match(x.scrut, x.lhint, x.lbody, x.rhint, close_hyp_at(q, 0, hr));
            });
          },
          [&](const PrGen& x) {
            std::string v = "#v" + std::to_string(fresh++);
            child(0, open_pvar_at(x.body, 0, mk_var(v, x.sort)), [&](const ProofPtr& q) {
              return mk_gen(x.hint, x.sort, close_pvar_at(q, 0, v));
            });
          },
          [&](const PrInst& x) {
            child(0, x.p, [&](const ProofPtr& q) { return mk_inst(q, x.witness); });
          },
          [&](const PrPack& x) {
            child(0, x.p, [&](const ProofPtr& q) { return mk_pack(x.witness, q); });
          },
          [&](const PrUnpack& x) {
            child(0, x.scrut, [&](const ProofPtr& q) {
              return mk_unpack(q, x.vhint, x.hhint, x.body);
            });
            std::string v = "#v" + std::to_string(fresh++);
            std::string h = "#h" + std::to_string(fresh++);
            ProofPtr body = open_hyp_at(open_pvar_at(x.body, 0, mk_var(v, "")), 0, mk_hyp(h));
            child(1, body, [&](const ProofPtr& q) {
              return mk_unpack(x.scrut, x.vhint, x.hhint,
                               close_pvar_at(close_hyp_at(q, 0, h), 0, v));
            });
          },
          [&](const PrAbsurd& x) {
            child(0, x.p, [&](const ProofPtr& q) { return mk_absurd(q, x.goal); });
          },
          [&](const PrFold& x) {
            child(0, x.p, [&](const ProofPtr& q) { return mk_fold(x.rule, q); });
          },
          [&](const PrUnfold& x) {
            child(0, x.p, [&](const ProofPtr& q) { return mk_unfold(x.rule, q); });
          },
          [&](const PrSuperIntro& x) {
            for (size_t i = 0; i < x.subs.size(); ++i) {
              const SuperSub& sub = x.subs[i];
              ProofPtr body = sub.body;
              std::vector<std::pair<bool, std::string>> opened;
              int hyps_left = 0, vars_left = 0;
              for (const auto& b : sub.binders) (b.is_var ? vars_left : hyps_left)++;
              for (const auto& b : sub.binders) {
                if (b.is_var) {
                  std::string v = "#v" + std::to_string(fresh++);
                  body = open_pvar_at(body, --vars_left, mk_var(v, ""));
                  opened.emplace_back(true, v);
                } else {
                  std::string h = "#h" + std::to_string(fresh++);
                  body = open_hyp_at(body, --hyps_left, mk_hyp(h));
                  opened.emplace_back(false, h);
                }
              }
              child(static_cast<int>(i), body, [&, opened](const ProofPtr& q) {
                ProofPtr closed = q;
                int hi = 0, vi = 0;
                for (auto it = opened.rbegin(); it != opened.rend(); ++it) {
                  if (it->first)
                    closed = close_pvar_at(closed, vi++, it->second);
                  else
                    closed = close_hyp_at(closed, hi++, it->second);
                }
                std::vector<SuperSub> subs = x.subs;
                subs[i] = SuperSub{x.subs[i].binders, closed};
                return mk_super_intro(x.rule, std::move(subs));
              });
            }
          },
          [&](const PrSuperElim& x) {
            child(0, x.main, [&](const ProofPtr& q) {
              return mk_super_elim(x.rule, x.leaf, q, x.args);
            });
            for (size_t j = 0; j < x.args.size(); ++j) {
              if (auto* q = std::get_if<ProofPtr>(&x.args[j])) {
                child(static_cast<int>(j) + 1, *q, [&, j](const ProofPtr& repl) {
                  auto args = x.args;
                  args[j] = repl;
                  return mk_super_elim(x.rule, x.leaf, x.main, std::move(args));
                });
              }
            }
          },
          [&](const auto&) {},
      },
      p->node);
}

}  // namespace

bool is_cut(const ProofPtr& p) {
  return std::visit(
      overloaded{
          [&](const PrApp& x) { return std::holds_alternative<PrLam>(x.fn->node); },
          [&](const PrProj& x) { return std::holds_alternative<PrPair>(x.p->node); },
          [&](const PrMatch& x) { return std::holds_alternative<PrInj>(x.scrut->node); },
          [&](const PrInst& x) { return std::holds_alternative<PrGen>(x.p->node); },
          [&](const PrUnpack& x) { return std::holds_alternative<PrPack>(x.scrut->node); },
          [&](const PrUnfold& x) { return same_rule_fold(x); },
          [&](const PrSuperElim& x) { return super_redex(x); },
          [&](const auto&) { return false; },
      },
      p->node);
}

std::optional<TraceStep> reduce_step(const ProofPtr& p) {
  std::vector<LocalRed> out;
  int fresh = 0;
  collect(p, true, fresh, out);
  if (out.empty()) return std::nullopt;
  return TraceStep{out[0].pos, out[0].rule, out[0].replacement};
}

std::vector<TraceStep> all_reduction_steps(const ProofPtr& p) {
  std::vector<LocalRed> out;
  int fresh = 0;
  collect(p, false, fresh, out);
  std::vector<TraceStep> steps;
  steps.reserve(out.size());
  for (auto& red : out) steps.push_back(TraceStep{red.pos, red.rule, red.replacement});
  return steps;
}

ReductionTrace normalize_proof(const ProofPtr& p, std::size_t fuel) {
  ReductionTrace trace;
  trace.initial = p;
  trace.final = p;
  std::map<std::string, std::size_t> visited;
  visited.emplace(canonical_key(p), 0);
  while (true) {
    auto step = reduce_step(trace.final);
    if (!step) {
      trace.outcome = TraceOutcome::Normal;
      return trace;
    }
    if (trace.steps.size() >= fuel) {
      trace.outcome = TraceOutcome::FuelExhausted;
      return trace;
    }
    trace.final = step->result;
    trace.steps.push_back(*step);
    auto [it, inserted] = visited.emplace(canonical_key(trace.final), trace.steps.size());
    if (!inserted) {
      trace.outcome = TraceOutcome::Cycle;
      trace.cycle_index = it->second;
      return trace;
    }
  }
}

namespace {

struct SnSearch {
  std::size_t budget;
  std::size_t visited = 0;
  std::map<std::string, int> state;  // 1 = on stack, 2 = proven SN
  std::vector<std::pair<std::string, ProofPtr>> stack;
  std::vector<ProofPtr> loop;

  // 0 = SN, 1 = NotSN, 2 = Unknown
  int dfs(const ProofPtr& p) {
    std::string key = canonical_key(p);
    auto it = state.find(key);
    if (it != state.end()) {
      if (it->second == 2) return 0;
      // Back edge: reduction re-enters a proof on the current path.
      for (size_t i = 0; i < stack.size(); ++i) {
        if (stack[i].first == key) {
          loop.clear();
          for (size_t j = i; j < stack.size(); ++j) loop.push_back(stack[j].second);
          loop.push_back(p);
          break;
        }
      }
      return 1;
    }
    if (visited >= budget) return 2;
    ++visited;
    state[key] = 1;
    stack.emplace_back(key, p);
    int verdict = 0;
    for (const auto& step : all_reduction_steps(p)) {
      int s = dfs(step.result);
      if (s == 1) {
        verdict = 1;
        break;
      }
      if (s == 2) verdict = 2;
    }
    stack.pop_back();
    if (verdict == 0)
      state[key] = 2;
    else
      state.erase(key);
    return verdict;
  }
};

}  // namespace

SnResult strongly_normalizing(const ProofPtr& p, std::size_t fuel) {
  SnSearch search{fuel};
  int verdict = search.dfs(p);
  SnResult out;
  out.visited = search.visited;
  if (verdict == 0)
    out.status = SnStatus::SN;
  else if (verdict == 1) {
    out.status = SnStatus::NotSN;
    out.loop_prefix = std::move(search.loop);
  } else {
    out.status = SnStatus::Unknown;
  }
  return out;
}

Extraction extract_constructive_content(const ProofPtr& p, const PropPtr& prop,
                                        const RewriteSystem& theory, const Budgets& budgets) {
  if (!closed_proof(p)) throw Error("constructive content exists only for closed proofs");
  if (reduce_step(p)) throw Error("constructive content exists only for normal proofs");
  PropPtr head = whnf(prop, theory, budgets.congruence_depth).value;
  Extraction out;
  if (std::holds_alternative<POr>(head->node)) {
    auto* inj = std::get_if<PrInj>(&p->node);
    if (!inj)
      throw KernelError(
          "closed normal proof of a disjunction does not end in an injection");
    out.kind = Extraction::Disjunct;
    out.right = inj->right;
    out.subproof = inj->p;
    return out;
  }
  if (std::holds_alternative<PExists>(head->node)) {
    auto* pack = std::get_if<PrPack>(&p->node);
    if (!pack)
      throw KernelError(
          "closed normal proof of an existential does not end in a pack");
    out.kind = Extraction::Witness;
    out.witness = pack->witness;
    out.subproof = pack->p;
    return out;
  }
  out.kind = Extraction::NotApplicable;
  return out;
}

}  // namespace demod
