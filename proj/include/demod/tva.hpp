#pragma once

#include "demod/budgets.hpp"
#include "demod/parse.hpp"
#include "demod/reduction.hpp"

namespace demod {

// ---------------------------------------------------------------------------
// Finite truth values algebras: a carrier with the seven operations and a
// set of positive elements. Carrier elements are indices into `elems`;
// element declaration order is the canonical enumeration order.

class TvaView {
 public:
  virtual ~TvaView() = default;
  virtual std::string name() const = 0;
  virtual std::size_t size() const = 0;
  virtual std::string elem_name(std::size_t i) const = 0;
  virtual std::size_t top() const = 0;
  virtual std::size_t bottom() const = 0;
  virtual std::size_t imp(std::size_t a, std::size_t b) const = 0;
  virtual std::size_t conj(std::size_t a, std::size_t b) const = 0;
  virtual std::size_t disj(std::size_t a, std::size_t b) const = 0;
  // Family operations over finite families; the empty family gives top /
  // bottom respectively.
  virtual std::size_t forall(const std::vector<std::size_t>& family) const;
  virtual std::size_t exists(const std::vector<std::size_t>& family) const;
  virtual bool positive(std::size_t a) const = 0;
};

using TvaPtr = std::shared_ptr<const TvaView>;

class FiniteTva final : public TvaView {
 public:
  std::string algebra_name;
  std::vector<std::string> elems;
  std::size_t top_idx = 0, bottom_idx = 0;
  std::vector<std::vector<std::size_t>> imp_t, conj_t, disj_t;
  std::set<std::size_t> positives;

  std::string name() const override { return algebra_name; }
  std::size_t size() const override { return elems.size(); }
  std::string elem_name(std::size_t i) const override { return elems[i]; }
  std::size_t top() const override { return top_idx; }
  std::size_t bottom() const override { return bottom_idx; }
  std::size_t imp(std::size_t a, std::size_t b) const override { return imp_t[a][b]; }
  std::size_t conj(std::size_t a, std::size_t b) const override { return conj_t[a][b]; }
  std::size_t disj(std::size_t a, std::size_t b) const override { return disj_t[a][b]; }
  bool positive(std::size_t a) const override { return positives.count(a) != 0; }

  std::size_t index_of(const std::string& elem) const;

  // Heyting operations computed by brute force from a bounded lattice
  // order: glb, lub, and a -> b = greatest c with a /\ c <= b. Fails if
  // any of them does not exist (the spec is then not a Heyting algebra).
  static FiniteTva from_lattice(const LatticeSpec& spec);
};

// Bundled algebras: bool2, chain3, diamond4 (Heyting, declared top-first)
// and doubled_top (two mutually ordered distinct positive tops; a truth
// values algebra that is not a Heyting algebra).
TvaPtr make_algebra(const std::string& name);
TvaPtr make_algebra(const LatticeSpec& spec);
std::vector<TvaPtr> default_battery();

// a <= b iff a => b is positive.
bool pre_order(const TvaView& B, std::size_t a, std::size_t b);

struct LawCheck {
  std::string law;
  bool pass = false;
  std::string counterexample;
};

struct LawReport {
  std::string algebra;
  std::vector<LawCheck> laws;
  bool antisymmetry = false;
  bool tva_ok = false;      // every law except antisymmetry
  bool heyting_ok = false;  // tva_ok plus antisymmetry
};

// Pre-order laws, glb/lub/relative-complement laws, family-operation laws
// and positivity closure under modus ponens; antisymmetry reported apart.
// Families are exhaustive for carriers of up to 5 elements, and all
// families of size <= 2 plus the full carrier otherwise.
LawReport check_laws(const TvaView& B);

// ---------------------------------------------------------------------------
// The reducibility candidates algebra. Candidates are expression trees
// evaluated intensionally as membership predicates on proof terms; the
// generator Top is the set of strongly normalizing proofs.

struct Candidate;
using CandidatePtr = std::shared_ptr<const Candidate>;

struct Candidate {
  enum Kind { Top, Imp, And, Or, Forall, Exists } kind = Top;
  CandidatePtr a, b;                  // Imp / And / Or
  std::vector<CandidatePtr> family;   // Forall / Exists
};

CandidatePtr c_top();
CandidatePtr c_imp(CandidatePtr a, CandidatePtr b);
CandidatePtr c_and(CandidatePtr a, CandidatePtr b);
CandidatePtr c_or(CandidatePtr a, CandidatePtr b);
CandidatePtr c_forall(std::vector<CandidatePtr> family);
CandidatePtr c_exists(std::vector<CandidatePtr> family);
// The candidates algebra has no smaller distinguished set at desk scale;
// falsity denotes the strongly normalizing proofs as well.
CandidatePtr c_bottom();

bool candidate_eq(const CandidatePtr& a, const CandidatePtr& b);
std::string print_candidate(const CandidatePtr& c);

enum class Membership { Member, NonMember, Unknown };

struct MemberEvidence {
  Membership verdict = Membership::Unknown;
  std::string detail;
  ProofPtr counterexample;  // NonMember of an implication: the failing argument
};

// Sample proofs per sub-candidate (keyed by the printed candidate), used
// as the argument sets when testing implication membership. `defaults`
// are added to every candidate's sample set.
struct SampleMap {
  std::map<std::string, std::vector<ProofPtr>> samples;
  std::vector<ProofPtr> defaults;

  std::vector<ProofPtr> for_candidate(const CandidatePtr& c) const;
  static SampleMap standard();
};

// Fuel-and-sample bounded membership oracle. Member/NonMember only when
// decided within fuel on the given samples; never claimed complete.
MemberEvidence candidate_member(const CandidatePtr& c, const ProofPtr& p, std::size_t fuel,
                                const SampleMap& samples);

}  // namespace demod
