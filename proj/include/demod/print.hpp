#pragma once

#include <string>

#include "demod/proofs.hpp"
#include "demod/syntax.hpp"

namespace demod {

// Canonical concrete syntax. parse(print(v)) is structurally equal to v
// (hints may be renamed to avoid capture by display names).
std::string print_term(const TermPtr& t);
std::string print_prop(const PropPtr& p);
std::string print_proof(const ProofPtr& p);
std::string print_context(const Context& ctx);
std::string print_sequent(const Sequent& s);
std::string print_rule(const RewriteRule& r);
std::string print_theory(const RewriteSystem& R);

// Inference-rule block: premises, a dashed line with the label, conclusion.
std::string print_derived_rule(const DerivedRule& r);

// Compact structural serializations, stable under alpha-renaming. Used as
// memoization and visited-set keys.
std::string canonical_key(const TermPtr& t);
std::string canonical_key(const PropPtr& p);
std::string canonical_key(const ProofPtr& p);
std::string canonical_key(const Sequent& s);

}  // namespace demod
