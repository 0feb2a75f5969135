#pragma once

#include <cstddef>
#include <string>

namespace demod {

// All bounds used by the kernel, in one block. Every CLI command accepts
// overrides; DEMOD_BUDGETS ("fuel=1000,depth=8,...") overrides the defaults.
struct Budgets {
  std::size_t fuel = 1000;             // rewrite / proof-reduction step budget
  std::size_t congruence_depth = 8;    // joinability search depth, also weak-head exposure
  std::size_t search_depth = 8;        // cut-free proof search depth
  std::size_t domain_bound = 8;        // truncated-nat domain size
  std::size_t hyp_cap = 3;             // max hypotheses per context in context universes
  std::size_t sn_fuel = 2000;          // node budget for reduction-graph exploration
  std::size_t candidate_fuel = 2000;   // node budget for candidate membership
  std::size_t max_carrier = 20000;     // cap on context-algebra carrier enumeration
  std::size_t model_passes = 64;       // fixpoint passes for rule-driven model completion

  static Budgets defaults();
  // Defaults overridden by the DEMOD_BUDGETS environment variable, if set.
  static Budgets from_env();
  void apply_override(const std::string& key, std::size_t value);
};

}  // namespace demod
