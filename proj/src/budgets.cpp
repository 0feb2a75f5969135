#include "demod/budgets.hpp"

#include <cstdlib>
#include <sstream>

#include "demod/util.hpp"

namespace demod {

Budgets Budgets::defaults() { return Budgets{}; }

void Budgets::apply_override(const std::string& key, std::size_t value) {
  if (key == "fuel")
    fuel = value;
  else if (key == "depth" || key == "congruence_depth")
    congruence_depth = value;
  else if (key == "search" || key == "search_depth")
    search_depth = value;
  else if (key == "domain" || key == "domain_bound")
    domain_bound = value;
  else if (key == "hyps" || key == "hyp_cap")
    hyp_cap = value;
  else if (key == "sn_fuel")
    sn_fuel = value;
  else if (key == "candidate_fuel")
    candidate_fuel = value;
  else if (key == "max_carrier")
    max_carrier = value;
  else if (key == "model_passes")
    model_passes = value;
  else
    throw Error("unknown budget option: " + key);
}

Budgets Budgets::from_env() {
  Budgets b;
  const char* env = std::getenv("DEMOD_BUDGETS");
  if (!env) return b;
  std::istringstream in(env);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error("malformed DEMOD_BUDGETS entry: " + item);
    std::string key = item.substr(0, eq);
    b.apply_override(key, std::stoul(item.substr(eq + 1)));
  }
  return b;
}

}  // namespace demod
