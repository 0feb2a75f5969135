#pragma once

#include <memory>
#include <set>
#include <stdexcept>
#include <string>

namespace demod {

// Visitor helper for std::visit over variant nodes.
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Recoverable user-facing failure (bad input, validation, parse).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Internal invariant breakage; reaching one of these is a kernel bug.
struct KernelError : std::logic_error {
  using std::logic_error::logic_error;
};

// Smallest name of the form base, base1, base2, ... not in `used`.
inline std::string fresh_name(const std::string& base, const std::set<std::string>& used) {
  if (!used.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + std::to_string(i);
    if (!used.count(cand)) return cand;
  }
}

}  // namespace demod
