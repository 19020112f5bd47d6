#include "dyadic/flags.hpp"

#include <algorithm>

#include "dyadic/error.hpp"

namespace dyadic {

void Flags::set(const std::string& name, bool value) {
  for (auto& [k, v] : items_) {
    if (k == name) {
      v = value;
      return;
    }
  }
  items_.emplace_back(name, value);
}

bool Flags::get(const std::string& name) const {
  for (const auto& [k, v] : items_)
    if (k == name) return v;
  fail(ErrorKind::Contract, "unknown flag '" + name + "'");
}

bool Flags::all() const {
  return std::all_of(items_.begin(), items_.end(), [](const auto& kv) { return kv.second; });
}

std::string Flags::first_failure() const {
  for (const auto& [k, v] : items_)
    if (!v) return k;
  return {};
}

}  // namespace dyadic
