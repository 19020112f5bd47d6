#pragma once

#include <string>
#include <utility>
#include <vector>

namespace dyadic {

/// Ordered, named boolean checks. Order is preserved in serialized output.
class Flags {
 public:
  void set(const std::string& name, bool value);
  bool get(const std::string& name) const;  // throws Contract for unknown names
  bool all() const;
  /// Name of the first failing check, or empty when all pass.
  std::string first_failure() const;
  const std::vector<std::pair<std::string, bool>>& items() const { return items_; }

 private:
  std::vector<std::pair<std::string, bool>> items_;
};

}  // namespace dyadic
