#pragma once
// Program text parsing and the register-validity judgment.

#include <cstddef>
#include <optional>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "avm/core.hpp"
#include "avm/errors.hpp"

namespace avm {

// The set of register indices known to be initialized; every member is < r.
class InitializedSet {
 public:
  InitializedSet() = default;

  static InitializedSet from_registers(const std::vector<RegisterCell>& regs);
  static InitializedSet of(std::initializer_list<std::size_t> indices);

  bool contains(std::size_t i) const { return indices_.contains(i); }
  void add(std::size_t i) { indices_.insert(i); }

 private:
  std::unordered_set<std::size_t> indices_;
};

// Parses "Load 0; App 0 1 2; Call 2" style text. Whitespace-insensitive;
// keywords are case-sensitive; indices are decimal naturals. Throws
// SyntaxError (position = character offset) on grammar violations.
Program parse_program(std::string_view text);

// Single left-to-right pass over the judgment's rules. Returns the first
// violation, or nullopt when `init |=^r p` holds.
std::optional<ValidityIssue> check_valid(const Program& p, std::size_t r,
                                         InitializedSet init);

// Same check for a concrete register bank.
std::optional<ValidityIssue> check_valid(const Program& p,
                                         const std::vector<RegisterCell>& regs);

// Throwing form of check_valid.
void validate(const Program& p, std::size_t r, InitializedSet init);

}  // namespace avm
