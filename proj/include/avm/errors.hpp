#pragma once
// Error types shared across the library.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace avm {

// Text (or instruction sequence) does not match the program/term grammar.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " (at " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

enum class ValidityReason { UninitializedRead, NonexistentRead };

// Pinpoints the instruction that reads a register it must not read.
struct ValidityIssue {
  std::size_t instr_index = 0;
  ValidityReason reason = ValidityReason::UninitializedRead;
  std::size_t reg = 0;

  std::string describe() const {
    std::string what = reason == ValidityReason::UninitializedRead
                           ? "uninitialized"
                           : "nonexistent";
    return "instruction " + std::to_string(instr_index) + " reads " + what +
           " register " + std::to_string(reg);
  }

  friend bool operator==(const ValidityIssue&, const ValidityIssue&) = default;
};

class ValidityError : public std::runtime_error {
 public:
  explicit ValidityError(ValidityIssue issue)
      : std::runtime_error(issue.describe()), issue_(issue) {}

  const ValidityIssue& issue() const noexcept { return issue_; }

 private:
  ValidityIssue issue_;
};

// An address that was never issued by the table it is used with.
class DanglingAddress : public std::runtime_error {
 public:
  explicit DanglingAddress(std::uint64_t id)
      : std::runtime_error("dangling address " + std::to_string(id)), id_(id) {}

  std::uint64_t id() const noexcept { return id_; }

 private:
  std::uint64_t id_;
};

class UnboundVariable : public std::runtime_error {
 public:
  explicit UnboundVariable(const std::string& name)
      : std::runtime_error("unbound variable " + name), name_(name) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

}  // namespace avm
