#pragma once
// Core value types: addresses, registers, tapes, instructions, programs and
// the machine tuple itself. Everything here is an immutable value; semantic
// steps build new machines instead of mutating existing ones.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "avm/errors.hpp"

namespace avm {

// Names exactly one interned machine. Opaque: nothing may be assumed about an
// id beyond equality and order.
class Address {
 public:
  using Id = std::uint64_t;

  explicit constexpr Address(Id id) noexcept : id_(id) {}
  constexpr Id id() const noexcept { return id_; }

  friend constexpr auto operator<=>(Address, Address) noexcept = default;

 private:
  Id id_;
};

// A register cell holds either null (uninitialized) or an address.
using RegisterCell = std::optional<Address>;

// Finite ordered list of addresses; order is significant.
using Tape = std::vector<Address>;

struct Load {
  std::size_t reg;
  friend constexpr auto operator<=>(const Load&, const Load&) = default;
};

// R[dst] := R[lhs] . R[rhs]
struct App {
  std::size_t lhs;
  std::size_t rhs;
  std::size_t dst;
  friend constexpr auto operator<=>(const App&, const App&) = default;
};

struct Call {
  std::size_t reg;
  friend constexpr auto operator<=>(const Call&, const Call&) = default;
};

using Instruction = std::variant<Load, App, Call>;

// A finite instruction list shaped as: zero or more Loads, then zero or more
// Apps, then at most one trailing Call. The empty program is allowed.
//
// Storage is shared between a program and its tails, so dropping the leading
// instruction during execution is cheap.
class Program {
 public:
  Program() = default;  // the empty program

  // Checks the grammar shape; throws SyntaxError (position = instruction
  // index) when it is violated.
  static Program of(std::vector<Instruction> instrs);

  bool empty() const noexcept { return size() == 0; }
  std::size_t size() const noexcept { return all_ ? all_->size() - start_ : 0; }

  std::span<const Instruction> instructions() const noexcept {
    if (!all_) return {};
    return std::span<const Instruction>(all_->data() + start_, size());
  }

  const Instruction& front() const { return (*all_)[start_]; }

  // The program with its first instruction removed.
  Program tail() const {
    Program t;
    if (size() > 1) {
      t.all_ = all_;
      t.start_ = start_ + 1;
    }
    return t;
  }

  friend bool operator==(const Program& a, const Program& b) {
    if (a.all_ == b.all_ && a.start_ == b.start_) return true;
    auto sa = a.instructions(), sb = b.instructions();
    return std::equal(sa.begin(), sa.end(), sb.begin(), sb.end());
  }

 private:
  std::shared_ptr<const std::vector<Instruction>> all_;
  std::size_t start_ = 0;
};

// An addressing machine: register bank, valid program, input tape.
// Construction rejects programs that are not valid for the register bank.
class Machine {
 public:
  // Throws ValidityError when `program` is invalid for `registers`.
  static Machine make(std::vector<RegisterCell> registers, Program program,
                      Tape tape);

  std::size_t register_count() const noexcept { return registers_.size(); }
  const std::vector<RegisterCell>& registers() const noexcept {
    return registers_;
  }
  const Program& program() const noexcept { return program_; }
  const Tape& tape() const noexcept { return tape_; }

  // Copy with register i set to a. Writes to indices >= register_count() are
  // discarded and return the machine unchanged.
  Machine with_register(std::size_t i, Address a) const;

  // Copy with tape entry j replaced. j must be in range.
  Machine with_tape_entry(std::size_t j, Address a) const;

  friend bool operator==(const Machine&, const Machine&) = default;

 private:
  Machine(std::vector<RegisterCell> registers, Program program, Tape tape)
      : registers_(std::move(registers)),
        program_(std::move(program)),
        tape_(std::move(tape)) {}

  std::vector<RegisterCell> registers_;
  Program program_;
  Tape tape_;
};

// m with t appended to its input tape; registers and program are unchanged.
Machine append_tape(const Machine& m, const Tape& t);

// The program starts with Load but the tape is empty: awaiting input.
bool is_stuck(const Machine& m);

// No head step applies: empty program, or stuck.
bool is_final(const Machine& m);

namespace detail {

inline void hash_combine(std::size_t& seed, std::size_t value) noexcept {
  seed ^= value + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2);
}

}  // namespace detail

struct MachineHash {
  std::size_t operator()(const Machine& m) const noexcept;
};

struct ProgramHash {
  std::size_t operator()(const Program& p) const noexcept;
};

}  // namespace avm
