#include "avm/core.hpp"

#include <algorithm>
#include <utility>

#include "avm/validator.hpp"

namespace avm {

Program Program::of(std::vector<Instruction> instrs) {
  enum Phase { Loads, Apps, Done };
  Phase phase = Loads;
  for (std::size_t i = 0; i < instrs.size(); ++i) {
    const Instruction& ins = instrs[i];
    if (std::holds_alternative<Load>(ins)) {
      if (phase != Loads) throw SyntaxError("Load after App or Call", i);
    } else if (std::holds_alternative<App>(ins)) {
      if (phase == Done) throw SyntaxError("App after Call", i);
      phase = Apps;
    } else {
      if (phase == Done) throw SyntaxError("instruction after Call", i);
      phase = Done;
    }
  }
  Program p;
  if (!instrs.empty()) {
    p.all_ = std::make_shared<const std::vector<Instruction>>(std::move(instrs));
    p.start_ = 0;
  }
  return p;
}

Machine Machine::make(std::vector<RegisterCell> registers, Program program,
                      Tape tape) {
  if (auto issue = check_valid(program, registers)) {
    throw ValidityError(*issue);
  }
  return Machine(std::move(registers), std::move(program), std::move(tape));
}

Machine Machine::with_register(std::size_t i, Address a) const {
  if (i >= registers_.size()) return *this;
  Machine m = *this;
  m.registers_[i] = a;
  return m;
}

Machine Machine::with_tape_entry(std::size_t j, Address a) const {
  Machine m = *this;
  m.tape_.at(j) = a;
  return m;
}

Machine append_tape(const Machine& m, const Tape& t) {
  Tape joined = m.tape();
  joined.insert(joined.end(), t.begin(), t.end());
  return Machine::make(m.registers(), m.program(), std::move(joined));
}

bool is_stuck(const Machine& m) {
  return !m.program().empty() &&
         std::holds_alternative<Load>(m.program().front()) && m.tape().empty();
}

bool is_final(const Machine& m) { return m.program().empty() || is_stuck(m); }

std::size_t ProgramHash::operator()(const Program& p) const noexcept {
  std::size_t seed = 0x51ab5e1ull;
  for (const Instruction& ins : p.instructions()) {
    detail::hash_combine(seed, ins.index());
    std::visit(
        [&seed](const auto& op) {
          using T = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<T, Load>) {
            detail::hash_combine(seed, op.reg);
          } else if constexpr (std::is_same_v<T, App>) {
            detail::hash_combine(seed, op.lhs);
            detail::hash_combine(seed, op.rhs);
            detail::hash_combine(seed, op.dst);
          } else {
            detail::hash_combine(seed, op.reg);
          }
        },
        ins);
  }
  return seed;
}

std::size_t MachineHash::operator()(const Machine& m) const noexcept {
  std::size_t seed = 0xadd2e55ull;
  detail::hash_combine(seed, m.register_count());
  for (const RegisterCell& cell : m.registers()) {
    detail::hash_combine(seed,
                         cell ? static_cast<std::size_t>(cell->id()) + 1 : 0);
  }
  detail::hash_combine(seed, ProgramHash{}(m.program()));
  detail::hash_combine(seed, m.tape().size());
  for (Address a : m.tape()) {
    detail::hash_combine(seed, static_cast<std::size_t>(a.id()));
  }
  return seed;
}

}  // namespace avm
