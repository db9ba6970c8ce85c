#include "avm/contexts.hpp"

#include <unordered_set>
#include <utility>

#include "avm/text.hpp"
#include "avm/validator.hpp"

namespace avm {

ExtendedMachine ExtendedMachine::hole(ExtTape tape) {
  return ExtendedMachine(Hole{std::move(tape)});
}

ExtendedMachine ExtendedMachine::plain(std::vector<ExtCell> registers,
                                       Program program, ExtTape tape) {
  InitializedSet init;
  for (std::size_t i = 0; i < registers.size(); ++i) {
    if (registers[i]) init.add(i);
  }
  validate(program, registers.size(), init);
  return ExtendedMachine(
      Plain{std::move(registers), std::move(program), std::move(tape)});
}

ExtendedMachine ExtendedMachine::lift(const Machine& m) {
  std::vector<ExtCell> regs;
  regs.reserve(m.register_count());
  for (const RegisterCell& cell : m.registers()) {
    regs.push_back(cell ? ExtCell(ExtAddress::base(*cell)) : std::nullopt);
  }
  ExtTape tape;
  tape.reserve(m.tape().size());
  for (Address a : m.tape()) tape.push_back(ExtAddress::base(a));
  return ExtendedMachine(Plain{std::move(regs), m.program(), std::move(tape)});
}

const ExtTape& ExtendedMachine::tape() const noexcept {
  if (const Hole* h = std::get_if<Hole>(&v_)) return h->tape;
  return std::get<Plain>(v_).tape;
}

const std::vector<ExtCell>& ExtendedMachine::registers() const {
  return std::get<Plain>(v_).registers;
}

const Program& ExtendedMachine::program() const {
  return std::get<Plain>(v_).program;
}

std::size_t ExtendedMachine::register_count() const {
  return is_hole() ? 0 : registers().size();
}

bool ExtendedMachine::all_base() const {
  if (is_hole()) return false;
  for (const ExtCell& cell : registers()) {
    if (cell && !cell->is_base()) return false;
  }
  for (const ExtAddress& a : tape()) {
    if (!a.is_base()) return false;
  }
  return true;
}

Machine ExtendedMachine::to_machine() const {
  std::vector<RegisterCell> regs;
  for (const ExtCell& cell : registers()) {
    regs.push_back(cell ? RegisterCell(cell->base_address()) : std::nullopt);
  }
  Tape tape;
  for (const ExtAddress& a : this->tape()) tape.push_back(a.base_address());
  return Machine::make(std::move(regs), program(), std::move(tape));
}

std::size_t ExtMachineHash::operator()(
    const ExtendedMachine& x) const noexcept {
  std::size_t seed = x.is_hole() ? 0x401eull : 0x91a14ull;
  auto mix_addr = [&seed](const ExtAddress& a) {
    detail::hash_combine(seed, a.is_base() ? 1 : 2);
    detail::hash_combine(seed, static_cast<std::size_t>(
                                   a.is_base() ? a.base_address().id()
                                               : a.ext_id()));
  };
  if (!x.is_hole()) {
    detail::hash_combine(seed, x.register_count());
    for (const ExtCell& cell : x.registers()) {
      if (cell) {
        mix_addr(*cell);
      } else {
        detail::hash_combine(seed, 0);
      }
    }
    detail::hash_combine(seed, ProgramHash{}(x.program()));
  }
  detail::hash_combine(seed, x.tape().size());
  for (const ExtAddress& a : x.tape()) mix_addr(a);
  return seed;
}

ExtAddress ExtTable::intern(const ExtendedMachine& x) {
  // Extended machines that are really base machines keep their base address.
  if (x.all_base()) return ExtAddress::base(base_.intern(x.to_machine()));
  std::lock_guard<std::mutex> lock(mutex_);
  auto check = [this](const ExtAddress& a) {
    if (a.is_base()) {
      if (!base_.issued(a.base_address())) {
        throw DanglingAddress(a.base_address().id());
      }
    } else if (a.ext_id() >= forward_.size()) {
      throw DanglingAddress(a.ext_id());
    }
  };
  if (!x.is_hole()) {
    for (const ExtCell& cell : x.registers()) {
      if (cell) check(*cell);
    }
  }
  for (const ExtAddress& a : x.tape()) check(a);
  auto it = backward_.find(x);
  if (it != backward_.end()) return ExtAddress::ext(it->second);
  std::uint64_t id = forward_.size();
  forward_.push_back(x);
  backward_.emplace(x, id);
  return ExtAddress::ext(id);
}

ExtendedMachine ExtTable::lookup(ExtAddress a) const {
  if (a.is_base()) return ExtendedMachine::lift(base_.lookup(a.base_address()));
  std::lock_guard<std::mutex> lock(mutex_);
  if (a.ext_id() >= forward_.size()) throw DanglingAddress(a.ext_id());
  return forward_[a.ext_id()];
}

ExtAddress ExtTable::apply(ExtAddress a, ExtAddress b) {
  ExtendedMachine target = lookup(a);
  if (target.is_hole()) {
    ExtTape tape = target.tape();
    tape.push_back(b);
    return intern(ExtendedMachine::hole(std::move(tape)));
  }
  ExtTape tape = target.tape();
  tape.push_back(b);
  return intern(ExtendedMachine::plain(target.registers(), target.program(),
                                       std::move(tape)));
}

namespace {

class OccCounter {
 public:
  explicit OccCounter(ExtTable& ext) : ext_(ext) {}

  std::size_t of(const ExtendedMachine& x) {
    std::size_t count = 0;
    if (x.is_hole()) {
      count = 1;
    } else {
      for (const ExtCell& cell : x.registers()) {
        if (cell) count += of_address(*cell);
      }
    }
    for (const ExtAddress& a : x.tape()) count += of_address(a);
    return count;
  }

 private:
  std::size_t of_address(const ExtAddress& a) {
    if (a.is_base()) return 0;  // base machines cannot reach the hole
    auto it = memo_.find(a.ext_id());
    if (it != memo_.end()) return it->second;
    std::size_t count = of(ext_.lookup(a));
    memo_.emplace(a.ext_id(), count);
    return count;
  }

  ExtTable& ext_;
  std::unordered_map<std::uint64_t, std::size_t> memo_;
};

class Plugger {
 public:
  Plugger(ExtTable& ext, const Machine& m) : ext_(ext), filler_(m) {}

  Machine plug(const ExtendedMachine& c) {
    if (c.is_hole()) {
      return append_tape(filler_, plug_tape(c.tape()));
    }
    std::vector<RegisterCell> regs;
    regs.reserve(c.register_count());
    for (const ExtCell& cell : c.registers()) {
      regs.push_back(cell ? RegisterCell(plug_address(*cell)) : std::nullopt);
    }
    return Machine::make(std::move(regs), c.program(), plug_tape(c.tape()));
  }

 private:
  Tape plug_tape(const ExtTape& tape) {
    Tape out;
    out.reserve(tape.size());
    for (const ExtAddress& a : tape) out.push_back(plug_address(a));
    return out;
  }

  Address plug_address(const ExtAddress& a) {
    if (a.is_base()) return a.base_address();
    auto it = memo_.find(a.ext_id());
    if (it != memo_.end()) return it->second;
    Address plugged = ext_.base().intern(plug(ext_.lookup(a)));
    memo_.emplace(a.ext_id(), plugged);
    return plugged;
  }

  ExtTable& ext_;
  const Machine& filler_;
  std::unordered_map<std::uint64_t, Address> memo_;
};

// Head step over extended addresses; holes are final here.
std::optional<ExtendedMachine> ext_head_step(ExtTable& ext,
                                             const ExtendedMachine& x) {
  if (x.is_hole()) return std::nullopt;
  if (x.program().empty()) return std::nullopt;
  const Instruction& ins = x.program().front();
  if (const Load* ld = std::get_if<Load>(&ins)) {
    if (x.tape().empty()) return std::nullopt;
    std::vector<ExtCell> regs = x.registers();
    if (ld->reg < regs.size()) regs[ld->reg] = x.tape().front();
    ExtTape t(x.tape().begin() + 1, x.tape().end());
    return ExtendedMachine::plain(std::move(regs), x.program().tail(),
                                  std::move(t));
  }
  if (const App* ap = std::get_if<App>(&ins)) {
    ExtAddress result =
        ext.apply(*x.registers().at(ap->lhs), *x.registers().at(ap->rhs));
    std::vector<ExtCell> regs = x.registers();
    if (ap->dst < regs.size()) regs[ap->dst] = result;
    return ExtendedMachine::plain(std::move(regs), x.program().tail(),
                                  x.tape());
  }
  const Call& call = std::get<Call>(ins);
  ExtendedMachine target = ext.lookup(*x.registers().at(call.reg));
  ExtTape tape = target.tape();
  tape.insert(tape.end(), x.tape().begin(), x.tape().end());
  if (target.is_hole()) return ExtendedMachine::hole(std::move(tape));
  return ExtendedMachine::plain(target.registers(), target.program(),
                                std::move(tape));
}

}  // namespace

std::size_t occ(ExtTable& ext, const ExtendedMachine& x) {
  return OccCounter(ext).of(x);
}

std::string format_ext_machine_inline(const ExtendedMachine& x) {
  auto show = [](const ExtAddress& a) {
    return a.is_base() ? std::to_string(a.base_address().id())
                       : "^" + std::to_string(a.ext_id());
  };
  std::string tape = "[";
  for (std::size_t j = 0; j < x.tape().size(); ++j) {
    if (j) tape += ", ";
    tape += show(x.tape()[j]);
  }
  tape += "]";
  if (x.is_hole()) return "hole tape=" + tape;
  std::string regs = "[";
  for (std::size_t i = 0; i < x.register_count(); ++i) {
    if (i) regs += ", ";
    regs += x.registers()[i] ? show(*x.registers()[i]) : "_";
  }
  regs += "]";
  return "regs=" + regs + " prog=\"" + format_program(x.program()) +
         "\" tape=" + tape;
}

Machine plug(ExtTable& ext, const ExtendedMachine& c, const Machine& m) {
  Machine plugged = Plugger(ext, m).plug(c);
  ext.base().intern(plugged);
  return plugged;
}

std::optional<ExtendedMachine> underlined_step(ExtTable& ext,
                                               const ExtendedMachine& c,
                                               const Machine& m) {
  if (c.is_hole()) {
    ExtendedMachine lifted = ExtendedMachine::lift(m);
    ExtTape tape = lifted.tape();
    tape.insert(tape.end(), c.tape().begin(), c.tape().end());
    return ExtendedMachine::plain(lifted.registers(), lifted.program(),
                                  std::move(tape));
  }
  return ext_head_step(ext, c);
}

ExtRun underlined_run(ExtTable& ext, ExtendedMachine c, const Machine& m,
                      std::size_t fuel) {
  ExtRun result;
  std::unordered_set<std::uint64_t> visited_ext;
  std::unordered_set<Address::Id> visited_base;
  for (std::size_t steps = 0;; ++steps) {
    ExtAddress here = ext.intern(c);
    bool seen = here.is_base() ? !visited_base.insert(here.base_address().id()).second
                               : !visited_ext.insert(here.ext_id()).second;
    if (seen) {
      result.end = OutcomeKind::Cycle;
      return result;
    }
    result.states.push_back(c);
    std::optional<ExtendedMachine> next = underlined_step(ext, c, m);
    if (!next) {
      bool stuck = !c.is_hole() && !c.program().empty() &&
                   std::holds_alternative<Load>(c.program().front()) &&
                   c.tape().empty();
      result.end = stuck ? OutcomeKind::Stuck : OutcomeKind::Final;
      return result;
    }
    if (steps == fuel) {
      result.end = OutcomeKind::OutOfFuel;
      return result;
    }
    c = std::move(*next);
  }
}

bool correspondence_check(ExtTable& ext, const ExtendedMachine& c,
                          const Machine& m, std::size_t fuel) {
  std::vector<Machine> plugged_states;
  Outcome plugged_end =
      run(ext.base(), plug(ext, c, m), fuel, &plugged_states);
  ExtRun underlined = underlined_run(ext, c, m, fuel);

  // Plug every underlined state; hole-substitution steps plug to the machine
  // they substitute into, so consecutive duplicates collapse.
  std::vector<Machine> mapped;
  for (const ExtendedMachine& state : underlined.states) {
    Machine p = plug(ext, state, m);
    if (mapped.empty() || !(mapped.back() == p)) mapped.push_back(std::move(p));
  }

  std::size_t common = std::min(mapped.size(), plugged_states.size());
  for (std::size_t i = 0; i < common; ++i) {
    if (!(mapped[i] == plugged_states[i])) return false;
  }

  bool plugged_final = plugged_end.terminated();
  bool underlined_final = underlined.end == OutcomeKind::Final ||
                          underlined.end == OutcomeKind::Stuck;
  if (plugged_final && underlined_final) {
    return mapped.size() == plugged_states.size();
  }
  if (plugged_final != underlined_final) {
    // A side that provably cycles can never match a terminating one; a side
    // that merely ran out of fuel leaves the prefix verified.
    OutcomeKind truncated = plugged_final ? underlined.end : plugged_end.kind;
    return truncated == OutcomeKind::OutOfFuel;
  }
  return true;
}

}  // namespace avm
