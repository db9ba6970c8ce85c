#include "avm/vm.hpp"

#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace avm {

std::optional<Machine> step(AddressTable& table, const Machine& m) {
  if (m.program().empty()) return std::nullopt;
  const Instruction& ins = m.program().front();
  if (const Load* ld = std::get_if<Load>(&ins)) {
    if (m.tape().empty()) return std::nullopt;  // stuck
    Address a = m.tape().front();
    std::vector<RegisterCell> regs = m.registers();
    if (ld->reg < regs.size()) regs[ld->reg] = a;
    Tape t(m.tape().begin() + 1, m.tape().end());
    return Machine::make(std::move(regs), m.program().tail(), std::move(t));
  }
  if (const App* ap = std::get_if<App>(&ins)) {
    Address result = table.apply(*m.registers().at(ap->lhs),
                                 *m.registers().at(ap->rhs));
    std::vector<RegisterCell> regs = m.registers();
    if (ap->dst < regs.size()) regs[ap->dst] = result;
    return Machine::make(std::move(regs), m.program().tail(), m.tape());
  }
  const Call& call = std::get<Call>(ins);
  Machine target = table.lookup(*m.registers().at(call.reg));
  return append_tape(target, m.tape());
}

namespace {

constexpr std::size_t kUnfoldProbeFuel = 32;

// Shape key used to shortlist earlier states comparable to the current one:
// same program, same register initialization pattern, same tape length.
std::size_t shape_key(const Machine& m) {
  std::size_t seed = ProgramHash{}(m.program());
  detail::hash_combine(seed, m.register_count());
  for (const RegisterCell& cell : m.registers()) {
    detail::hash_combine(seed, cell.has_value() ? 1 : 0);
  }
  detail::hash_combine(seed, m.tape().size());
  return seed;
}

bool same_shape(const Machine& a, const Machine& b) {
  if (a.register_count() != b.register_count()) return false;
  if (!(a.program() == b.program())) return false;
  if (a.tape().size() != b.tape().size()) return false;
  for (std::size_t i = 0; i < a.register_count(); ++i) {
    if (a.registers()[i].has_value() != b.registers()[i].has_value()) {
      return false;
    }
  }
  return true;
}

class CycleDetector {
 public:
  explicit CycleDetector(AddressTable& table) : table_(table) {}

  // The address of the earlier state the current one revisits, if any.
  std::optional<Address> find_repeat(const Machine& m, Address addr) {
    if (visited_.contains(addr.id())) return addr;
    auto bucket = by_shape_.find(shape_key(m));
    if (bucket == by_shape_.end()) return std::nullopt;
    for (std::size_t idx : bucket->second) {
      const Snapshot& old = states_[idx];
      if (matches_up_to_unfolding(m, old.machine)) return old.addr;
    }
    return std::nullopt;
  }

  void remember(Machine m, Address addr) {
    visited_.insert(addr.id());
    by_shape_[shape_key(m)].push_back(states_.size());
    states_.push_back(Snapshot{addr, std::move(m)});
  }

 private:
  struct Snapshot {
    Address addr;
    Machine machine;
  };

  // True when every register/tape entry of `later` either equals the
  // corresponding entry of `earlier` or head-reduces to it within the probe
  // bound. Then `later` inner-reduces to `earlier`, and since `earlier`
  // already head-reduced to `later`, the head reduction cannot terminate.
  bool matches_up_to_unfolding(const Machine& later, const Machine& earlier) {
    if (!same_shape(later, earlier)) return false;
    for (std::size_t i = 0; i < later.register_count(); ++i) {
      const RegisterCell& lc = later.registers()[i];
      if (!lc) continue;
      if (!unfolds_to(*lc, *earlier.registers()[i])) return false;
    }
    for (std::size_t j = 0; j < later.tape().size(); ++j) {
      if (!unfolds_to(later.tape()[j], earlier.tape()[j])) return false;
    }
    return true;
  }

  bool unfolds_to(Address from, Address to) {
    if (from == to) return true;
    auto key = std::make_pair(from.id(), to.id());
    auto memo = probe_memo_.find(key);
    if (memo != probe_memo_.end()) return memo->second;
    Machine target = table_.lookup(to);
    Machine cur = table_.lookup(from);
    bool found = false;
    for (std::size_t i = 0; i < kUnfoldProbeFuel; ++i) {
      std::optional<Machine> next = step(table_, cur);
      if (!next) break;
      cur = std::move(*next);
      if (cur == target) {
        found = true;
        break;
      }
    }
    probe_memo_.emplace(key, found);
    return found;
  }

  struct PairHash {
    std::size_t operator()(
        const std::pair<Address::Id, Address::Id>& p) const noexcept {
      std::size_t seed = static_cast<std::size_t>(p.first);
      detail::hash_combine(seed, static_cast<std::size_t>(p.second));
      return seed;
    }
  };

  AddressTable& table_;
  std::unordered_set<Address::Id> visited_;
  std::unordered_map<std::size_t, std::vector<std::size_t>> by_shape_;
  std::vector<Snapshot> states_;
  std::unordered_map<std::pair<Address::Id, Address::Id>, bool, PairHash>
      probe_memo_;
};

Outcome bigstep_rec(AddressTable& table, const Machine& m, std::size_t fuel,
                    std::size_t steps, CycleDetector& detect) {
  Address here = table.intern(m);
  if (auto repeat = detect.find_repeat(m, here)) {
    return Outcome{OutcomeKind::Cycle, m, steps, repeat};
  }
  detect.remember(m, here);
  if (m.program().empty()) {  // (End)
    return Outcome{OutcomeKind::Final, m, steps, std::nullopt};
  }
  const Instruction& ins = m.program().front();
  if (const Load* ld = std::get_if<Load>(&ins)) {
    if (m.tape().empty()) {  // (Stuck)
      return Outcome{OutcomeKind::Stuck, m, steps, std::nullopt};
    }
    if (fuel == 0) return Outcome{OutcomeKind::OutOfFuel, m, steps, {}};
    // (Load)
    std::vector<RegisterCell> regs = m.registers();
    if (ld->reg < regs.size()) regs[ld->reg] = m.tape().front();
    Tape t(m.tape().begin() + 1, m.tape().end());
    Machine next =
        Machine::make(std::move(regs), m.program().tail(), std::move(t));
    return bigstep_rec(table, next, fuel - 1, steps + 1, detect);
  }
  if (fuel == 0) return Outcome{OutcomeKind::OutOfFuel, m, steps, {}};
  if (const App* ap = std::get_if<App>(&ins)) {
    // (App)
    Address a = table.apply(*m.registers().at(ap->lhs),
                            *m.registers().at(ap->rhs));
    std::vector<RegisterCell> regs = m.registers();
    if (ap->dst < regs.size()) regs[ap->dst] = a;
    Machine next =
        Machine::make(std::move(regs), m.program().tail(), m.tape());
    return bigstep_rec(table, next, fuel - 1, steps + 1, detect);
  }
  // (Call)
  const Call& call = std::get<Call>(ins);
  Machine next = append_tape(table.lookup(*m.registers().at(call.reg)),
                             m.tape());
  return bigstep_rec(table, next, fuel - 1, steps + 1, detect);
}

}  // namespace

Outcome run(AddressTable& table, Machine m, std::size_t fuel,
            std::vector<Machine>* states_out) {
  CycleDetector detect(table);
  std::size_t steps = 0;
  for (;;) {
    Address here = table.intern(m);
    if (auto repeat = detect.find_repeat(m, here)) {
      return Outcome{OutcomeKind::Cycle, std::move(m), steps, repeat};
    }
    detect.remember(m, here);
    if (states_out) states_out->push_back(m);
    if (m.program().empty()) {
      return Outcome{OutcomeKind::Final, std::move(m), steps, std::nullopt};
    }
    if (is_stuck(m)) {
      return Outcome{OutcomeKind::Stuck, std::move(m), steps, std::nullopt};
    }
    if (steps == fuel) {
      return Outcome{OutcomeKind::OutOfFuel, std::move(m), steps, std::nullopt};
    }
    m = *step(table, m);
    ++steps;
  }
}

Outcome bigstep(AddressTable& table, const Machine& m, std::size_t fuel) {
  CycleDetector detect(table);
  return bigstep_rec(table, m, fuel, 0, detect);
}

std::vector<Machine> trace(AddressTable& table, Machine m, std::size_t fuel) {
  std::vector<Machine> states;
  run(table, std::move(m), fuel, &states);
  return states;
}

}  // namespace avm
