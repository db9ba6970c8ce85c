#pragma once
// Shared test helpers: a random generator for valid machines and common
// fixture pools.

#include <cstdint>
#include <random>
#include <vector>

#include "avm/atm.hpp"
#include "avm/combinators.hpp"
#include "avm/core.hpp"
#include "avm/validator.hpp"

namespace avm::testing {

// Builds grammar- and validity-correct machines by construction, drawing
// addresses from a bounded pool that mixes normal and reducible machines.
class MachineGen {
 public:
  MachineGen(AddressTable& table, std::uint64_t seed,
             bool reducible_pool = false)
      : table_(table), rng_(seed) {
    for (std::size_t n = 0; n < 4; ++n) {
      pool_.push_back(table_.intern(indeterminate(n)));
    }
    pool_.push_back(table_.intern(k_machine()));
    pool_.push_back(table_.intern(s_machine()));
    pool_.push_back(table_.intern(k_prime_machine()));
    if (reducible_pool) {
      Address k = table_.intern(k_machine());
      Address x0 = pool_[0];
      Address x1 = pool_[1];
      // Machines with pending head steps, to seed inner redexes.
      pool_.push_back(table_.intern(
          append_tape(k_machine(), Tape{x0, x1})));
      pool_.push_back(table_.intern(
          append_tape(s_machine(), Tape{k, k, x0})));
      pool_.push_back(table_.intern(append_tape(one_machine(), Tape{k, x1})));
      pool_.push_back(table_.intern(omega_machine(table_)));
    }
  }

  Address pool_address() { return pool_[pick(pool_.size())]; }

  Machine random_machine(std::size_t max_regs = 4, std::size_t max_instrs = 6,
                         std::size_t max_tape = 4) {
    std::size_t r = pick(max_regs + 1);
    std::vector<RegisterCell> regs(r, std::nullopt);
    InitializedSet init;
    for (std::size_t i = 0; i < r; ++i) {
      if (pick(2) == 0) {
        regs[i] = pool_address();
        init.add(i);
      }
    }
    std::vector<Instruction> instrs;
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < r; ++i) {
      if (init.contains(i)) ready.push_back(i);
    }
    std::size_t budget = pick(max_instrs + 1);
    std::size_t loads = pick(budget + 1);
    for (std::size_t i = 0; i < loads; ++i) {
      std::size_t reg = pick(r + 1);  // index r is the discard register
      instrs.push_back(Load{reg});
      if (reg < r && !std::count(ready.begin(), ready.end(), reg)) {
        ready.push_back(reg);
      }
    }
    if (!ready.empty()) {
      std::size_t apps = pick(budget - loads + 1);
      for (std::size_t i = 0; i < apps; ++i) {
        std::size_t lhs = ready[pick(ready.size())];
        std::size_t rhs = ready[pick(ready.size())];
        std::size_t dst = pick(r + 1);
        instrs.push_back(App{lhs, rhs, dst});
        if (dst < r && !std::count(ready.begin(), ready.end(), dst)) {
          ready.push_back(dst);
        }
      }
      if (pick(2) == 0) {
        instrs.push_back(Call{ready[pick(ready.size())]});
      }
    }
    Tape tape;
    std::size_t items = pick(max_tape + 1);
    for (std::size_t i = 0; i < items; ++i) tape.push_back(pool_address());
    Machine m = Machine::make(std::move(regs), Program::of(std::move(instrs)),
                              std::move(tape));
    if (pool_.size() < 48 && pick(4) == 0) {
      pool_.push_back(table_.intern(m));
    }
    return m;
  }

  std::size_t pick(std::size_t n) {
    return n == 0 ? 0 : std::uniform_int_distribution<std::size_t>(0, n - 1)(
                            rng_);
  }

  std::mt19937_64& rng() { return rng_; }
  const std::vector<Address>& pool() const { return pool_; }

 private:
  AddressTable& table_;
  std::mt19937_64 rng_;
  std::vector<Address> pool_;
};

}  // namespace avm::testing
