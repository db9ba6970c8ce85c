#pragma once
// Machine execution: deterministic head reduction (small-step), the big-step
// evaluator, fuel accounting, cycle detection and traces.

#include <cstddef>
#include <optional>
#include <vector>

#include "avm/atm.hpp"
#include "avm/core.hpp"

namespace avm {

enum class OutcomeKind { Final, Stuck, OutOfFuel, Cycle };

struct Outcome {
  OutcomeKind kind;
  Machine machine;  // last state reached
  std::size_t steps = 0;
  // Cycle only: address of the earlier state this run came back to.
  std::optional<Address> repeated;

  bool terminated() const {
    return kind == OutcomeKind::Final || kind == OutcomeKind::Stuck;
  }
};

// One head step. Returns nullopt exactly when m is final.
std::optional<Machine> step(AddressTable& table, const Machine& m);

// Iterates `step` up to `fuel` head steps. Returns Final/Stuck on a final
// state, Cycle when the run provably revisits an earlier state, OutOfFuel
// otherwise. When states_out is given, every visited state is appended to it
// (the revisited state is not repeated).
//
// A revisit is detected either literally (the interned address of a state
// repeats) or up to unfolding: the current state matches an earlier one
// except for register/tape entries whose machines head-reduce to the earlier
// entries' machines within a small bound. The second form catches loops that
// keep minting fresh addresses for the same computation.
Outcome run(AddressTable& table, Machine m, std::size_t fuel,
            std::vector<Machine>* states_out = nullptr);

// Direct recursive reading of the big-step rules (Stuck), (End), (Load),
// (App), (Call); fuel counts rule applications. Shares the cycle-detection
// contract with `run`, so the two evaluators classify non-termination alike.
Outcome bigstep(AddressTable& table, const Machine& m, std::size_t fuel);

// The unique head-reduction sequence from m, truncated by fuel or cycle.
std::vector<Machine> trace(AddressTable& table, Machine m, std::size_t fuel);

}  // namespace avm
