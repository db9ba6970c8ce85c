#pragma once
// Bounded approximation of applicative equivalence: the relation that also
// equates eventually-stuck machines whose every one-address extension is
// equivalent. Distinct verdicts carry a replayable witness.

#include <cstddef>
#include <string>
#include <vector>

#include "avm/atm.hpp"
#include "avm/reduction.hpp"

namespace avm {

// Interns the next indeterminate whose register count exceeds every register
// count used in the table so far; successive calls yield pairwise distinct,
// pairwise inequivalent addresses.
Address fresh_indeterminate(AddressTable& table);

// Replaying `applied` (left to right, via the application map) from the two
// compared addresses reproduces the discriminating outcomes.
struct AeWitness {
  std::vector<Address> applied;
  std::string outcome;
};

struct AeVerdict {
  enum class Kind { EquivUpTo, Distinct, Unknown };

  Kind kind;
  // EquivUpTo: number of fresh-indeterminate applications performed before
  // the sides were identified. Explicitly an approximation.
  std::size_t depth_used = 0;
  AeWitness witness;     // Distinct
  std::string reason;    // Unknown: fuel | cycle | depth | stuck-vs-final
};

// Head-runs both sides, discriminates on indeterminate endpoints, falls back
// to evaluation equivalence, and probes stuck pairs by applying fresh
// indeterminates up to `depth` times. With `strict_distinct`, a pair where
// one side terminates and the other provably diverges (Cycle) is reported
// Distinct instead of Unknown.
AeVerdict ae_check(AddressTable& table, Address a, Address b, std::size_t fuel,
                   std::size_t depth, bool strict_distinct = false);

// Re-runs a Distinct witness; true when the discriminating outcome
// reproduces.
bool replay_distinct(AddressTable& table, Address a, Address b,
                     const AeWitness& witness, std::size_t fuel,
                     bool strict_distinct = false);

}  // namespace avm
