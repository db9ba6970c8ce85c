#pragma once
// Full reduction (head + inner steps), deep normalization to canonical
// forms, and the evaluation-equivalence checker via common reducts.

#include <cstddef>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "avm/atm.hpp"
#include "avm/core.hpp"
#include "avm/vm.hpp"

namespace avm {

// All one-step full reducts of m: its head step (if any), plus, for every
// position in the recursive dereference tree of its initialized registers and
// tape entries, the machine with that position's entry replaced by one of its
// own one-step reducts. Finite by table acyclicity.
std::vector<Machine> c_successors(AddressTable& table, const Machine& m);

// c_successors without the head step of m itself.
std::vector<Machine> inner_successors(AddressTable& table, const Machine& m);

// A head-normal machine whose initialized registers and tape entries
// recursively refer only to deep forms. `complete` is false when any head run
// along the way hit fuel or a cycle.
struct DeepForm {
  Machine machine;
  bool complete;
  // First truncation kind encountered when incomplete (OutOfFuel or Cycle).
  OutcomeKind truncation = OutcomeKind::Final;
};

// Shared memo for deep normalization; safe for concurrent callers. Complete
// entries are reused at any fuel, truncated ones only at fuel no larger than
// the fuel they were computed with.
class DeepCache {
 public:
  struct Entry {
    Address normal;
    bool complete;
    OutcomeKind truncation;
    std::size_t fuel;
  };

  std::optional<Entry> find(Address a, std::size_t fuel) const;
  void store(Address a, Entry e);

 private:
  mutable std::mutex mutex_;
  std::unordered_map<Address::Id, Entry> entries_;
};

DeepForm deep_normalize(AddressTable& table, const Machine& m,
                        std::size_t fuel);
DeepForm deep_normalize(AddressTable& table, const Machine& m,
                        std::size_t fuel, DeepCache& cache);

enum class Equivalence { Equiv, Distinct, Unknown };

struct EvalVerdict {
  Equivalence verdict;
  // Distinct: path to the conflicting position and what differs there.
  std::string witness;
  // Unknown: "fuel" or "cycle".
  std::string reason;
};

// Decides evaluation equivalence of the machines at a and b by normalizing
// both sides. Equiv and Distinct are sound; Unknown is returned when a
// truncated position blocks the comparison. Distinct may be reported under
// truncation only from positions whose head runs both completed.
EvalVerdict eval_equiv(AddressTable& table, Address a, Address b,
                       std::size_t fuel);

}  // namespace avm
