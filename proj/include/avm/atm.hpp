#pragma once
// The address table: an incremental structural interner giving each distinct
// machine a unique address, plus the application map on addresses.

#include <cstddef>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "avm/core.hpp"
#include "avm/errors.hpp"

namespace avm {

// Append-only. Ids are issued in increasing order and never reused, so every
// address stored inside a machine is strictly smaller than the id of any
// machine that contains it; recursive dereferencing always terminates.
//
// intern/lookup/apply are safe for concurrent callers and return stable ids.
class AddressTable {
 public:
  AddressTable() = default;
  AddressTable(const AddressTable&) = delete;
  AddressTable& operator=(const AddressTable&) = delete;

  // The address of m; allocates the next id when m is new. Every address
  // occurring in m must have been issued by this table already.
  Address intern(const Machine& m);

  // The unique machine with address a.
  Machine lookup(Address a) const;

  // a.b: the address of lookup(a) with b appended to its tape. Purely static;
  // never executes any machine.
  Address apply(Address a, Address b);

  bool issued(Address a) const;
  std::size_t size() const;

  // Largest register count over all interned machines.
  std::size_t max_register_count() const;

  // Machines in allocation order.
  std::vector<Machine> snapshot() const;

 private:
  Address intern_locked(const Machine& m);
  void check_owned(const Machine& m) const;

  mutable std::mutex mutex_;
  std::vector<Machine> forward_;
  std::unordered_map<Machine, Address::Id, MachineHash> backward_;
  std::size_t max_registers_ = 0;
};

}  // namespace avm
