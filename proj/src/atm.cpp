#include "avm/atm.hpp"

namespace avm {

void AddressTable::check_owned(const Machine& m) const {
  auto check = [this](Address a) {
    if (a.id() >= forward_.size()) throw DanglingAddress(a.id());
  };
  for (const RegisterCell& cell : m.registers()) {
    if (cell) check(*cell);
  }
  for (Address a : m.tape()) check(a);
}

Address AddressTable::intern_locked(const Machine& m) {
  check_owned(m);
  auto it = backward_.find(m);
  if (it != backward_.end()) return Address(it->second);
  Address::Id id = forward_.size();
  forward_.push_back(m);
  backward_.emplace(m, id);
  if (m.register_count() > max_registers_) max_registers_ = m.register_count();
  return Address(id);
}

Address AddressTable::intern(const Machine& m) {
  std::lock_guard<std::mutex> lock(mutex_);
  return intern_locked(m);
}

Machine AddressTable::lookup(Address a) const {
  std::lock_guard<std::mutex> lock(mutex_);
  if (a.id() >= forward_.size()) throw DanglingAddress(a.id());
  return forward_[a.id()];
}

Address AddressTable::apply(Address a, Address b) {
  std::lock_guard<std::mutex> lock(mutex_);
  if (a.id() >= forward_.size()) throw DanglingAddress(a.id());
  if (b.id() >= forward_.size()) throw DanglingAddress(b.id());
  return intern_locked(append_tape(forward_[a.id()], Tape{b}));
}

bool AddressTable::issued(Address a) const {
  std::lock_guard<std::mutex> lock(mutex_);
  return a.id() < forward_.size();
}

std::size_t AddressTable::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return forward_.size();
}

std::size_t AddressTable::max_register_count() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return max_registers_;
}

std::vector<Machine> AddressTable::snapshot() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return forward_;
}

}  // namespace avm
