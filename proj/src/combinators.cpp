#include "avm/combinators.hpp"

namespace avm {

namespace {

std::vector<RegisterCell> nulls(std::size_t n) {
  return std::vector<RegisterCell>(n, std::nullopt);
}

}  // namespace

Machine indeterminate(std::size_t n) {
  return Machine::make(nulls(n + 1), Program(), {});
}

Machine k_machine() {
  return Machine::make(nulls(1), Program::of({Load{0}, Load{1}, Call{0}}), {});
}

Machine k_prime_machine() {
  return Machine::make(nulls(2), Program::of({Load{0}, Load{1}, Call{0}}), {});
}

Machine s_machine() {
  return Machine::make(nulls(3),
                       Program::of({Load{0}, Load{1}, Load{2}, App{0, 2, 0},
                                    App{1, 2, 1}, App{0, 1, 2}, Call{2}}),
                       {});
}

Machine one_machine() {
  return Machine::make(
      nulls(2), Program::of({Load{0}, Load{1}, App{0, 1, 0}, Call{0}}), {});
}

Machine delta_machine() {
  return Machine::make(nulls(1),
                       Program::of({Load{0}, App{0, 0, 0}, Call{0}}), {});
}

Machine identity_machine(AddressTable& table) {
  Address k = table.intern(k_machine());
  return append_tape(s_machine(), Tape{k, k});
}

Machine omega_machine(AddressTable& table) {
  Address d = table.intern(delta_machine());
  return append_tape(delta_machine(), Tape{d});
}

}  // namespace avm
