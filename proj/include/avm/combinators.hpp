#pragma once
// The standard machines used as fixtures throughout: projections,
// S-combinator, self-application, the looping machine and indeterminates.

#include <cstddef>

#include "avm/atm.hpp"
#include "avm/core.hpp"

namespace avm {

// x_n: n+1 empty registers, empty program, empty tape. The machine analogue
// of a free variable.
Machine indeterminate(std::size_t n);

// K = <null, Load 0; Load 1; Call 0, []>  (first projection; index 1 is the
// out-of-range discard for a 1-register machine)
Machine k_machine();

// K' = <null, null, Load 0; Load 1; Call 0, []>  (also a first projection,
// but with two registers)
Machine k_prime_machine();

// S = <null^3, Load 0; Load 1; Load 2; App 0 2 0; App 1 2 1; App 0 1 2;
//      Call 2, []>
Machine s_machine();

// 1 = <null^2, Load 0; Load 1; App 0 1 0; Call 0, []>  (eta-expanded identity)
Machine one_machine();

// D = <null, Load 0; App 0 0 0; Call 0, []>  (self-application)
Machine delta_machine();

// I = S ++ [#K, #K]; behaves as the identity.
Machine identity_machine(AddressTable& table);

// O = D ++ [#D]; head reduction loops forever.
Machine omega_machine(AddressTable& table);

}  // namespace avm
