#include "doctest.h"

#include "avm/atm.hpp"
#include "avm/combinators.hpp"
#include "avm/core.hpp"
#include "avm/vm.hpp"
#include "support.hpp"

using namespace avm;

TEST_CASE("append_tape extends the tape and changes nothing else") {
  AddressTable table;
  Address a = table.intern(indeterminate(0));
  Address b = table.intern(indeterminate(1));

  Machine k = k_machine();
  Machine applied = append_tape(k, Tape{a, b});
  CHECK(applied.registers() == k.registers());
  CHECK(applied.program() == k.program());
  CHECK(applied.tape() == Tape{a, b});

  CHECK(append_tape(k, {}) == k);
  CHECK(append_tape(append_tape(k, Tape{a}), Tape{b}) ==
        append_tape(k, Tape{a, b}));
}

TEST_CASE("stuck and final classification") {
  AddressTable table;
  Address a = table.intern(indeterminate(0));

  SUBCASE("K has a leading Load and an empty tape") {
    CHECK(is_stuck(k_machine()));
    CHECK(is_final(k_machine()));
  }
  SUBCASE("the empty program is final but not stuck") {
    Machine x0 = indeterminate(0);
    CHECK(!is_stuck(x0));
    CHECK(is_final(x0));
  }
  SUBCASE("a pending Call is executable") {
    Machine m = Machine::make({RegisterCell(a)}, Program::of({Call{0}}), {});
    CHECK(!is_final(m));
  }
  SUBCASE("one step of K++[a] leaves a stuck machine") {
    Machine m = append_tape(k_machine(), Tape{a});
    CHECK(!is_stuck(m));
    Machine next = *step(table, m);
    CHECK(is_stuck(next));
  }
}

TEST_CASE("is_final agrees with the step function on random machines") {
  AddressTable table;
  testing::MachineGen gen(table, 11);
  for (int i = 0; i < 300; ++i) {
    Machine m = gen.random_machine();
    CHECK(is_final(m) == !step(table, m).has_value());
    CHECK(is_stuck(m) == (is_final(m) && !m.program().empty()));
  }
}

TEST_CASE("register writes beyond the bank are discarded") {
  Machine x2 = indeterminate(2);
  AddressTable table;
  Address a = table.intern(x2);
  CHECK(x2.with_register(3, a) == x2);
  CHECK(x2.with_register(0, a) != x2);
}

TEST_CASE("program grammar shape is enforced") {
  CHECK_THROWS_AS(Program::of({Call{0}, Load{1}}), SyntaxError);
  CHECK_THROWS_AS(Program::of({App{0, 0, 0}, Load{1}}), SyntaxError);
  CHECK_THROWS_AS(Program::of({Call{0}, Call{0}}), SyntaxError);
  CHECK(Program::of({}).empty());
}
