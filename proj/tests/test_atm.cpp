#include "doctest.h"

#include <thread>

#include "avm/atm.hpp"
#include "avm/combinators.hpp"
#include "support.hpp"

using namespace avm;

TEST_CASE("interning is idempotent and injective") {
  AddressTable table;
  CHECK(table.intern(k_machine()) == table.intern(k_machine()));
  CHECK(table.intern(k_machine()) != table.intern(s_machine()));
  CHECK(table.intern(indeterminate(3)) != table.intern(indeterminate(4)));
}

TEST_CASE("lookup round-trips") {
  AddressTable table;
  Address k = table.intern(k_machine());
  CHECK(table.lookup(k) == k_machine());
  CHECK(table.intern(table.lookup(k)) == k);
  CHECK_THROWS_AS(table.lookup(Address(999)), DanglingAddress);
}

TEST_CASE("apply appends one tape entry without executing anything") {
  AddressTable table;
  Address k = table.intern(k_machine());
  Address a = table.intern(indeterminate(0));
  Address b = table.intern(indeterminate(1));

  Address kab = table.apply(table.apply(k, a), b);
  CHECK(table.lookup(kab) == append_tape(k_machine(), Tape{a, b}));

  SUBCASE("applying D to itself builds O") {
    Address d = table.intern(delta_machine());
    CHECK(table.apply(d, d) == table.intern(omega_machine(table)));
  }
  SUBCASE("apply is deterministic") {
    CHECK(table.apply(k, a) == table.apply(k, a));
  }
  SUBCASE("apply rejects unissued addresses") {
    CHECK_THROWS_AS(table.apply(k, Address(12345)), DanglingAddress);
  }
}

TEST_CASE("interning rejects machines over foreign addresses") {
  AddressTable table;
  Machine bad = Machine::make({RegisterCell(Address(7))},
                              Program::of({Call{0}}), {});
  CHECK_THROWS_AS(table.intern(bad), DanglingAddress);
}

TEST_CASE("concurrent callers get stable ids") {
  AddressTable table;
  Address k = table.intern(k_machine());
  constexpr int kThreads = 4;
  constexpr int kRounds = 200;
  std::vector<std::vector<Address>> results(kThreads);
  std::vector<std::thread> workers;
  for (int t = 0; t < kThreads; ++t) {
    workers.emplace_back([&table, &results, k, t] {
      Address cur = k;
      for (int i = 0; i < kRounds; ++i) {
        cur = table.apply(k, cur);
        results[t].push_back(cur);
        table.intern(indeterminate(i % 8));
      }
    });
  }
  for (std::thread& w : workers) w.join();
  // Every thread walked the same chain K, K.(K), K.(K.(K)), ... and must
  // have observed identical addresses for identical machines.
  for (int t = 1; t < kThreads; ++t) {
    CHECK(results[t] == results[0]);
  }
  CHECK(table.lookup(results[0].back()).tape().size() == 1);
}

TEST_CASE("the reference graph stays acyclic and bijective under load") {
  AddressTable table;
  testing::MachineGen gen(table, 5, /*reducible_pool=*/true);
  for (int i = 0; i < 200; ++i) table.intern(gen.random_machine());

  std::vector<Machine> all = table.snapshot();
  for (std::size_t id = 0; id < all.size(); ++id) {
    // Bijectivity on the allocated prefix.
    CHECK(table.intern(all[id]) == Address(id));
    CHECK(table.lookup(Address(id)) == all[id]);
    // Every reference points strictly downwards.
    for (const RegisterCell& cell : all[id].registers()) {
      if (cell) CHECK(cell->id() < id);
    }
    for (Address a : all[id].tape()) CHECK(a.id() < id);
  }
}
