#include "avm/ae_equiv.hpp"

#include <optional>

#include "avm/combinators.hpp"
#include "avm/vm.hpp"

namespace avm {

Address fresh_indeterminate(AddressTable& table) {
  return table.intern(indeterminate(table.max_register_count()));
}

namespace {

// x_n is the machine with n+1 empty registers, empty program, empty tape.
std::optional<std::size_t> indeterminate_index(const Machine& m) {
  if (m.register_count() == 0 || !m.program().empty() || !m.tape().empty()) {
    return std::nullopt;
  }
  for (const RegisterCell& cell : m.registers()) {
    if (cell) return std::nullopt;
  }
  return m.register_count() - 1;
}

std::string outcome_name(const Outcome& o) {
  switch (o.kind) {
    case OutcomeKind::Final:
      if (auto i = indeterminate_index(o.machine)) {
        return "x" + std::to_string(*i);
      }
      return "final";
    case OutcomeKind::Stuck:
      return "stuck";
    case OutcomeKind::Cycle:
      return "cycle";
    case OutcomeKind::OutOfFuel:
      return "out-of-fuel";
  }
  return "?";
}

// The discriminator examined after replaying the witness path. Kept in one
// place so ae_check and replay_distinct cannot drift apart.
enum class Discriminator { None, IndetMismatch, IndetVsOther, StuckVsCycle };

Discriminator discriminate(const Outcome& ra, const Outcome& rb,
                           bool strict_distinct) {
  if (ra.terminated() != rb.terminated()) {
    OutcomeKind other = ra.terminated() ? rb.kind : ra.kind;
    if (strict_distinct && other == OutcomeKind::Cycle) {
      return Discriminator::StuckVsCycle;
    }
    return Discriminator::None;
  }
  if (!ra.terminated()) return Discriminator::None;
  auto ia = indeterminate_index(ra.machine);
  auto ib = indeterminate_index(rb.machine);
  if (ia && ib) {
    return *ia == *ib ? Discriminator::None : Discriminator::IndetMismatch;
  }
  if (ia || ib) return Discriminator::IndetVsOther;
  return Discriminator::None;
}

}  // namespace

AeVerdict ae_check(AddressTable& table, Address a, Address b, std::size_t fuel,
                   std::size_t depth, bool strict_distinct) {
  if (!table.issued(a)) throw DanglingAddress(a.id());
  if (!table.issued(b)) throw DanglingAddress(b.id());

  std::vector<Address> applied;
  for (;;) {
    if (a == b) {
      return AeVerdict{AeVerdict::Kind::EquivUpTo, applied.size(), {}, ""};
    }
    Outcome ra = run(table, table.lookup(a), fuel);
    Outcome rb = run(table, table.lookup(b), fuel);

    Discriminator d = discriminate(ra, rb, strict_distinct);
    if (d != Discriminator::None) {
      std::string what = outcome_name(ra) + " vs " + outcome_name(rb);
      return AeVerdict{AeVerdict::Kind::Distinct, applied.size(),
                       AeWitness{applied, what}, ""};
    }

    if (!ra.terminated() || !rb.terminated()) {
      bool fuel_out = ra.kind == OutcomeKind::OutOfFuel ||
                      rb.kind == OutcomeKind::OutOfFuel;
      return AeVerdict{AeVerdict::Kind::Unknown, applied.size(),
                       AeWitness{applied, ""}, fuel_out ? "fuel" : "cycle"};
    }

    // Both terminated on equal indeterminates: genuinely equivalent.
    if (indeterminate_index(ra.machine)) {
      return AeVerdict{AeVerdict::Kind::EquivUpTo, applied.size(), {}, ""};
    }

    EvalVerdict ev = eval_equiv(table, a, b, fuel);
    if (ev.verdict == Equivalence::Equiv) {
      return AeVerdict{AeVerdict::Kind::EquivUpTo, applied.size(), {}, ""};
    }

    bool sa = is_stuck(ra.machine);
    bool sb = is_stuck(rb.machine);
    if (sa && sb) {
      if (depth == 0) {
        return AeVerdict{AeVerdict::Kind::Unknown, applied.size(),
                         AeWitness{applied, ""}, "depth"};
      }
      Address fresh = fresh_indeterminate(table);
      applied.push_back(fresh);
      a = table.apply(a, fresh);
      b = table.apply(b, fresh);
      --depth;
      continue;
    }
    // Stuck vs non-indeterminate final (or two distinct non-indeterminate
    // finals): not settled by the bounded rules.
    return AeVerdict{AeVerdict::Kind::Unknown, applied.size(),
                     AeWitness{applied, ""},
                     sa != sb ? "stuck-vs-final" : "final-shape"};
  }
}

bool replay_distinct(AddressTable& table, Address a, Address b,
                     const AeWitness& witness, std::size_t fuel,
                     bool strict_distinct) {
  for (Address arg : witness.applied) {
    a = table.apply(a, arg);
    b = table.apply(b, arg);
  }
  Outcome ra = run(table, table.lookup(a), fuel);
  Outcome rb = run(table, table.lookup(b), fuel);
  if (discriminate(ra, rb, strict_distinct) == Discriminator::None) {
    return false;
  }
  return outcome_name(ra) + " vs " + outcome_name(rb) == witness.outcome;
}

}  // namespace avm
