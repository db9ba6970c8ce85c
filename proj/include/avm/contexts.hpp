#pragma once
// Extended machines with a hole, hole-plugging, occurrence counting, and the
// underlined head reduction used to track a designated sub-machine.

#include <cstddef>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <variant>
#include <vector>

#include "avm/atm.hpp"
#include "avm/core.hpp"
#include "avm/vm.hpp"

namespace avm {

// Either a base address or an id from the disjoint extended space.
class ExtAddress {
 public:
  enum class Kind { Base, Ext };

  static ExtAddress base(Address a) { return ExtAddress(Kind::Base, a.id()); }
  static ExtAddress ext(std::uint64_t id) { return ExtAddress(Kind::Ext, id); }

  Kind kind() const noexcept { return kind_; }
  bool is_base() const noexcept { return kind_ == Kind::Base; }
  Address base_address() const { return Address(id_); }
  std::uint64_t ext_id() const noexcept { return id_; }

  friend constexpr auto operator<=>(const ExtAddress&,
                                    const ExtAddress&) noexcept = default;

 private:
  ExtAddress(Kind kind, std::uint64_t id) : kind_(kind), id_(id) {}

  Kind kind_;
  std::uint64_t id_;
};

using ExtCell = std::optional<ExtAddress>;
using ExtTape = std::vector<ExtAddress>;

// Either the hole followed by a tape, or an ordinary machine shape over
// extended addresses. Plain programs must be valid for their register banks.
class ExtendedMachine {
 public:
  static ExtendedMachine hole(ExtTape tape);
  // Throws ValidityError when the program is invalid for the registers.
  static ExtendedMachine plain(std::vector<ExtCell> registers, Program program,
                               ExtTape tape);
  // A base machine viewed as an extended one.
  static ExtendedMachine lift(const Machine& m);

  bool is_hole() const noexcept { return std::holds_alternative<Hole>(v_); }
  const ExtTape& tape() const noexcept;
  const std::vector<ExtCell>& registers() const;  // plain only
  const Program& program() const;                 // plain only
  std::size_t register_count() const;

  // True when plain and every address in it is a base address.
  bool all_base() const;
  // Conversion to a base machine; requires all_base().
  Machine to_machine() const;

  friend bool operator==(const ExtendedMachine&,
                         const ExtendedMachine&) = default;

 private:
  struct Hole {
    ExtTape tape;
    friend bool operator==(const Hole&, const Hole&) = default;
  };
  struct Plain {
    std::vector<ExtCell> registers;
    Program program;
    ExtTape tape;
    friend bool operator==(const Plain&, const Plain&) = default;
  };

  explicit ExtendedMachine(std::variant<Hole, Plain> v) : v_(std::move(v)) {}

  std::variant<Hole, Plain> v_;
};

struct ExtMachineHash {
  std::size_t operator()(const ExtendedMachine& x) const noexcept;
};

// Interner for the extended address space, layered over a base table so that
// extended machines which are really base machines keep their base address.
class ExtTable {
 public:
  explicit ExtTable(AddressTable& base) : base_(base) {}
  ExtTable(const ExtTable&) = delete;
  ExtTable& operator=(const ExtTable&) = delete;

  ExtAddress intern(const ExtendedMachine& x);
  ExtendedMachine lookup(ExtAddress a) const;
  ExtAddress apply(ExtAddress a, ExtAddress b);

  AddressTable& base() { return base_; }

 private:
  mutable std::mutex mutex_;
  AddressTable& base_;
  std::vector<ExtendedMachine> forward_;
  std::unordered_map<ExtendedMachine, std::uint64_t, ExtMachineHash> backward_;
};

// Number of hole occurrences, counting recursively through dereferenced
// addresses. Always finite under the incremental interner.
std::size_t occ(ExtTable& ext, const ExtendedMachine& x);

// Substitutes m for every hole occurrence, recursively; the result and all
// machines created along the way are interned in the base table.
Machine plug(ExtTable& ext, const ExtendedMachine& c, const Machine& m);

// One step of m-underlined head reduction: the hole form substitutes m and
// resumes; plain forms take the ordinary head step over extended addresses.
// nullopt exactly on final plain states.
std::optional<ExtendedMachine> underlined_step(ExtTable& ext,
                                               const ExtendedMachine& c,
                                               const Machine& m);

struct ExtRun {
  std::vector<ExtendedMachine> states;
  OutcomeKind end;
};

// One-line form; extended ids are prefixed with '^', the hole form renders
// as `hole tape=[...]`.
std::string format_ext_machine_inline(const ExtendedMachine& x);

// Iterated underlined reduction with literal revisit detection.
ExtRun underlined_run(ExtTable& ext, ExtendedMachine c, const Machine& m,
                      std::size_t fuel);

// Runs the plugged machine and the underlined context in lockstep and checks
// that the underlined trace, plugged, matches the plugged trace (hole
// substitutions plug to the same machine and are skipped), with agreeing
// final results. True when verified within fuel.
bool correspondence_check(ExtTable& ext, const ExtendedMachine& c,
                          const Machine& m, std::size_t fuel);

}  // namespace avm
