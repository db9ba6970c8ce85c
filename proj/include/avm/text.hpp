#pragma once
// Textual rendering of programs, machines and the address table.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "avm/atm.hpp"
#include "avm/core.hpp"

namespace avm {

// "Load 0; App 0 1 2; Call 2"; the empty program renders as "".
std::string format_program(const Program& p);

// One-line form with raw address ids: regs=[_, 3] prog="Load 0" tape=[2]
std::string format_machine_inline(const Machine& m);

// Resolves an address to a display name; returns nullopt to fall back to the
// raw id.
using NameResolver = std::function<std::optional<std::string>(Address)>;

// Session-style block:
//   machine NAME { regs = [_, @a]; prog = "Load 0; Call 0"; tape = [@a]; }
// Addresses without a resolvable name render as @<id>.
std::string format_machine_block(const std::string& name, const Machine& m,
                                 const NameResolver& names = {});

// One line per id, in allocation order:
//   id: regs=[...] prog="..." tape=[...]
void dump_table(const AddressTable& table, std::ostream& out);

}  // namespace avm
