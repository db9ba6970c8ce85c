#include "avm/text.hpp"

#include <ostream>
#include <sstream>

namespace avm {

std::string format_program(const Program& p) {
  std::string out;
  for (const Instruction& ins : p.instructions()) {
    if (!out.empty()) out += "; ";
    std::visit(
        [&out](const auto& op) {
          using T = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<T, Load>) {
            out += "Load " + std::to_string(op.reg);
          } else if constexpr (std::is_same_v<T, App>) {
            out += "App " + std::to_string(op.lhs) + " " +
                   std::to_string(op.rhs) + " " + std::to_string(op.dst);
          } else {
            out += "Call " + std::to_string(op.reg);
          }
        },
        ins);
  }
  return out;
}

namespace {

std::string render_address(Address a, const NameResolver& names, bool block) {
  if (names) {
    if (auto name = names(a)) return "@" + *name;
  }
  return block ? "@" + std::to_string(a.id()) : std::to_string(a.id());
}

std::string render_regs(const Machine& m, const NameResolver& names,
                        bool block) {
  std::string out = "[";
  bool first = true;
  for (const RegisterCell& cell : m.registers()) {
    if (!first) out += ", ";
    first = false;
    out += cell ? render_address(*cell, names, block) : "_";
  }
  return out + "]";
}

std::string render_tape(const Tape& t, const NameResolver& names, bool block) {
  std::string out = "[";
  bool first = true;
  for (Address a : t) {
    if (!first) out += ", ";
    first = false;
    out += render_address(a, names, block);
  }
  return out + "]";
}

}  // namespace

std::string format_machine_inline(const Machine& m) {
  return "regs=" + render_regs(m, {}, false) + " prog=\"" +
         format_program(m.program()) + "\" tape=" +
         render_tape(m.tape(), {}, false);
}

std::string format_machine_block(const std::string& name, const Machine& m,
                                 const NameResolver& names) {
  return "machine " + name + " { regs = " + render_regs(m, names, true) +
         "; prog = \"" + format_program(m.program()) +
         "\"; tape = " + render_tape(m.tape(), names, true) + "; }";
}

void dump_table(const AddressTable& table, std::ostream& out) {
  std::vector<Machine> machines = table.snapshot();
  for (std::size_t id = 0; id < machines.size(); ++id) {
    out << id << ": " << format_machine_inline(machines[id]) << "\n";
  }
}

}  // namespace avm
