#pragma once
// Session files: ordered machine, term and context definitions, processed
// strictly top to bottom against one address table.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "avm/atm.hpp"
#include "avm/contexts.hpp"
#include "avm/core.hpp"
#include "avm/errors.hpp"

namespace avm {

class Term;

// Standard machines available by name in any session: K, S, I, D, O, K', 1,
// and the indeterminates x0, x1, ... Interned on first use.
std::optional<Address> builtin_machine(AddressTable& table,
                                       const std::string& name);

struct DefinitionReport {
  std::string name;
  std::optional<ValidityIssue> issue;  // set when the machine was rejected

  bool ok() const { return !issue.has_value(); }
};

class Session {
 public:
  Session() : ext_(std::make_unique<ExtTable>(table_)) {}
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  AddressTable& table() { return table_; }
  ExtTable& ext() { return *ext_; }

  // Per-definition results of the last load, in file order.
  const std::vector<DefinitionReport>& reports() const { return reports_; }
  bool all_valid() const;

  // Name bound by a definition or available as a builtin. Definitions shadow
  // builtins; only earlier definitions are visible (no forward references).
  std::optional<Address> resolve(const std::string& name);
  std::optional<ExtAddress> resolve_context(const std::string& name) const;

  // Display name for an address, when one of the session names denotes it.
  std::optional<std::string> name_of(Address a) const;

  // Replaces free names that denote machines with address constants. A name
  // like "KI" whose characters all denote machines is read as the
  // juxtaposition K I. Names that stay unresolved are left free.
  Term close_term(const Term& t);

  const std::vector<std::string>& definition_order() const { return order_; }

  // Parses and processes a whole session text. Invalid machine definitions
  // are recorded in reports() and left unbound; syntax errors throw.
  void load(std::string_view text);

 private:
  void define_machine(const std::string& name, Address a);

  AddressTable table_;
  std::unique_ptr<ExtTable> ext_;
  std::map<std::string, Address> machines_;
  std::map<std::string, ExtAddress> contexts_;
  std::map<Address::Id, std::string> names_;
  std::vector<std::string> order_;
  std::vector<DefinitionReport> reports_;
};

}  // namespace avm
