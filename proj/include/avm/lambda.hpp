#pragma once
// Lambda-calculus frontend: terms with address constants, capture-avoiding
// substitution, a beta-reduction oracle, and the compiler into machines.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "avm/atm.hpp"
#include "avm/core.hpp"
#include "avm/errors.hpp"

namespace avm {

// Immutable term over variables, address constants, abstraction and
// application. Equality is alpha-equivalence.
class Term {
 public:
  enum class Kind { Var, Const, Abs, App };

  static Term var(std::string name);
  static Term constant(Address a);
  static Term abs(std::string binder, Term body);
  static Term app(Term fn, Term arg);

  Kind kind() const;
  const std::string& name() const;  // Var, Abs binder
  Address address() const;          // Const
  Term body() const;                // Abs
  Term fn() const;                  // App
  Term arg() const;                 // App

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

std::string to_string(const Term& t);

// Maps `@name` constants to addresses while parsing.
using ConstResolver =
    std::function<std::optional<Address>(const std::string&)>;

// Standard lambda syntax: `\x.M` or the unicode lambda, space-separated
// multi-binders (`\x y.M`), juxtaposition application, parentheses, `@name`
// or `@<id>` constants. Throws SyntaxError.
Term parse_term(std::string_view text, const ConstResolver& consts = {});

std::set<std::string> free_vars(const Term& t);

// Capture-avoiding substitution of `replacement` for free occurrences of x.
Term substitute(const Term& t, const std::string& x, const Term& replacement);

// Leftmost-outermost beta-normal form, or nullopt when `fuel` contractions
// do not reach one. Independent of the machine semantics; used as an oracle.
std::optional<Term> beta_normalize(const Term& t, std::size_t fuel);

// Pr(i, n), 1 <= i <= n: projects the i-th of n tape arguments.
Machine pr_machine(std::size_t i, std::size_t n);

// Cons(a, n): discards n tape arguments and runs the machine at a.
Machine cons_machine(Address a, std::size_t n);

// Apply_n: loads n arguments, distributes them to both stored machines, and
// applies the results.
Program apply_program(std::size_t n);

// Compiles t under the ordered context ctx (which must cover its free
// variables): variables become projections, constants become Cons machines,
// applications become Apply_n machines over the compiled parts, abstractions
// extend the context. Sub-machines are interned as they are built.
Machine compile(AddressTable& table, const Term& t,
                const std::vector<std::string>& ctx);

using Valuation = std::map<std::string, Address>;

// Representative of the model interpretation: the compiled machine under the
// lexicographically sorted free-variable context, applied to the valuation.
Address interpret(AddressTable& table, const Term& t, const Valuation& rho);

// Same, under an explicit context order.
Address interpret(AddressTable& table, const Term& t, const Valuation& rho,
                  const std::vector<std::string>& ctx);

}  // namespace avm
