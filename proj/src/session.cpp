#include "avm/session.hpp"

#include <cctype>
#include <charconv>

#include "avm/combinators.hpp"
#include "avm/lambda.hpp"
#include "avm/validator.hpp"

namespace avm {

std::optional<Address> builtin_machine(AddressTable& table,
                                       const std::string& name) {
  if (name == "K") return table.intern(k_machine());
  if (name == "K'") return table.intern(k_prime_machine());
  if (name == "S") return table.intern(s_machine());
  if (name == "I") return table.intern(identity_machine(table));
  if (name == "D") return table.intern(delta_machine());
  if (name == "O") return table.intern(omega_machine(table));
  if (name == "1") return table.intern(one_machine());
  if (name.size() > 1 && name[0] == 'x') {
    std::size_t n = 0;
    auto res = std::from_chars(name.data() + 1, name.data() + name.size(), n);
    if (res.ec == std::errc() && res.ptr == name.data() + name.size()) {
      return table.intern(indeterminate(n));
    }
  }
  return std::nullopt;
}

bool Session::all_valid() const {
  for (const DefinitionReport& r : reports_) {
    if (!r.ok()) return false;
  }
  return true;
}

std::optional<Address> Session::resolve(const std::string& name) {
  auto it = machines_.find(name);
  if (it != machines_.end()) return it->second;
  return builtin_machine(table_, name);
}

std::optional<ExtAddress> Session::resolve_context(
    const std::string& name) const {
  auto it = contexts_.find(name);
  if (it == contexts_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> Session::name_of(Address a) const {
  auto it = names_.find(a.id());
  if (it == names_.end()) return std::nullopt;
  return it->second;
}

void Session::define_machine(const std::string& name, Address a) {
  machines_.insert_or_assign(name, a);
  names_.emplace(a.id(), name);  // first name wins
  order_.push_back(name);
}

Term Session::close_term(const Term& t) {
  Term closed = t;
  for (const std::string& v : free_vars(t)) {
    if (auto a = resolve(v)) {
      closed = substitute(closed, v, Term::constant(*a));
      continue;
    }
    std::optional<Term> spelled;
    for (char c : v) {
      auto part = resolve(std::string(1, c));
      if (!part) {
        spelled.reset();
        break;
      }
      Term atom = Term::constant(*part);
      spelled = spelled ? Term::app(std::move(*spelled), std::move(atom))
                        : std::move(atom);
    }
    if (spelled) closed = substitute(closed, v, *spelled);
  }
  return closed;
}

namespace {

struct SessionCursor {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws_and_comments() {
    for (;;) {
      while (pos < text.size() &&
             std::isspace(static_cast<unsigned char>(text[pos]))) {
        ++pos;
      }
      if (pos < text.size() && text[pos] == '#') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
        continue;
      }
      return;
    }
  }

  bool done() {
    skip_ws_and_comments();
    return pos >= text.size();
  }

  bool peek(char c) {
    skip_ws_and_comments();
    return pos < text.size() && text[pos] == c;
  }

  void expect(char c) {
    skip_ws_and_comments();
    if (pos >= text.size() || text[pos] != c) {
      throw SyntaxError(std::string("expected '") + c + "'", pos);
    }
    ++pos;
  }

  bool try_eat(char c) {
    skip_ws_and_comments();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  std::string ident() {
    skip_ws_and_comments();
    std::size_t start = pos;
    auto ident_char = [](char ch) {
      return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' ||
             ch == '\'';
    };
    while (pos < text.size() && ident_char(text[pos])) ++pos;
    if (start == pos) throw SyntaxError("expected a name", pos);
    return std::string(text.substr(start, pos - start));
  }

  std::string quoted() {
    expect('"');
    std::size_t start = pos;
    while (pos < text.size() && text[pos] != '"') ++pos;
    if (pos >= text.size()) throw SyntaxError("unterminated string", start);
    std::string out(text.substr(start, pos - start));
    ++pos;
    return out;
  }

  std::string keyword() {
    skip_ws_and_comments();
    std::size_t start = pos;
    while (pos < text.size() &&
           std::isalpha(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
    return std::string(text.substr(start, pos - start));
  }

  // Text up to the next ';' (required).
  std::string until_semicolon() {
    skip_ws_and_comments();
    std::size_t start = pos;
    while (pos < text.size() && text[pos] != ';') ++pos;
    if (pos >= text.size()) throw SyntaxError("expected ';'", start);
    std::string out(text.substr(start, pos - start));
    ++pos;
    return out;
  }
};

}  // namespace

void Session::load(std::string_view text) {
  reports_.clear();
  SessionCursor cur{text};
  if (cur.done()) return;  // an empty session defines nothing

  std::size_t header_at = cur.pos;
  if (cur.keyword() != "addrvm" || cur.ident() != "v1") {
    throw SyntaxError("expected 'addrvm v1' header", header_at);
  }

  auto machine_ref = [&](const std::string& name,
                         std::size_t at) -> Address {
    if (auto a = resolve(name)) return *a;
    throw SyntaxError("unknown machine @" + name, at);
  };

  while (!cur.done()) {
    std::size_t at = cur.pos;
    std::string kw = cur.keyword();
    if (kw == "machine") {
      std::string name = cur.ident();
      cur.expect('{');

      if (cur.keyword() != "regs") throw SyntaxError("expected 'regs'", at);
      cur.expect('=');
      cur.expect('[');
      std::vector<RegisterCell> regs;
      while (!cur.try_eat(']')) {
        if (!regs.empty()) cur.expect(',');
        if (cur.try_eat('_')) {
          regs.push_back(std::nullopt);
        } else {
          cur.expect('@');
          regs.push_back(machine_ref(cur.ident(), cur.pos));
        }
      }
      cur.expect(';');

      if (cur.keyword() != "prog") throw SyntaxError("expected 'prog'", at);
      cur.expect('=');
      Program program = parse_program(cur.quoted());
      cur.expect(';');

      if (cur.keyword() != "tape") throw SyntaxError("expected 'tape'", at);
      cur.expect('=');
      cur.expect('[');
      Tape tape;
      while (!cur.try_eat(']')) {
        if (!tape.empty()) cur.expect(',');
        cur.expect('@');
        tape.push_back(machine_ref(cur.ident(), cur.pos));
      }
      cur.expect(';');
      cur.expect('}');

      if (auto issue = check_valid(program, regs)) {
        reports_.push_back(DefinitionReport{name, issue});
        continue;
      }
      Address a =
          table_.intern(Machine::make(std::move(regs), program, tape));
      define_machine(name, a);
      reports_.push_back(DefinitionReport{name, std::nullopt});
    } else if (kw == "term") {
      std::string name = cur.ident();
      cur.expect('=');
      std::string body = cur.until_semicolon();
      Term t = parse_term(body, [this](const std::string& n) {
        return resolve(n);
      });
      Address a = interpret(table_, close_term(t), {});
      define_machine(name, a);
      reports_.push_back(DefinitionReport{name, std::nullopt});
    } else if (kw == "context") {
      std::string name = cur.ident();
      cur.expect('{');
      auto ext_ref = [&]() -> ExtAddress {
        if (cur.try_eat('@')) {
          return ExtAddress::base(machine_ref(cur.ident(), cur.pos));
        }
        if (cur.try_eat('^')) {
          std::string n = cur.ident();
          if (auto c = resolve_context(n)) return *c;
          throw SyntaxError("unknown context ^" + n, cur.pos);
        }
        std::size_t kw_at = cur.pos;
        if (cur.keyword() == "xi") {
          return ext_->intern(ExtendedMachine::hole({}));
        }
        throw SyntaxError("expected @name, ^name or xi", kw_at);
      };

      ExtendedMachine machine = ExtendedMachine::hole({});
      std::size_t shape_at = cur.pos;
      std::string field = cur.keyword();
      if (field == "hole") {
        cur.expect(';');
        if (cur.keyword() != "tape") throw SyntaxError("expected 'tape'", at);
        cur.expect('=');
        cur.expect('[');
        ExtTape tape;
        while (!cur.try_eat(']')) {
          if (!tape.empty()) cur.expect(',');
          tape.push_back(ext_ref());
        }
        cur.expect(';');
        machine = ExtendedMachine::hole(std::move(tape));
      } else if (field == "regs") {
        cur.expect('=');
        cur.expect('[');
        std::vector<ExtCell> regs;
        while (!cur.try_eat(']')) {
          if (!regs.empty()) cur.expect(',');
          if (cur.try_eat('_')) {
            regs.push_back(std::nullopt);
          } else {
            regs.push_back(ext_ref());
          }
        }
        cur.expect(';');
        if (cur.keyword() != "prog") throw SyntaxError("expected 'prog'", at);
        cur.expect('=');
        Program program = parse_program(cur.quoted());
        cur.expect(';');
        if (cur.keyword() != "tape") throw SyntaxError("expected 'tape'", at);
        cur.expect('=');
        cur.expect('[');
        ExtTape tape;
        while (!cur.try_eat(']')) {
          if (!tape.empty()) cur.expect(',');
          tape.push_back(ext_ref());
        }
        cur.expect(';');
        machine =
            ExtendedMachine::plain(std::move(regs), program, std::move(tape));
      } else {
        throw SyntaxError("expected 'hole' or 'regs'", shape_at);
      }
      cur.expect('}');
      contexts_.insert_or_assign(name, ext_->intern(machine));
      order_.push_back(name);
      reports_.push_back(DefinitionReport{name, std::nullopt});
    } else {
      throw SyntaxError("expected 'machine', 'term' or 'context'", at);
    }
  }
}

}  // namespace avm
