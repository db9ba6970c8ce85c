#include "avm/lambda.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <utility>

namespace avm {

struct Term::Node {
  Kind kind;
  std::string name;          // Var, Abs
  Address address{0};        // Const
  std::shared_ptr<const Node> left;   // Abs body, App fn
  std::shared_ptr<const Node> right;  // App arg
};

Term Term::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::constant(Address a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->address = a;
  return Term(std::move(n));
}

Term Term::abs(std::string binder, Term body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Abs;
  n->name = std::move(binder);
  n->left = std::move(body.node_);
  return Term(std::move(n));
}

Term Term::app(Term fn, Term arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::App;
  n->left = std::move(fn.node_);
  n->right = std::move(arg.node_);
  return Term(std::move(n));
}

Term::Kind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
Address Term::address() const { return node_->address; }
Term Term::body() const { return Term(node_->left); }
Term Term::fn() const { return Term(node_->left); }
Term Term::arg() const { return Term(node_->right); }

// Alpha-equivalence via parallel traversal with binder environments.
static bool alpha_equal(const Term& a, const Term& b,
                        std::vector<std::pair<std::string, std::string>>& env) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Var: {
      for (auto it = env.rbegin(); it != env.rend(); ++it) {
        bool la = it->first == a.name();
        bool lb = it->second == b.name();
        if (la || lb) return la && lb;
      }
      return a.name() == b.name();
    }
    case Term::Kind::Const:
      return a.address() == b.address();
    case Term::Kind::Abs: {
      env.emplace_back(a.name(), b.name());
      bool eq = alpha_equal(a.body(), b.body(), env);
      env.pop_back();
      return eq;
    }
    case Term::Kind::App:
      return alpha_equal(a.fn(), b.fn(), env) &&
             alpha_equal(a.arg(), b.arg(), env);
  }
  return false;
}

bool operator==(const Term& a, const Term& b) {
  std::vector<std::pair<std::string, std::string>> env;
  return alpha_equal(a, b, env);
}

std::string to_string(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return t.name();
    case Term::Kind::Const:
      return "@" + std::to_string(t.address().id());
    case Term::Kind::Abs:
      return "\\" + t.name() + "." + to_string(t.body());
    case Term::Kind::App: {
      std::string f = to_string(t.fn());
      if (t.fn().kind() == Term::Kind::Abs) f = "(" + f + ")";
      std::string a = to_string(t.arg());
      if (t.arg().kind() == Term::Kind::Abs ||
          t.arg().kind() == Term::Kind::App) {
        a = "(" + a + ")";
      }
      return f + " " + a;
    }
  }
  return "";
}

namespace {

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class TermParser {
 public:
  TermParser(std::string_view text, const ConstResolver& consts)
      : text_(text), consts_(consts) {}

  Term parse() {
    Term t = parse_term();
    skip_ws();
    if (pos_ < text_.size()) throw SyntaxError("trailing input", pos_);
    return t;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool peek_lambda() {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '\\') return true;
    // UTF-8 lambda: 0xCE 0xBB
    return pos_ + 1 < text_.size() &&
           static_cast<unsigned char>(text_[pos_]) == 0xCE &&
           static_cast<unsigned char>(text_[pos_ + 1]) == 0xBB;
  }

  bool eat_lambda() {
    if (!peek_lambda()) return false;
    pos_ += text_[pos_] == '\\' ? 1 : 2;
    return true;
  }

  std::string name() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ >= text_.size() ||
        !(std::isalpha(static_cast<unsigned char>(text_[pos_])) ||
          text_[pos_] == '_')) {
      throw SyntaxError("expected a name", pos_);
    }
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  Term parse_term() {
    if (eat_lambda()) {
      std::vector<std::string> binders;
      binders.push_back(name());
      for (;;) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '.') {
          ++pos_;
          break;
        }
        binders.push_back(name());
      }
      Term body = parse_term();
      for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
        body = Term::abs(*it, std::move(body));
      }
      return body;
    }
    return parse_application();
  }

  Term parse_application() {
    std::optional<Term> acc;
    for (;;) {
      std::optional<Term> atom = parse_atom();
      if (!atom) break;
      acc = acc ? Term::app(std::move(*acc), std::move(*atom))
                : std::move(*atom);
    }
    if (!acc) throw SyntaxError("expected a term", pos_);
    return *acc;
  }

  std::optional<Term> parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) return std::nullopt;
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Term inner = parse_term();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')') {
        throw SyntaxError("expected ')'", pos_);
      }
      ++pos_;
      return inner;
    }
    if (c == '@') {
      std::size_t at = pos_;
      ++pos_;
      if (pos_ < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          ++pos_;
        }
        Address::Id id = 0;
        std::from_chars(text_.data() + start, text_.data() + pos_, id);
        return Term::constant(Address(id));
      }
      std::string n = name();
      if (consts_) {
        if (auto a = consts_(n)) return Term::constant(*a);
      }
      throw SyntaxError("unknown constant @" + n, at);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return Term::var(name());
    }
    // A lambda in argument position extends to the end of the enclosing term.
    if (peek_lambda()) return parse_term();
    return std::nullopt;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  const ConstResolver& consts_;
};

}  // namespace

Term parse_term(std::string_view text, const ConstResolver& consts) {
  return TermParser(text, consts).parse();
}

static void collect_free(const Term& t, std::vector<std::string>& bound,
                         std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::Var:
      if (std::find(bound.begin(), bound.end(), t.name()) == bound.end()) {
        out.insert(t.name());
      }
      return;
    case Term::Kind::Const:
      return;
    case Term::Kind::Abs: {
      bound.push_back(t.name());
      collect_free(t.body(), bound, out);
      bound.pop_back();
      return;
    }
    case Term::Kind::App:
      collect_free(t.fn(), bound, out);
      collect_free(t.arg(), bound, out);
      return;
  }
}

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free(t, bound, out);
  return out;
}

namespace {

std::string fresh_name(const std::string& base,
                       const std::set<std::string>& avoid) {
  std::string candidate = base + "'";
  while (avoid.contains(candidate)) candidate += "'";
  return candidate;
}

}  // namespace

Term substitute(const Term& t, const std::string& x, const Term& replacement) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return t.name() == x ? replacement : t;
    case Term::Kind::Const:
      return t;
    case Term::Kind::App:
      return Term::app(substitute(t.fn(), x, replacement),
                       substitute(t.arg(), x, replacement));
    case Term::Kind::Abs: {
      if (t.name() == x) return t;
      std::set<std::string> fv_repl = free_vars(replacement);
      if (fv_repl.contains(t.name())) {
        std::set<std::string> avoid = fv_repl;
        for (const std::string& v : free_vars(t.body())) avoid.insert(v);
        avoid.insert(x);
        std::string renamed = fresh_name(t.name(), avoid);
        Term body = substitute(t.body(), t.name(), Term::var(renamed));
        return Term::abs(renamed, substitute(body, x, replacement));
      }
      return Term::abs(t.name(), substitute(t.body(), x, replacement));
    }
  }
  return t;
}

namespace {

// Contracts the leftmost-outermost beta redex, if any.
std::optional<Term> contract_one(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const:
      return std::nullopt;
    case Term::Kind::Abs: {
      if (auto body = contract_one(t.body())) {
        return Term::abs(t.name(), std::move(*body));
      }
      return std::nullopt;
    }
    case Term::Kind::App: {
      if (t.fn().kind() == Term::Kind::Abs) {
        return substitute(t.fn().body(), t.fn().name(), t.arg());
      }
      if (auto f = contract_one(t.fn())) {
        return Term::app(std::move(*f), t.arg());
      }
      if (auto a = contract_one(t.arg())) {
        return Term::app(t.fn(), std::move(*a));
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Term> beta_normalize(const Term& t, std::size_t fuel) {
  Term cur = t;
  for (std::size_t i = 0; i <= fuel; ++i) {
    std::optional<Term> next = contract_one(cur);
    if (!next) return cur;
    if (i == fuel) break;
    cur = std::move(*next);
  }
  return std::nullopt;
}

Machine pr_machine(std::size_t i, std::size_t n) {
  if (i < 1 || i > n) {
    throw std::invalid_argument("pr_machine requires 1 <= i <= n");
  }
  std::vector<Instruction> instrs;
  for (std::size_t k = 1; k < i; ++k) instrs.push_back(Load{1});
  instrs.push_back(Load{0});
  for (std::size_t k = i; k < n; ++k) instrs.push_back(Load{1});
  instrs.push_back(Call{0});
  return Machine::make({std::nullopt}, Program::of(std::move(instrs)), {});
}

Machine cons_machine(Address a, std::size_t n) {
  std::vector<Instruction> instrs;
  for (std::size_t k = 0; k < n; ++k) instrs.push_back(Load{1});
  instrs.push_back(Call{0});
  return Machine::make({RegisterCell(a)}, Program::of(std::move(instrs)), {});
}

Program apply_program(std::size_t n) {
  std::vector<Instruction> instrs;
  for (std::size_t k = 0; k < n; ++k) instrs.push_back(Load{k});
  for (std::size_t k = 0; k < n; ++k) instrs.push_back(App{n, k, n});
  for (std::size_t k = 0; k < n; ++k) instrs.push_back(App{n + 1, k, n + 1});
  instrs.push_back(App{n, n + 1, n + 2});
  instrs.push_back(Call{n + 2});
  return Program::of(std::move(instrs));
}

Machine compile(AddressTable& table, const Term& t,
                const std::vector<std::string>& ctx) {
  std::size_t n = ctx.size();
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = std::find(ctx.begin(), ctx.end(), t.name());
      if (it == ctx.end()) throw UnboundVariable(t.name());
      std::size_t i = static_cast<std::size_t>(it - ctx.begin()) + 1;
      return pr_machine(i, n);
    }
    case Term::Kind::Const:
      if (!table.issued(t.address())) throw DanglingAddress(t.address().id());
      return cons_machine(t.address(), n);
    case Term::Kind::App: {
      Address fn = table.intern(compile(table, t.fn(), ctx));
      Address arg = table.intern(compile(table, t.arg(), ctx));
      std::vector<RegisterCell> regs(n + 3, std::nullopt);
      regs[n] = fn;
      regs[n + 1] = arg;
      return Machine::make(std::move(regs), apply_program(n), {});
    }
    case Term::Kind::Abs: {
      std::vector<std::string> extended = ctx;
      std::string binder = t.name();
      Term body = t.body();
      if (std::find(ctx.begin(), ctx.end(), binder) != ctx.end()) {
        std::set<std::string> avoid(ctx.begin(), ctx.end());
        for (const std::string& v : free_vars(body)) avoid.insert(v);
        std::string renamed = fresh_name(binder, avoid);
        body = substitute(body, binder, Term::var(renamed));
        binder = renamed;
      }
      extended.push_back(binder);
      return compile(table, body, extended);
    }
  }
  throw std::logic_error("unreachable term kind");
}

Address interpret(AddressTable& table, const Term& t, const Valuation& rho,
                  const std::vector<std::string>& ctx) {
  Machine compiled = compile(table, t, ctx);
  Tape args;
  for (const std::string& x : ctx) {
    auto it = rho.find(x);
    if (it == rho.end()) throw UnboundVariable(x);
    args.push_back(it->second);
  }
  return table.intern(append_tape(compiled, args));
}

Address interpret(AddressTable& table, const Term& t, const Valuation& rho) {
  std::set<std::string> fv = free_vars(t);
  std::vector<std::string> ctx(fv.begin(), fv.end());  // sorted by std::set
  return interpret(table, t, rho, ctx);
}

}  // namespace avm
