#include "avm/validator.hpp"

#include <cctype>
#include <charconv>
#include <string>

namespace avm {

InitializedSet InitializedSet::from_registers(
    const std::vector<RegisterCell>& regs) {
  InitializedSet s;
  for (std::size_t i = 0; i < regs.size(); ++i) {
    if (regs[i].has_value()) s.add(i);
  }
  return s;
}

InitializedSet InitializedSet::of(std::initializer_list<std::size_t> indices) {
  InitializedSet s;
  for (std::size_t i : indices) s.add(i);
  return s;
}

namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  }

  bool done() {
    skip_ws();
    return pos >= text.size();
  }

  std::string_view word() {
    skip_ws();
    std::size_t begin = pos;
    while (pos < text.size() &&
           (std::isalpha(static_cast<unsigned char>(text[pos])))) {
      ++pos;
    }
    return text.substr(begin, pos - begin);
  }

  std::size_t number() {
    skip_ws();
    std::size_t begin = pos;
    while (pos < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
    if (begin == pos) throw SyntaxError("expected register index", begin);
    std::size_t value = 0;
    auto res = std::from_chars(text.data() + begin, text.data() + pos, value);
    if (res.ec != std::errc()) throw SyntaxError("index out of range", begin);
    return value;
  }

  bool eat_semicolon() {
    skip_ws();
    if (pos < text.size() && text[pos] == ';') {
      ++pos;
      return true;
    }
    return false;
  }
};

}  // namespace

Program parse_program(std::string_view text) {
  Cursor cur{text};
  std::vector<Instruction> instrs;
  bool saw_call = false;
  while (!cur.done()) {
    std::size_t at = cur.pos;
    if (saw_call) throw SyntaxError("instruction after Call", at);
    std::string_view kw = cur.word();
    if (kw == "Load") {
      if (!instrs.empty() && !std::holds_alternative<Load>(instrs.back())) {
        throw SyntaxError("Load after App or Call", at);
      }
      instrs.push_back(Load{cur.number()});
    } else if (kw == "App") {
      std::size_t i = cur.number();
      std::size_t j = cur.number();
      std::size_t k = cur.number();
      instrs.push_back(App{i, j, k});
    } else if (kw == "Call") {
      instrs.push_back(Call{cur.number()});
      saw_call = true;
    } else if (kw.empty()) {
      throw SyntaxError("expected instruction", at);
    } else {
      throw SyntaxError("unknown instruction '" + std::string(kw) + "'", at);
    }
    if (!cur.eat_semicolon() && !cur.done()) {
      throw SyntaxError("expected ';'", cur.pos);
    }
  }
  return Program::of(std::move(instrs));
}

std::optional<ValidityIssue> check_valid(const Program& p, std::size_t r,
                                         InitializedSet init) {
  auto read = [&](std::size_t index, std::size_t reg)
      -> std::optional<ValidityIssue> {
    if (reg >= r) {
      return ValidityIssue{index, ValidityReason::NonexistentRead, reg};
    }
    if (!init.contains(reg)) {
      return ValidityIssue{index, ValidityReason::UninitializedRead, reg};
    }
    return std::nullopt;
  };

  std::size_t index = 0;
  for (const Instruction& ins : p.instructions()) {
    if (const Load* ld = std::get_if<Load>(&ins)) {
      if (ld->reg < r) init.add(ld->reg);
    } else if (const App* ap = std::get_if<App>(&ins)) {
      if (auto issue = read(index, ap->lhs)) return issue;
      if (auto issue = read(index, ap->rhs)) return issue;
      if (ap->dst < r) init.add(ap->dst);
    } else {
      if (auto issue = read(index, std::get<Call>(ins).reg)) return issue;
    }
    ++index;
  }
  return std::nullopt;
}

std::optional<ValidityIssue> check_valid(
    const Program& p, const std::vector<RegisterCell>& regs) {
  return check_valid(p, regs.size(), InitializedSet::from_registers(regs));
}

void validate(const Program& p, std::size_t r, InitializedSet init) {
  if (auto issue = check_valid(p, r, std::move(init))) {
    throw ValidityError(*issue);
  }
}

}  // namespace avm
