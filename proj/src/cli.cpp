#include "avm/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "avm/ae_equiv.hpp"
#include "avm/lambda.hpp"
#include "avm/reduction.hpp"
#include "avm/session.hpp"
#include "avm/text.hpp"
#include "avm/vm.hpp"

namespace avm {

namespace {

constexpr std::size_t kDefaultFuel = 10000;
constexpr std::size_t kDefaultDepth = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void load_optional_session(Session& session, const std::string& path) {
  if (path.empty()) return;
  session.load(read_file(path));
  if (!session.all_valid()) {
    for (const DefinitionReport& r : session.reports()) {
      if (!r.ok()) {
        throw std::runtime_error(r.name + ": " + r.issue->describe());
      }
    }
  }
}

std::string strip_at(const std::string& name);

// A machine name (with or without '@'), or a lambda term whose free names
// denote machines.
Address resolve_operand(Session& session, const std::string& text) {
  if (auto a = session.resolve(strip_at(text))) return *a;
  Term t = parse_term(text, [&session](const std::string& n) {
    return session.resolve(n);
  });
  return interpret(session.table(), session.close_term(t), {});
}

std::string outcome_line(const Outcome& o) {
  switch (o.kind) {
    case OutcomeKind::Final:
      return "final after " + std::to_string(o.steps) + " steps: " +
             format_machine_inline(o.machine);
    case OutcomeKind::Stuck:
      return "stuck after " + std::to_string(o.steps) + " steps: " +
             format_machine_inline(o.machine);
    case OutcomeKind::Cycle:
      return "cycle after " + std::to_string(o.steps) +
             " steps: revisits id " + std::to_string(o.repeated->id());
    case OutcomeKind::OutOfFuel:
      return "out of fuel after " + std::to_string(o.steps) + " steps";
  }
  return "";
}

int cmd_validate(const std::string& file, std::ostream& out) {
  Session session;
  session.load(read_file(file));
  std::size_t ok = 0, bad = 0;
  for (const DefinitionReport& r : session.reports()) {
    if (r.ok()) {
      out << r.name << ": ok\n";
      ++ok;
    } else {
      out << r.name << ": " << r.issue->describe() << "\n";
      ++bad;
    }
  }
  out << ok << " ok, " << bad << " invalid\n";
  return bad == 0 ? 0 : 1;
}

std::string strip_at(const std::string& name) {
  return (!name.empty() && name[0] == '@') ? name.substr(1) : name;
}

int cmd_run(Session& session, const std::string& raw_name, std::size_t fuel,
            bool with_trace, std::ostream& out) {
  std::string name = strip_at(raw_name);
  auto a = session.resolve(name);
  if (!a) throw std::runtime_error("unknown machine " + name);
  Machine m = session.table().lookup(*a);
  std::vector<Machine> states;
  Outcome outcome = run(session.table(), std::move(m), fuel, &states);
  if (with_trace) {
    for (std::size_t i = 0; i < states.size(); ++i) {
      out << i << ": " << format_machine_inline(states[i]) << "\n";
    }
  }
  out << outcome_line(outcome) << "\n";
  return 0;
}

int cmd_compile(Session& session, const std::string& term_text,
                const std::vector<std::string>& ctx, std::ostream& out) {
  Term t = parse_term(term_text, [&session](const std::string& n) {
    return session.resolve(n);
  });
  Machine m = compile(session.table(), t, ctx);
  Address a = session.table().intern(m);
  out << a.id() << ": " << format_machine_inline(m) << "\n";
  return 0;
}

int cmd_equiv(Session& session, const std::string& mode, const std::string& sa,
              const std::string& sb, std::size_t fuel, std::size_t depth,
              bool strict, bool explain, std::ostream& out) {
  Address a = resolve_operand(session, sa);
  Address b = resolve_operand(session, sb);
  if (mode == "eval") {
    EvalVerdict v = eval_equiv(session.table(), a, b, fuel);
    switch (v.verdict) {
      case Equivalence::Equiv:
        out << "equiv\n";
        return 0;
      case Equivalence::Distinct:
        out << "distinct\n";
        if (explain) out << "witness: " << v.witness << "\n";
        return 1;
      case Equivalence::Unknown:
        out << "unknown(" << v.reason << ")\n";
        return 2;
    }
  }
  AeVerdict v = ae_check(session.table(), a, b, fuel, depth, strict);
  switch (v.kind) {
    case AeVerdict::Kind::EquivUpTo:
      out << "equiv\n";
      if (explain) out << "depth used: " << v.depth_used << "\n";
      return 0;
    case AeVerdict::Kind::Distinct:
      out << "distinct\n";
      if (explain) {
        out << "witness: apply [";
        for (std::size_t i = 0; i < v.witness.applied.size(); ++i) {
          if (i) out << ", ";
          out << v.witness.applied[i].id();
        }
        out << "] then " << v.witness.outcome << "\n";
      }
      return 1;
    case AeVerdict::Kind::Unknown:
      out << "unknown(" << v.reason << ")\n";
      return 2;
  }
  return 3;
}

int cmd_underline(Session& session, const std::string& context_name,
                  const std::string& raw_machine_name, std::size_t fuel,
                  std::ostream& out) {
  std::string machine_name = strip_at(raw_machine_name);
  std::optional<ExtAddress> c;
  if (!context_name.empty()) {
    c = session.resolve_context(context_name);
    if (!c) throw std::runtime_error("unknown context " + context_name);
  } else {
    for (const std::string& name : session.definition_order()) {
      if (auto found = session.resolve_context(name)) c = found;
    }
    if (!c) throw std::runtime_error("the session defines no context");
  }
  auto a = session.resolve(machine_name);
  if (!a) throw std::runtime_error("unknown machine " + machine_name);
  Machine m = session.table().lookup(*a);
  ExtendedMachine ctx_machine = session.ext().lookup(*c);

  ExtRun underlined = underlined_run(session.ext(), ctx_machine, m, fuel);
  out << "underlined:\n";
  for (std::size_t i = 0; i < underlined.states.size(); ++i) {
    out << i << ": " << format_ext_machine_inline(underlined.states[i])
        << "\n";
  }
  std::vector<Machine> states;
  run(session.table(), plug(session.ext(), ctx_machine, m), fuel, &states);
  out << "plugged:\n";
  for (std::size_t i = 0; i < states.size(); ++i) {
    out << i << ": " << format_machine_inline(states[i]) << "\n";
  }
  bool ok = correspondence_check(session.ext(), ctx_machine, m, fuel);
  out << (ok ? "correspondence: ok\n" : "correspondence: MISMATCH\n");
  return ok ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"addressing-machine toolchain", "addrvm"};
  app.require_subcommand(1);

  std::string session_file;
  std::size_t fuel = kDefaultFuel;
  std::size_t depth = kDefaultDepth;
  bool strict = false;
  bool with_trace = false;
  bool dump_after = false;
  bool explain = false;

  auto add_common = [&](CLI::App* cmd, bool wants_depth) {
    cmd->add_option("--session", session_file, "session file to load first");
    cmd->add_option("--fuel", fuel, "head-step budget (default 10000)");
    if (wants_depth) {
      cmd->add_option("--depth", depth,
                      "fresh-indeterminate budget (default 3)");
    }
    cmd->add_flag("--dump-table", dump_after,
                  "print the address table afterwards");
  };

  std::string file;
  CLI::App* validate = app.add_subcommand("validate", "check a session file");
  validate->add_option("file", file)->required();

  std::string name;
  CLI::App* run_cmd = app.add_subcommand("run", "head-run a machine");
  run_cmd->add_option("name", name)->required();
  run_cmd->add_flag("--trace", with_trace, "print every state");
  add_common(run_cmd, false);

  std::string term_text;
  std::string term_file;
  std::string ctx_spec;
  CLI::App* compile_cmd =
      app.add_subcommand("compile", "compile a lambda term");
  compile_cmd->add_option("term", term_text);
  compile_cmd->add_option("--file", term_file, "read the term from a file");
  compile_cmd->add_option("--ctx", ctx_spec, "comma-separated context");
  add_common(compile_cmd, false);

  std::string mode = "eval";
  std::string lhs, rhs;
  CLI::App* equiv_cmd = app.add_subcommand("equiv", "equivalence query");
  equiv_cmd->add_option("--mode", mode)
      ->check(CLI::IsMember({"eval", "ae"}));
  equiv_cmd->add_option("a", lhs)->required();
  equiv_cmd->add_option("b", rhs)->required();
  equiv_cmd->add_flag("--strict-distinct", strict,
                      "report stuck-vs-cycle pairs as distinct");
  equiv_cmd->add_flag("--explain", explain, "print witness details");
  add_common(equiv_cmd, true);

  CLI::App* dump_cmd = app.add_subcommand("dump", "print the address table");
  dump_cmd->add_option("--session", session_file);

  std::string context_file, context_name;
  CLI::App* underline_cmd =
      app.add_subcommand("underline", "paired underlined/plugged traces");
  underline_cmd->add_option("--context", context_file, "session file")
      ->required();
  underline_cmd->add_option("--name", context_name,
                            "context to use (default: last defined)");
  underline_cmd->add_option("--machine", name)->required();
  underline_cmd->add_option("--fuel", fuel);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 3;
  }

  try {
    Session session;
    int code = 0;
    if (validate->parsed()) {
      return cmd_validate(file, out);
    } else if (run_cmd->parsed()) {
      load_optional_session(session, session_file);
      code = cmd_run(session, name, fuel, with_trace, out);
    } else if (compile_cmd->parsed()) {
      load_optional_session(session, session_file);
      if (!term_file.empty()) {
        term_text = read_file(term_file);
      } else if (term_text.empty()) {
        throw std::runtime_error("compile needs a term or --file");
      }
      std::vector<std::string> ctx;
      std::stringstream ss(ctx_spec);
      std::string part;
      while (std::getline(ss, part, ',')) {
        if (!part.empty()) ctx.push_back(part);
      }
      code = cmd_compile(session, term_text, ctx, out);
    } else if (equiv_cmd->parsed()) {
      load_optional_session(session, session_file);
      code = cmd_equiv(session, mode, lhs, rhs, fuel, depth, strict, explain,
                       out);
    } else if (dump_cmd->parsed()) {
      load_optional_session(session, session_file);
    } else if (underline_cmd->parsed()) {
      load_optional_session(session, context_file);
      code = cmd_underline(session, context_name, name, fuel, out);
    }
    if (dump_after || dump_cmd->parsed()) {
      dump_table(session.table(), out);
    }
    return code;
  } catch (const SyntaxError& e) {
    err << "syntax error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace avm
