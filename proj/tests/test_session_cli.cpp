#include "doctest.h"

#include <sstream>

#include "avm/cli.hpp"
#include "avm/combinators.hpp"
#include "avm/session.hpp"
#include "avm/text.hpp"
#include "avm/validator.hpp"
#include "support.hpp"

using namespace avm;

namespace {

std::string fixture(const char* name) {
  return std::string(AVM_FIXTURE_DIR) + "/" + name;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("program text round-trips through its canonical form") {
  for (const char* text :
       {"", "Load 0", "Load 0; App 0 1 2; Call 2", "Call 3",
        "Load 1; Load 1; App 1 1 0; App 0 0 2; Call 0"}) {
    Program p = parse_program(text);
    std::string canonical = format_program(p);
    CHECK(parse_program(canonical) == p);
    CHECK(format_program(parse_program(canonical)) == canonical);
  }
}

TEST_CASE("machine blocks round-trip bit-exactly") {
  AddressTable table;
  Address k = table.intern(k_machine());
  Machine m = Machine::make({std::nullopt, k},
                            parse_program("Load 0; Call 1"), Tape{k});
  auto names = [&](Address a) -> std::optional<std::string> {
    if (a == k) return "K";
    return std::nullopt;
  };
  std::string block = format_machine_block("M", m, names);
  CHECK(block ==
        "machine M { regs = [_, @K]; prog = \"Load 0; Call 1\"; "
        "tape = [@K]; }");

  Session session;
  session.load("addrvm v1\n" + block);
  REQUIRE(session.all_valid());
  Machine reparsed = session.table().lookup(*session.resolve("M"));
  CHECK(reparsed == m);
  // K resolves to the same machine, so the rendered block is unchanged.
  CHECK(format_machine_block("M", reparsed, names) == block);
}

TEST_CASE("sessions define machines and terms in order") {
  Session session;
  session.load(R"(addrvm v1
machine A { regs = [_]; prog = ""; tape = []; }
machine B { regs = [@A]; prog = "Call 0"; tape = [@A]; }
term twice = \f x. f (f x);
)");
  REQUIRE(session.all_valid());
  CHECK(session.resolve("A").has_value());
  CHECK(session.resolve("B").has_value());
  CHECK(session.resolve("twice").has_value());
  CHECK(!session.resolve("C").has_value());

  SUBCASE("builtins resolve without definitions") {
    CHECK(session.resolve("K").has_value());
    CHECK(session.resolve("K'").has_value());
    CHECK(session.resolve("x7").has_value());
    CHECK(session.table().lookup(*session.resolve("x7")) == indeterminate(7));
  }
  SUBCASE("definitions shadow builtins") {
    Session shadowed;
    shadowed.load(
        "addrvm v1\nmachine K { regs = []; prog = \"\"; tape = []; }");
    CHECK(shadowed.table().lookup(*shadowed.resolve("K")) !=
          k_machine());
  }
}

TEST_CASE("term definitions accept juxtaposed machine names") {
  Session session;
  session.load("addrvm v1\nterm i2 = SKK;\n");
  REQUIRE(session.resolve("i2").has_value());
  CliResult r = cli({"equiv", "--mode=ae", "i2", "I", "--session",
                     fixture("skk.avm")});
  CHECK(r.code == 0);
}

TEST_CASE("forward references are rejected") {
  Session session;
  CHECK_THROWS_AS(session.load(R"(addrvm v1
machine A { regs = [@B]; prog = "Call 0"; tape = []; }
machine B { regs = [_]; prog = ""; tape = []; }
)"),
                  SyntaxError);
}

TEST_CASE("sessions require the version header") {
  Session session;
  CHECK_THROWS_AS(
      session.load("machine A { regs = []; prog = \"\"; tape = []; }"),
      SyntaxError);
  CHECK_NOTHROW(session.load(""));
  CHECK_NOTHROW(session.load("  # just a comment\n"));
}

TEST_CASE("invalid machine definitions are reported, not bound") {
  Session session;
  session.load(R"(addrvm v1
machine Good { regs = [_, @x0, @x1, _]; prog = "Load 0; App 0 1 2; Call 2"; tape = []; }
machine Bad { regs = [_, @x0, @x1, _]; prog = "App 0 1 2; Call 2"; tape = []; }
)");
  CHECK(!session.all_valid());
  REQUIRE(session.reports().size() == 2);
  CHECK(session.reports()[0].ok());
  CHECK(!session.reports()[1].ok());
  CHECK(session.reports()[1].issue->reason ==
        ValidityReason::UninitializedRead);
  CHECK(session.resolve("Good").has_value());
  CHECK(!session.resolve("Bad").has_value());
}

TEST_CASE("cli validate lists the validity table") {
  CliResult r = cli({"validate", fixture("validity_table.avm")});
  CHECK(r.code == 1);
  CHECK(r.out.find("P0: ok") != std::string::npos);
  CHECK(r.out.find("P3: ok") != std::string::npos);
  CHECK(r.out.find(
            "P4: instruction 0 reads uninitialized register 0") !=
        std::string::npos);
  CHECK(r.out.find(
            "P5: instruction 1 reads uninitialized register 3") !=
        std::string::npos);
  CHECK(r.out.find(
            "P6: instruction 1 reads nonexistent register 5") !=
        std::string::npos);
  CHECK(r.out.find("4 ok, 3 invalid") != std::string::npos);
}

TEST_CASE("cli validate accepts an empty file") {
  CliResult r = cli({"validate", fixture("empty.avm")});
  CHECK(r.code == 0);
  CHECK(r.out.find("0 ok, 0 invalid") != std::string::npos);
}

TEST_CASE("cli run prints the trace and outcome") {
  CliResult r = cli({"run", "O", "--trace", "--fuel", "50"});
  CHECK(r.code == 0);
  CHECK(r.out.find("0: ") != std::string::npos);
  CHECK(r.out.find("cycle after 3 steps") != std::string::npos);

  CliResult x0 = cli({"run", "x0"});
  CHECK(x0.out.find("final after 0 steps") != std::string::npos);

  CliResult missing = cli({"run", "NoSuchMachine"});
  CHECK(missing.code == 3);
}

TEST_CASE("cli compile") {
  CliResult r = cli({"compile", "\\x.x"});
  CHECK(r.code == 0);
  CHECK(r.out.find("prog=\"Load 0; Call 0\"") != std::string::npos);

  CliResult open = cli({"compile", "x"});
  CHECK(open.code == 3);

  CliResult with_ctx = cli({"compile", "x", "--ctx", "x"});
  CHECK(with_ctx.code == 0);
}

TEST_CASE("cli equiv exit codes and verdict lines") {
  CliResult same = cli({"equiv", "--mode=eval", "K", "K"});
  CHECK(same.code == 0);
  CHECK(same.out == "equiv\n");

  CliResult distinct = cli({"equiv", "--mode=eval", "S(KI)I", "I"});
  CHECK(distinct.code == 1);
  CHECK(distinct.out == "distinct\n");

  CliResult ae = cli({"equiv", "--mode=ae", "I", "1"});
  CHECK(ae.code == 1);

  CliResult unknown =
      cli({"equiv", "--mode=ae", "\\x.(\\y.y y)(\\y.y y)", "(\\y.y y)(\\y.y y)"});
  CHECK(unknown.code == 2);
  CHECK(unknown.out == "unknown(cycle)\n");

  CliResult strict = cli({"equiv", "--mode=ae", "--strict-distinct",
                          "\\x.(\\y.y y)(\\y.y y)", "(\\y.y y)(\\y.y y)"});
  CHECK(strict.code == 1);
}

TEST_CASE("cli output is byte-stable across runs") {
  std::vector<std::string> args{"equiv", "--mode=ae", "--explain", "K", "K'"};
  CliResult first = cli(args);
  CliResult second = cli(args);
  CHECK(first.out == second.out);
  CHECK(first.code == second.code);

  CliResult d1 = cli({"run", "I", "--trace", "--dump-table"});
  CliResult d2 = cli({"run", "I", "--trace", "--dump-table"});
  CHECK(d1.out == d2.out);
}

TEST_CASE("cli dump lists ids in allocation order") {
  CliResult r = cli({"dump", "--session", fixture("demo.avm")});
  CHECK(r.code == 0);
  CHECK(r.out.find("0: ") == 0);
  CHECK(r.out.find("\n1: ") != std::string::npos);
}

TEST_CASE("cli underline prints paired traces for the worked context") {
  CliResult r = cli({"underline", "--context", fixture("worked_context.avm"),
                     "--machine", "K", "--fuel", "100"});
  CHECK(r.code == 0);
  CHECK(r.out.find("underlined:") != std::string::npos);
  CHECK(r.out.find("plugged:") != std::string::npos);
  CHECK(r.out.find("correspondence: ok") != std::string::npos);
}

TEST_CASE("table dump format") {
  AddressTable table;
  table.intern(indeterminate(0));
  Address k = table.intern(k_machine());
  table.intern(append_tape(k_machine(), Tape{k}));
  std::ostringstream out;
  dump_table(table, out);
  CHECK(out.str() ==
        "0: regs=[_] prog=\"\" tape=[]\n"
        "1: regs=[_] prog=\"Load 0; Load 1; Call 0\" tape=[]\n"
        "2: regs=[_] prog=\"Load 0; Load 1; Call 0\" tape=[1]\n");
}
