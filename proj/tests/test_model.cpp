#include <algorithm>

#include "ciot/dsl/parser.hpp"
#include "ciot/frontend.hpp"
#include "ciot/resolve.hpp"
#include "ciot/typecheck.hpp"
#include "ciot/validate.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace ciot;
using testing_support::parking_model;

namespace {

// A clean two-component model; each R-rule test mutates one line of it.
const std::string kBase = R"(payload Msg { v: int }
interface IA { op a(Msg) }
interface IB { op b(Msg) }
component Leaf {
  property count: int = 0;
  port p provides IA requires IB;
  incoming event got on p (Msg) does recv;
  receive action recv on p (Msg) { count = count + payload.v; }
  generic event reset does clear;
  generic action clear { count = 0; }
  initial state S;
  state T;
  transition S -> T when got [payload.v > 0];
  transition T -> S when reset;
}
component Host : Board {
  property level: float = 1.5;
  port q provides IB requires IA;
  part leaf : Leaf;
  connect self.q to leaf.p;
  outgoing event out on q (Msg) does snd;
  send action snd on q (Msg) { payload.v = 1; }
  initial state A { entry out; }
}
instance h : Host;
)";

std::string mutate(std::string src, const std::string& from, const std::string& to) {
  auto at = src.find(from);
  REQUIRE_MESSAGE(at != std::string::npos, from);
  src.replace(at, from.size(), to);
  return src;
}

std::vector<std::string> codes(const std::string& src) {
  std::vector<std::string> out;
  for (const auto& d : diagnose(src, "t.ciot")) out.push_back(d.code);
  return out;
}

// Every diagnostic carries `rule` and at least one exists.
bool only(const std::string& src, const std::string& rule) {
  auto c = codes(src);
  return !c.empty() && std::all_of(c.begin(), c.end(), [&](const std::string& x) { return x == rule; });
}

Error resolve_error(const std::string& src) {
  try {
    resolve(dsl::parse_source(src, "t.ciot"));
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected a resolve error");
  return Error("none", "");
}

std::string guard_result(const Expr& e, const TypeScope& scope) {
  auto r = typecheck_guard(e, scope);
  if (auto* d = std::get_if<Diagnostic>(&r)) return d->code;
  return to_string(std::get<PrimType>(r));
}

}  // namespace

TEST_CASE("the base fixture is clean") {
  CHECK(codes(kBase).empty());
  auto m = load_model(kBase).model;
  CHECK(m.components.size() == 2);
  CHECK(m.components[1].kind == ComponentKind::Board);
  CHECK(m.components[1].parts[0].component == 0);
}

TEST_CASE("resolve the parking corpus") {
  auto m = parking_model();
  CHECK(m.payloads.size() == 2);
  CHECK(m.interfaces.size() == 6);
  CHECK(m.components.size() == 4);
  auto machines = std::count_if(m.components.begin(), m.components.end(),
                                [](const ComponentDef& c) { return c.machine.has_value(); });
  CHECK(machines == 4);
  const auto& node = m.components[*m.find_component("Node")];
  CHECK(node.kind == ComponentKind::Board);
  CHECK(node.parts.size() == 3);
  CHECK(node.connectors.size() == 3);
  CHECK(node.connectors[0].b.part == std::optional<std::size_t>(0));
  CHECK(m.components[node.parts[2].component].name == "UltrasonicSensor");
  CHECK(validate(m).empty());
}

TEST_CASE("unknown references point at the offending name") {
  auto e = resolve_error(mutate(kBase, "part leaf : Leaf;", "part leaf : Leef;"));
  CHECK(e.code() == "E_UNKNOWN_REF");
  REQUIRE(e.diagnostics().size() == 1);
  CHECK(e.diagnostics()[0].loc.line == 19);
  CHECK(e.diagnostics()[0].loc.column == 15);
  CHECK(e.diagnostics()[0].message.find("'Leef'") != std::string::npos);

  CHECK(resolve_error(mutate(kBase, "when reset", "when rest")).code() == "E_UNKNOWN_REF");
  CHECK(resolve_error(mutate(kBase, "provides IA requires IB", "provides IA requires IC")).code() ==
        "E_UNKNOWN_REF");
  CHECK(resolve_error(mutate(kBase, "transition T -> S", "transition T -> U")).code() == "E_UNKNOWN_REF");
  CHECK(resolve_error(mutate(kBase, "connect self.q to leaf.p", "connect self.q to leaf.x")).code() ==
        "E_UNKNOWN_REF");
}

TEST_CASE("all resolve problems are collected") {
  auto src = mutate(mutate(kBase, "when reset", "when rest"), "part leaf : Leaf;", "part leaf : Leef;");
  auto e = resolve_error(src);
  CHECK(e.diagnostics().size() == 2);
  CHECK(std::string(e.what()).find("and 1 more") != std::string::npos);
}

TEST_CASE("duplicate definitions") {
  CHECK(resolve_error(kBase + "payload Msg { w: int }\n").code() == "E_DUPLICATE");
  CHECK(resolve_error(kBase + "instance h : Leaf;\n").code() == "E_DUPLICATE");
  CHECK(resolve_error(mutate(kBase, "state T;", "state T; state S;")).code() == "E_DUPLICATE");
  CHECK(resolve_error(mutate(kBase, "property count: int = 0;", "property count: int = 0; property count: int = 1;"))
            .code() == "E_DUPLICATE");
}

TEST_CASE("payload containment cycles") {
  auto e = resolve_error("payload A { b: B }\npayload B { a: A }\n");
  CHECK(e.code() == "E_PAYLOAD_CYCLE");
  CHECK(resolve_error("payload A { self: A }").code() == "E_PAYLOAD_CYCLE");
  // Sharing a payload type twice is not a cycle.
  CHECK_NOTHROW(resolve(dsl::parse_source("payload L { x: int }\npayload T { a: L, b: L }")));
}

TEST_CASE("guard typing") {
  auto m = parking_model();
  const auto& node = m.components[*m.find_component("Node")];
  auto scope = make_scope(m, node, m.find_payload("SenseData"));
  CHECK(scope.at("threshold") == PrimType::Float);
  CHECK(scope.at("payload.duration") == PrimType::Float);

  auto g = [&](const char* text) { return guard_result(dsl::parse_expression(text), scope); };
  CHECK(g("payload.duration >= threshold") == "bool");
  CHECK(g("payload.duration >= 300") == "bool");
  CHECK(g("payload.duration < 300.0 and not (threshold == 1)") == "bool");
  CHECK(g("payload.duration") == "E_TYPE_MISMATCH");
  CHECK(g("payload.duration + 1") == "E_TYPE_MISMATCH");
  CHECK(g("payload.duration == \"x\"") == "E_TYPE_MISMATCH");
  CHECK(g("not threshold") == "E_TYPE_MISMATCH");
  CHECK(g("payload.distance > 0") == "E_UNKNOWN_NAME");
  CHECK(g("level > 0") == "E_UNKNOWN_NAME");
  CHECK(g("\"a\" < \"b\"") == "E_TYPE_MISMATCH");
  CHECK(g("\"a\" == \"b\"") == "bool");

  auto no_payload = make_scope(m, node, std::nullopt);
  CHECK(guard_result(dsl::parse_expression("payload.duration > 0"), no_payload) == "E_UNKNOWN_NAME");
  CHECK(assignable(PrimType::Int, PrimType::Float));
  CHECK_FALSE(assignable(PrimType::Float, PrimType::Int));
  CHECK_FALSE(assignable(PrimType::Bool, PrimType::String));
}

TEST_CASE("R1: exactly one initial state") {
  CHECK(only(mutate(kBase, "initial state S;", "state S;"), "R1"));
  CHECK(only(mutate(kBase, "state T;", "initial state T;"), "R1"));
}

TEST_CASE("R2: ports and connectors") {
  CHECK(only(mutate(kBase, "port q provides IB requires IA;", "port q;"), "R2"));
  CHECK(only(mutate(kBase, "port p provides IA requires IB;", "port p provides IA requires IB, IA;"), "R2"));
  CHECK(only(mutate(kBase, "port q provides IB requires IA;", "port q provides IB requires IA, IB;"), "R2"));
  // The leaf requires IB, which q no longer provides.
  CHECK(only(mutate(kBase, "port q provides IB requires IA;", "port q provides IA requires IA;"), "R2"));
  CHECK(only(mutate(kBase, "connect self.q to leaf.p;", "connect self.q to leaf.p; connect self.q to leaf.p;"),
             "R2"));
  CHECK(only(mutate(kBase, "connect self.q to leaf.p;", "connect self.q to self.q;"), "R2"));
}

TEST_CASE("R3: event and action kinds") {
  CHECK(only(mutate(kBase, "incoming event got on p (Msg) does recv;", "outgoing event got on p (Msg) does recv;"),
             "R3"));
  CHECK(only(mutate(kBase, "receive action recv on p (Msg) { count = count + payload.v; }",
                    "send action recv on p (Msg) { count = 1; }"), "R3"));
  CHECK(only(mutate(kBase, "generic event reset does clear;", "generic event reset does recv;"), "R3"));
  CHECK(only(mutate(kBase, "incoming event got on p (Msg)", "incoming event got (Msg)"), "R3"));
  CHECK(only(mutate(kBase, "generic action clear {", "generic action clear on p {"), "R3"));
  CHECK(only(mutate(kBase, "generic action clear { count = 0; }", "generic action clear { payload.v = 0; }"),
             "R3"));
  // Incoming events need a delivered payload, so they cannot run on entry.
  CHECK(only(mutate(kBase, "state T;", "state T { entry got; }"), "R3"));
  CHECK(codes(mutate(kBase, "state T;", "state T { entry reset; exit reset; continuous reset; }")).empty());
}

TEST_CASE("R4: types of properties, effects and guards") {
  CHECK(only(mutate(kBase, "property count: int = 0;", "property count: int = 0.5;"), "R4"));
  CHECK(codes(mutate(kBase, "property level: float = 1.5;", "property level: float = 2;")).empty());
  CHECK(only(mutate(kBase, "{ count = 0; }", "{ count = true; }"), "R4"));
  CHECK(only(mutate(kBase, "{ count = 0; }", "{ cnt = 0; }"), "R4"));
  CHECK(only(mutate(kBase, "{ count = 0; }", "{ count = payload.v; }"), "R4"));
  CHECK(only(mutate(kBase, "{ payload.v = 1; }", "{ payload.w = 1; }"), "R4"));
  CHECK(only(mutate(kBase, "{ payload.v = 1; }", "{ payload.v = level; }"), "R4"));
  // Send actions build their payload from properties alone.
  CHECK(only(mutate(kBase, "{ payload.v = 1; }", "{ payload.v = payload.v; }"), "R4"));
  CHECK(only(mutate(kBase, "[payload.v > 0]", "[payload.v]"), "R4"));
  CHECK(only(mutate(kBase, "when reset;", "when reset [payload.v > 0];"), "R4"));
  CHECK(only(mutate(kBase, "[payload.v > 0]", "[count > \"0\"]"), "R4"));
}

TEST_CASE("R5: composition") {
  CHECK(only(mutate(kBase, "component Host : Board", "component Host : IoTElement"), "R5"));
  CHECK(codes(mutate(kBase, "component Host : Board", "component Host : VirtualEntity")).empty());
  auto rec = kBase + "component Loop : Board { part again : Loop; }\n";
  CHECK(only(rec, "R5"));
  auto mutual = kBase + "component X : Board { part y : Y; }\ncomponent Y : Board { part x : X; }\n";
  CHECK(only(mutual, "R5"));
}

TEST_CASE("R6: unreachable states are warnings") {
  auto src = mutate(kBase, "state T;", "state T; state Lost;");
  auto diags = diagnose(src);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].code == "R6");
  CHECK(diags[0].severity == Severity::Warning);
  CHECK(count_errors(diags) == 0);
  auto loaded = load_model(src);
  CHECK(loaded.warnings.size() == 1);
  // Reachability follows triggerless transitions too.
  CHECK(codes(mutate(src, "transition T -> S when reset;", "transition T -> S when reset; transition T -> Lost;"))
            .empty());
}

TEST_CASE("R7: incoming payloads match the port and the peer") {
  auto other = mutate(kBase, "payload Msg { v: int }", "payload Msg { v: int }\npayload Note { v: int }");
  CHECK(only(mutate(other, "incoming event got on p (Msg) does recv;\n  receive action recv on p (Msg)",
                    "incoming event got on p (Note) does recv;\n  receive action recv on p (Note)"),
             "R7"));
  // The port carries Msg but the host never sends it.
  CHECK(only(mutate(mutate(kBase, "outgoing event out on q (Msg) does snd;", ""), "{ entry out; }", ";"), "R7"));
}

TEST_CASE("validation reports every problem and is repeatable") {
  auto src = mutate(mutate(kBase, "initial state S;", "state S;"), "property count: int = 0;",
                    "property count: int = false;");
  auto m = resolve(dsl::parse_source(src, "t.ciot"));
  auto text = [](const std::vector<Diagnostic>& ds) {
    std::string out;
    for (const auto& d : ds) out += format_diagnostic(d) + "\n";
    return out;
  };
  auto first = validate(m);
  CHECK(text(first) == text(validate(m)));
  CHECK(first.size() >= 2);
  CHECK(std::any_of(first.begin(), first.end(), [](const Diagnostic& d) { return d.code == "R1"; }));
  CHECK(std::any_of(first.begin(), first.end(), [](const Diagnostic& d) { return d.code == "R4"; }));
  try {
    load_model(src, "t.ciot");
    FAIL("expected E_VALIDATE");
  } catch (const Error& e) {
    CHECK(e.code() == "E_VALIDATE");
    CHECK(text(e.diagnostics()) == text(first));
  }
}
