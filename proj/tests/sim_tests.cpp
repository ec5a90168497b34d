#include <doctest.h>

#include <algorithm>

#include "support.hpp"
#include "thingc/json_io.hpp"
#include "thingc/sim.hpp"

using namespace thingc;

namespace {

bool has_code(const std::vector<Diagnostic>& diags, const std::string& code) {
  for (const auto& d : diags)
    if (d.code == code) return true;
  return false;
}

Trace run_corpus(const std::string& model_name, const std::string& scenario_name) {
  Model m = load_corpus_model(model_name);
  auto sr = load_scenario(slurp(corpus_path(scenario_name)), m, scenario_name);
  REQUIRE_MESSAGE(sr.ok(), scenario_name);
  auto r = simulate(m, *sr.scenario);
  REQUIRE_MESSAGE(r.ok(), scenario_name);
  return *r.trace;
}

std::vector<double> assigns_of(const Trace& t, const std::string& var) {
  std::vector<double> out;
  for (const auto& s : t.steps)
    if (s.kind == StepKind::Assign && s.var == var) out.push_back(s.value.num);
  return out;
}

}  // namespace

TEST_CASE("scenario files parse, with helpful errors") {
  Model m = load_corpus_model("book_borrow.tm");
  auto ok = load_scenario("scenario s\nhorizon 5\nat 1 inject request into req_out\n", m);
  REQUIRE(ok.ok());
  CHECK(ok.scenario->horizon == 5);
  REQUIRE(ok.scenario->injections.size() == 1);
  CHECK(ok.scenario->injections[0].stage == "req_out");

  CHECK(has_code(load_scenario("at 1 inject request into req_out\n", m).diagnostics,
                 "syntax-error"));  // missing horizon
  CHECK(has_code(load_scenario("horizon 5\nat 1 inject request into ghost\n", m).diagnostics,
                 "unknown-stage"));
  CHECK(has_code(load_scenario("horizon 5\nat 1 inject request into req_proc\n", m).diagnostics,
                 "inject-not-transfer"));
  CHECK(has_code(load_scenario("horizon 5\nbogus line\n", m).diagnostics, "syntax-error"));
}

TEST_CASE("book borrowing trace matches the hand-executed oracle") {
  // Hand-run: inject at req_out (tick 0); the request walks f3,f4,f5 on
  // ticks 1-3; processing mints the record and the book on tick 3; the
  // book walks f7,f8,f9 on ticks 4-7.
  Trace t = run_corpus("book_borrow.tm", "book_borrow.tms");

  struct Expect {
    long long tick;
    StepKind kind;
    std::string arc_or_stage;
  };
  const Expect expected[] = {
      {0, StepKind::Create, "req_out"},   // injection lands
      {1, StepKind::Move, "f3"},          // req_out -> req_in
      {2, StepKind::Move, "f4"},          // -> req_rcv
      {3, StepKind::Move, "f5"},          // -> req_proc
      {3, StepKind::Trigger, "t1"},       // record is created
      {3, StepKind::Create, "rec_c"},
      {3, StepKind::Trigger, "t2"},       // book is created
      {3, StepKind::Create, "book_c"},
      {4, StepKind::Consume, "req_proc"},  // request retires
      {4, StepKind::Consume, "rec_c"},     // record retires
      {4, StepKind::Move, "f6"},           // book -> book_rel
      {5, StepKind::Move, "f7"},
      {6, StepKind::Move, "f8"},
      {7, StepKind::Move, "f9"},           // book reaches book_rcv
      {8, StepKind::Consume, "book_rcv"},
  };
  REQUIRE(t.steps.size() == std::size(expected));
  for (size_t i = 0; i < std::size(expected); i++) {
    CAPTURE(i);
    CHECK(t.steps[i].tick == expected[i].tick);
    CHECK(t.steps[i].kind == expected[i].kind);
    const std::string& got =
        expected[i].kind == StepKind::Move || expected[i].kind == StepKind::Trigger
            ? t.steps[i].arc
            : t.steps[i].stage;
    CHECK(got == expected[i].arc_or_stage);
  }
  CHECK(t.final_tokens.empty());
}

TEST_CASE("holding the light button ramps brightness up and back down") {
  Trace t = run_corpus("control_light.tm", "control_light_hold.tms");
  CHECK(assigns_of(t, "brightness") ==
        std::vector<double>{60, 70, 80, 90, 100, 90, 80, 70});
  CHECK(t.final_variables.at("light") == Value::symbol("ON"));
  CHECK(t.final_variables.at("direction") == Value::symbol("down"));
}

TEST_CASE("press, release and hold again: the dim phase recurs") {
  Model m = load_corpus_model("control_light.tm");
  Trace t = run_corpus("control_light.tm", "control_light_press.tms");
  auto occ = trace_to_events(m, t, m.events);
  int dim_phases = 0;
  for (const auto& o : occ.occurrences)
    if (o.event == "E11") dim_phases++;
  CHECK(dim_phases == 2);
  CHECK(t.final_variables.at("light") == Value::symbol("ON"));
}

TEST_CASE("atm power cycle produces occurrences in declaration order") {
  Model m = load_corpus_model("atm.tm");
  Trace t = run_corpus("atm.tm", "atm.tms");
  auto occ = trace_to_events(m, t, m.events);
  CHECK_FALSE(has_errors(occ.diagnostics));
  std::vector<std::string> order;
  for (const auto& o : occ.occurrences) order.push_back(o.event);
  CHECK(order == std::vector<std::string>{"E1", "E2", "E3", "E4", "E5", "E6", "E7"});
  // switch flips ON before it flips OFF
  CHECK(t.final_variables.at("switch_state") == Value::symbol("OFF"));
  std::vector<std::string> flips;
  for (const auto& s : t.steps)
    if (s.kind == StepKind::Assign && s.var == "switch_state") flips.push_back(s.value.sym);
  CHECK(flips == std::vector<std::string>{"ON", "OFF"});
}

TEST_CASE("simulation output is byte-identical across runs") {
  for (int i = 0; i < 2; i++) {
    std::string a = trace_to_jsonl(run_corpus("box_arrival.tm", "box_arrival.tms"));
    std::string b = trace_to_jsonl(run_corpus("box_arrival.tm", "box_arrival.tms"));
    CHECK(a == b);
  }
}

TEST_CASE("a token facing two outgoing flows for its thing is an error") {
  auto r = parse(
      "machine M {\n  stage Transfer in\n  stage Receive r1\n  stage Receive r2\n}\n"
      "flow x in -> r1\nflow x in -> r2\n");
  REQUIRE(r.model);
  auto sr = load_scenario("horizon 3\nat 0 inject x into in\n", *r.model);
  REQUIRE(sr.ok());
  auto sim = simulate(*r.model, *sr.scenario);
  CHECK_FALSE(sim.ok());
  CHECK(has_code(sim.diagnostics, "nondeterministic-routing"));
}

TEST_CASE("a runaway trigger cascade trips the divergence bound") {
  auto r = parse(
      "machine M {\n  stage Transfer in\n  stage Receive rcv\n  stage Process p\n"
      "  stage Create c1\n  stage Create c2\n  stage Create c3\n}\n"
      "flow x in -> rcv\nflow x rcv -> p\n"
      "trigger p -> c1\ntrigger c1 -> c2\ntrigger c2 -> c3\n");
  REQUIRE(r.model);
  auto sr = load_scenario("horizon 6\nat 0 inject x into in\n", *r.model);
  REQUIRE(sr.ok());
  auto sim = simulate(*r.model, *sr.scenario, SimOptions{1});
  CHECK_FALSE(sim.ok());
  CHECK(has_code(sim.diagnostics, "divergence"));
}

TEST_CASE("enum assignments outside the domain stop the run") {
  auto r = parse(
      "var light : enum(ON, OFF) = OFF\n"
      "machine M {\n  stage Transfer in\n  stage Receive rcv\n  stage Process p\n"
      "  stage Create c\n}\n"
      "flow x in -> rcv\nflow x rcv -> p\n"
      "trigger p -> c do light := 5\n");
  REQUIRE(r.model);
  auto sr = load_scenario("horizon 6\nat 0 inject x into in\n", *r.model);
  REQUIRE(sr.ok());
  auto sim = simulate(*r.model, *sr.scenario);
  CHECK_FALSE(sim.ok());
  CHECK(has_code(sim.diagnostics, "assign-out-of-domain"));
}

TEST_CASE("sibling triggers read the state their stage arrived with") {
  // both guards see the same snapshot: exactly one of the two branches
  // fires even though the first one rewrites the variable
  auto r = parse(
      "var s : enum(A, B) = A\n"
      "machine M {\n  stage Transfer in\n  stage Receive rcv\n  stage Process p\n"
      "  stage Create ca\n  stage Create cb\n}\n"
      "flow x in -> rcv\nflow x rcv -> p\n"
      "trigger p -> ca if s == A do s := B\n"
      "trigger p -> cb if s == B do s := A\n");
  REQUIRE(r.model);
  auto sr = load_scenario("horizon 4\nat 0 inject x into in\n", *r.model);
  REQUIRE(sr.ok());
  auto sim = simulate(*r.model, *sr.scenario);
  REQUIRE(sim.ok());
  int fired = 0;
  for (const auto& s : sim.trace->steps)
    if (s.kind == StepKind::Trigger) fired++;
  CHECK(fired == 1);
  CHECK(sim.trace->final_variables.at("s") == Value::symbol("B"));
}

TEST_CASE("occurrence order is checked against the chronology graph") {
  // upstream region sees activity first -> no warning; declaring the
  // downstream event first does not change that
  auto r = parse(
      "machine M {\n  stage Transfer in\n  stage Receive rcv\n  stage Process p\n"
      "  stage Create c\n}\n"
      "flow x in -> rcv\nflow x rcv -> p\n"
      "trigger p -> c\n"
      "event E1 \"late\" region { c }\n"
      "event E2 \"early\" region { in rcv f1 }\n");
  REQUIRE(r.model);
  auto sr = load_scenario("horizon 8\nat 0 inject x into in\n", *r.model);
  REQUIRE(sr.ok());
  auto sim = simulate(*r.model, *sr.scenario);
  REQUIRE(sim.ok());
  auto occ = trace_to_events(*r.model, *sim.trace, r.model->events);
  CHECK_FALSE(has_errors(occ.diagnostics));
  REQUIRE(occ.occurrences.size() == 2);
  CHECK(occ.occurrences.front().event == "E2");

  // now force the violation: the trace where only E1 then E2 would fire is
  // hard to stage physically, so fabricate a reversed trace directly
  Trace rev;
  TraceStep s1;
  s1.tick = 0;
  s1.kind = StepKind::Create;
  s1.stage = "c";
  rev.steps.push_back(s1);
  TraceStep s2;
  s2.tick = 3;
  s2.kind = StepKind::Consume;
  s2.stage = "rcv";
  rev.steps.push_back(s2);
  auto bad = trace_to_events(*r.model, rev, r.model->events);
  bool warned = false;
  for (const auto& d : bad.diagnostics)
    if (d.code == "order-violation") warned = true;
  CHECK(warned);
}
