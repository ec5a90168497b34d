#include <doctest.h>

#include "support.hpp"
#include "thingc/dsl.hpp"

using namespace thingc;

namespace {
const char* kCorpus[] = {"book_borrow.tm", "box_arrival.tm", "control_light.tm", "atm.tm"};

bool has_code(const std::vector<Diagnostic>& diags, const std::string& code) {
  for (const auto& d : diags)
    if (d.code == code) return true;
  return false;
}
}  // namespace

TEST_CASE("minimal model parses and serializes to three lines") {
  auto r = parse("model tiny\nmachine M {\n}\n");
  REQUIRE(r.model);
  CHECK(r.model->machines.size() == 2);  // implicit root + M
  CHECK(r.model->root().id == "tiny");
  CHECK(serialize(*r.model) == "model tiny\n\nmachine M {\n}\n");
}

TEST_CASE("missing model line defaults the root to main") {
  auto r = parse("machine M {\n}\n");
  REQUIRE(r.model);
  CHECK(r.model->root().id == "main");
}

TEST_CASE("a source without machines is rejected") {
  auto r = parse("model x\n");
  CHECK_FALSE(r.model);
  CHECK(has_code(r.diagnostics, "no-root-machine"));
}

TEST_CASE("arc ids count flows and triggers separately, in order") {
  auto r = parse(
      "machine M {\n"
      "  stage Create a\n"
      "  stage Process b\n"
      "  stage Create c\n"
      "}\n"
      "flow x a -> b\n"
      "trigger b -> c\n"
      "flow y c -> b\n");
  REQUIRE(r.model);
  REQUIRE(r.model->arcs.size() == 3);
  CHECK(r.model->arcs[0].id == "f1");
  CHECK(r.model->arcs[1].id == "t1");
  CHECK(r.model->arcs[2].id == "f2");
}

TEST_CASE("duplicate identifiers are rejected across element kinds") {
  auto r = parse(
      "machine M {\n"
      "  stage Create a\n"
      "  stage Process a\n"
      "}\n");
  CHECK_FALSE(r.model);
  CHECK(has_code(r.diagnostics, "duplicate-identifier"));
}

TEST_CASE("unbalanced machine blocks are rejected") {
  CHECK(has_code(parse("machine M {\n").diagnostics, "unbalanced-block"));
  CHECK(has_code(parse("machine M {\n}\n}\n").diagnostics, "unbalanced-block"));
}

TEST_CASE("unknown stage kinds and dangling arcs are rejected") {
  CHECK(has_code(parse("machine M {\n  stage Destroy a\n}\n").diagnostics, "unknown-stage-kind"));
  CHECK(has_code(parse("machine M {\n  stage Create a\n}\nflow x a -> nope\n").diagnostics,
                 "dangling-reference"));
}

TEST_CASE("variable initials must sit inside the declared domain") {
  CHECK(has_code(parse("var v : enum(a, b) = c\nmachine M {\n}\n").diagnostics,
                 "initial-out-of-domain"));
  auto ok = parse("var v : enum(a, b) = b\nmachine M {\n}\n");
  REQUIRE(ok.model);
  CHECK(ok.model->variable("v")->initial.sym == "b");
}

TEST_CASE("trigger guards and actions survive parsing") {
  auto r = parse(
      "var x : number = 0\n"
      "machine M {\n"
      "  stage Process p\n"
      "  stage Create c\n"
      "}\n"
      "trigger p -> c if x < 3 and now() - x > 1 do x := x + 1; x := x * 2\n");
  REQUIRE(r.model);
  const Arc& t = r.model->arcs[0];
  CHECK(to_string(t.guard) == "x < 3 and now() - x > 1");
  REQUIRE(t.actions.size() == 2);
  CHECK(to_string(t.actions[0]) == "x := x + 1");
  CHECK(to_string(t.actions[1]) == "x := x * 2");
}

TEST_CASE("comments and blank lines are ignored, quotes may contain hashes") {
  auto r = parse(
      "# leading comment\n"
      "model demo\n"
      "\n"
      "machine M \"has # inside\" {   # trailing comment\n"
      "  stage Create a \"label # here\"\n"
      "}\n");
  REQUIRE(r.model);
  CHECK(r.model->machine("M")->name == "has # inside");
  CHECK(r.model->stage("a")->label == "label # here");
}

TEST_CASE("corpus models reparse from their canonical text form") {
  for (const char* name : kCorpus) {
    Model m = load_corpus_model(name);
    auto again = parse(serialize(m), name);
    REQUIRE_MESSAGE(again.model, name);
    CHECK_MESSAGE(structurally_equal(m, *again.model), name);
    // and the canonical form is a fixed point of fmt
    CHECK_MESSAGE(serialize(*again.model) == serialize(m), name);
  }
}

TEST_CASE("interleaved stage and machine declarations reach a canonical order") {
  // stages of the root declared after a nested machine still serialize
  // with their machine's block
  auto r = parse(
      "model mix\n"
      "stage Create early\n"
      "machine Sub {\n"
      "  stage Process inner\n"
      "}\n"
      "stage Create late\n"
      "flow x early -> inner\n");
  REQUIRE(r.model);
  auto again = parse(serialize(*r.model));
  REQUIRE(again.model);
  CHECK(structurally_equal(*r.model, *again.model));
}

TEST_CASE("structural equality ignores spans but not content") {
  Model a = load_corpus_model("book_borrow.tm");
  Model b = a;
  CHECK(structurally_equal(a, b));
  b.arcs[0].thing = "different";
  CHECK_FALSE(structurally_equal(a, b));
}
