#include <doctest.h>

#include <algorithm>
#include <set>

#include "support.hpp"
#include "thingc/random_model.hpp"
#include "thingc/transform.hpp"
#include "thingc/validate.hpp"

using namespace thingc;

namespace {

const char* kCorpus[] = {"book_borrow.tm", "box_arrival.tm", "control_light.tm", "atm.tm"};

int count_kind(const Model& m, StageKind k) {
  int n = 0;
  for (const auto& s : m.stages)
    if (s.kind == k) n++;
  return n;
}

std::multiset<FlowTuple> relation_set(const Model& m) {
  auto rel = flow_relation(m);
  return {rel.begin(), rel.end()};
}

}  // namespace

TEST_CASE("level 1 removes every Release and Transfer stage from the corpus") {
  for (const char* name : kCorpus) {
    Model m = load_corpus_model(name);
    auto r = simplify_level1(m);
    REQUIRE_MESSAGE(r.ok(), name);
    CHECK_MESSAGE(count_kind(*r.model, StageKind::Release) == 0, name);
    CHECK_MESSAGE(count_kind(*r.model, StageKind::Transfer) == 0, name);
    // result conforms to the level-1 legality table
    auto diags = validate_model(*r.model, {false, FlowTable::Level1});
    CHECK_MESSAGE(!has_errors(diags), name,
                  diags.empty() ? "" : (": " + diags.front().str()));
  }
}

TEST_CASE("both levels preserve the flow relation on the corpus") {
  for (const char* name : kCorpus) {
    Model m = load_corpus_model(name);
    auto before = relation_set(m);
    auto l1 = simplify_level1(m);
    REQUIRE(l1.model);
    CHECK_MESSAGE(relation_set(*l1.model) == before, name, " level 1");
    auto l2 = simplify_level2(m);
    REQUIRE(l2.model);
    CHECK_MESSAGE(relation_set(*l2.model) == before, name, " level 2");
  }
}

TEST_CASE("simplification is idempotent on the corpus") {
  for (const char* name : kCorpus) {
    Model m = load_corpus_model(name);
    auto l1 = simplify_level1(m);
    REQUIRE(l1.model);
    auto l1_again = simplify_level1(*l1.model);
    REQUIRE(l1_again.model);
    CHECK_MESSAGE(structurally_equal(*l1.model, *l1_again.model), name);

    auto l2 = simplify_level2(m);
    REQUIRE(l2.model);
    auto l2_again = simplify_level2(*l2.model);
    REQUIRE(l2_again.model);
    CHECK_MESSAGE(structurally_equal(*l2.model, *l2_again.model), name);
  }
}

TEST_CASE("level 2 collapses book borrowing to machine-level arrows") {
  Model m = load_corpus_model("book_borrow.tm");
  auto r = simplify_level2(m);
  REQUIRE(r.model);
  CHECK_FALSE(has_errors(r.diagnostics));
  const Model& out = *r.model;
  CHECK(out.stages.empty());  // every stage is recoverable in this model
  REQUIRE(out.arcs.size() == 3);
  CHECK(out.arcs[0].kind == ArcKind::Flow);
  CHECK(out.arcs[0].thing == "request");
  CHECK(out.arcs[0].source == "Student");
  CHECK(out.arcs[0].target == "Library");
  CHECK(out.arcs[1].thing == "book");
  CHECK(out.arcs[1].source == "Library");
  CHECK(out.arcs[1].target == "Student");
  CHECK(out.arcs[2].kind == ArcKind::Trigger);
  CHECK(out.arcs[2].source == "Library");
  CHECK(out.arcs[2].target == "Record");
}

TEST_CASE("level 2 keeps unrecoverable stages and says so") {
  // box_arrival's form_sign sits mid-flow: Receive -> Process -> Release
  // cannot be rebuilt from arrow endpoints alone
  Model m = load_corpus_model("box_arrival.tm");
  auto r = simplify_level2(m);
  REQUIRE(r.model);
  bool flagged = false;
  for (const auto& d : r.diagnostics)
    if (d.code == "level2-retained" && d.location == "form_sign") flagged = true;
  CHECK(flagged);
  const Stage* sign = r.model->stage("form_sign");
  REQUIRE(sign != nullptr);
  CHECK(sign->kind == StageKind::Process);
}

TEST_CASE("broken release chains are reported, not mangled") {
  auto r = parse(
      "machine A {\n  stage Create c\n  stage Release rel\n  stage Transfer out\n}\n"
      "flow x c -> rel\nflow x rel -> out\n");  // chain never reaches a Receive
  REQUIRE(r.model);
  auto t = simplify_level1(*r.model);
  CHECK_FALSE(t.ok());
  bool found = false;
  for (const auto& d : t.diagnostics)
    if (d.code == "unspliceable-chain") found = true;
  CHECK(found);
}

TEST_CASE("a model with no Release or Transfer stages is its own level 1") {
  auto r = parse(
      "machine A {\n  stage Create c\n  stage Process p\n}\n"
      "flow x c -> p\n");
  REQUIRE(r.model);
  auto t = simplify_level1(*r.model);
  REQUIRE(t.ok());
  CHECK(structurally_equal(*r.model, *t.model));
}

TEST_CASE("use-case reduction needs at least one actor") {
  auto r = parse("machine M {\n}\n");
  REQUIRE(r.model);
  auto uc = reduce_to_use_case(*r.model);
  CHECK_FALSE(uc.ok());
  CHECK(uc.diagnostics.front().code == "no-actors");
}

TEST_CASE("book borrowing reduces to one actor, one use case, one association") {
  Model m = load_corpus_model("book_borrow.tm");
  auto uc = reduce_to_use_case(m);
  REQUIRE(uc.ok());
  CHECK(uc.diagram->actors == std::vector<std::string>{"Student"});
  CHECK(uc.diagram->use_cases == std::vector<std::string>{"Borrow Book"});
  REQUIRE(uc.diagram->associations.size() == 1);
  CHECK(uc.diagram->associations[0] ==
        std::pair<std::string, std::string>{"Student", "Borrow Book"});
}

TEST_CASE("atm exposes two tagged use cases, both tied to the operator") {
  Model m = load_corpus_model("atm.tm");
  auto uc = reduce_to_use_case(m);
  REQUIRE(uc.ok());
  CHECK(uc.diagram->actors == std::vector<std::string>{"Operator"});
  CHECK(uc.diagram->use_cases ==
        std::vector<std::string>{"System Startup", "System Shutdown"});
  CHECK(uc.diagram->associations.size() == 2);
}

TEST_CASE("untagged models fall back to top-level machines as use cases") {
  Model m = load_corpus_model("box_arrival.tm");
  auto uc = reduce_to_use_case(m);
  REQUIRE(uc.ok());
  CHECK(uc.diagram->actors == std::vector<std::string>{"Transport Company"});
  CHECK(uc.diagram->use_cases.size() == 3);  // RA, System, RO by display name
  REQUIRE(uc.diagram->associations.size() == 1);
  CHECK(uc.diagram->associations[0].second == "Receiving Agent");
}

TEST_CASE("randomized models: simplification properties hold across 1200 seeds") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 1200; seed++) {
    Model m = random_model(seed);
    CAPTURE(seed);
    REQUIRE_FALSE(has_errors(validate_model(m, {})));

    auto before = relation_set(m);
    auto l1 = simplify_level1(m);
    REQUIRE(l1.ok());
    CHECK(count_kind(*l1.model, StageKind::Release) == 0);
    CHECK(count_kind(*l1.model, StageKind::Transfer) == 0);
    CHECK(relation_set(*l1.model) == before);
    CHECK(l1.model->stages.size() <= m.stages.size());

    auto l1_again = simplify_level1(*l1.model);
    REQUIRE(l1_again.ok());
    CHECK(structurally_equal(*l1.model, *l1_again.model));

    auto l2 = simplify_level2(m);
    REQUIRE(l2.model);
    CHECK(relation_set(*l2.model) == before);
    CHECK(l2.model->stages.size() <= l1.model->stages.size());
    auto l2_again = simplify_level2(*l2.model);
    REQUIRE(l2_again.model);
    CHECK(structurally_equal(*l2.model, *l2_again.model));

    // canonical text round-trip on the generated model itself
    auto re = parse(serialize(m));
    REQUIRE(re.model);
    CHECK(structurally_equal(m, *re.model));
    checked++;
  }
  CHECK(checked == 1200);
}
