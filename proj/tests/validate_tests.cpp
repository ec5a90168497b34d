#include <doctest.h>

#include <algorithm>

#include "support.hpp"
#include "thingc/validate.hpp"

using namespace thingc;

namespace {

const StageKind kKinds[] = {StageKind::Create, StageKind::Process, StageKind::Release,
                            StageKind::Transfer, StageKind::Receive};

// Independent statement of the legality tables as explicit pair lists.
bool full_intra_oracle(StageKind s, StageKind d) {
  using K = StageKind;
  const std::pair<K, K> legal[] = {
      {K::Transfer, K::Receive}, {K::Receive, K::Process}, {K::Receive, K::Release},
      {K::Process, K::Release},  {K::Create, K::Process},  {K::Create, K::Release},
      {K::Release, K::Transfer},
  };
  return std::find(std::begin(legal), std::end(legal), std::make_pair(s, d)) != std::end(legal);
}

bool full_cross_oracle(StageKind s, StageKind d) {
  return s == StageKind::Transfer && d == StageKind::Transfer;
}

bool level1_oracle(StageKind s, StageKind d, bool crossing) {
  using K = StageKind;
  if (d == K::Receive) return s == K::Create || s == K::Process || s == K::Receive;
  if (crossing) return false;
  return d == K::Process && (s == K::Create || s == K::Receive);
}

Model tiny_model(const std::string& extra) {
  auto r = parse(
      "machine A {\n  stage Create a_c\n  stage Process a_p\n  stage Release a_rel\n"
      "  stage Transfer a_out\n}\n"
      "machine B {\n  stage Transfer b_in\n  stage Receive b_rcv\n}\n" +
      extra);
  REQUIRE(r.model);
  return *r.model;
}

bool has_code(const std::vector<Diagnostic>& diags, const std::string& code,
              Severity sev = Severity::Error) {
  for (const auto& d : diags)
    if (d.code == code && d.severity == sev) return true;
  return false;
}

}  // namespace

TEST_CASE("full flow table matches the pairwise oracle, all 50 combinations") {
  for (StageKind s : kKinds)
    for (StageKind d : kKinds) {
      CHECK_MESSAGE(flow_hop_legal(s, d, false, FlowTable::Full) == full_intra_oracle(s, d),
                    to_string(s), " -> ", to_string(d));
      CHECK_MESSAGE(flow_hop_legal(s, d, true, FlowTable::Full) == full_cross_oracle(s, d),
                    to_string(s), " => ", to_string(d));
    }
}

TEST_CASE("level-1 flow table matches its oracle") {
  for (StageKind s : kKinds)
    for (StageKind d : kKinds)
      for (bool crossing : {false, true})
        CHECK_MESSAGE(
            flow_hop_legal(s, d, crossing, FlowTable::Level1) == level1_oracle(s, d, crossing),
            to_string(s), crossing ? " => " : " -> ", to_string(d));
}

TEST_CASE("triggers may start only at Process or Create stages") {
  for (StageKind s : kKinds)
    CHECK(trigger_source_legal(s) == (s == StageKind::Process || s == StageKind::Create));
}

TEST_CASE("validation flags illegal hops and trigger sources") {
  Model bad = tiny_model("flow x a_c -> a_out\n");  // Create -> Transfer intra
  CHECK(has_code(validate_model(bad, {}), "illegal-flow-hop"));

  Model cross = tiny_model("flow x a_out -> b_rcv\n");  // Transfer => Receive across
  CHECK(has_code(validate_model(cross, {}), "illegal-flow-hop"));

  Model trig = tiny_model("trigger a_rel -> a_p\n");  // Release sources a trigger
  CHECK(has_code(validate_model(trig, {}), "illegal-trigger-source"));
  // lax mode downgrades exactly this check to a warning
  auto lax = validate_model(trig, {true, FlowTable::Full});
  CHECK_FALSE(has_errors(lax));
  CHECK(has_code(lax, "illegal-trigger-source", Severity::Warning));
}

TEST_CASE("guard identifiers must name variables or enum values") {
  auto r = parse(
      "var light : enum(ON, OFF) = OFF\n"
      "machine M {\n  stage Process p\n  stage Create c\n}\n"
      "trigger p -> c if light == ON\n");
  REQUIRE(r.model);
  CHECK(validate_model(*r.model, {}).empty());

  auto bad = parse(
      "machine M {\n  stage Process p\n  stage Create c\n}\n"
      "trigger p -> c if missing == 1\n");
  REQUIRE(bad.model);
  CHECK(has_code(validate_model(*bad.model, {}), "unknown-variable"));

  auto bad_action = parse(
      "machine M {\n  stage Process p\n  stage Create c\n}\n"
      "trigger p -> c do missing := 1\n");
  REQUIRE(bad_action.model);
  CHECK(has_code(validate_model(*bad_action.model, {}), "unknown-variable"));
}

TEST_CASE("corpus models validate with no diagnostics at all") {
  for (const char* name : {"book_borrow.tm", "box_arrival.tm", "control_light.tm", "atm.tm"}) {
    Model m = load_corpus_model(name);
    auto diags = validate_model(m, {});
    CHECK_MESSAGE(diags.empty(), name, ": ", diags.empty() ? "" : diags.front().str());
  }
}

TEST_CASE("flow relation collapses transfer chains to one tuple") {
  // A releases x through two Transfer hops into B
  auto r = parse(
      "machine A {\n  stage Create c\n  stage Release rel\n  stage Transfer out\n}\n"
      "machine B {\n  stage Transfer in\n  stage Receive rcv\n}\n"
      "flow x c -> rel\nflow x rel -> out\nflow x out -> in\nflow x in -> rcv\n");
  REQUIRE(r.model);
  auto rel = flow_relation(*r.model);
  REQUIRE(rel.size() == 1);
  CHECK(rel[0] == FlowTuple{"A", "x", "B"});
}

TEST_CASE("flow relation walks chains through intermediate machines") {
  // x crosses A -> B -> C via back-to-back Transfer stages; the relation
  // records one tuple per crossing chain segment start
  auto r = parse(
      "machine A {\n  stage Create c\n  stage Release rel\n  stage Transfer out\n}\n"
      "machine B {\n  stage Transfer mid\n}\n"
      "machine C {\n  stage Transfer in\n  stage Receive rcv\n}\n"
      "flow x c -> rel\nflow x rel -> out\nflow x out -> mid\nflow x mid -> in\n"
      "flow x in -> rcv\n");
  REQUIRE(r.model);
  auto rel = flow_relation(*r.model);
  REQUIRE(rel.size() == 1);
  CHECK(rel[0] == FlowTuple{"A", "x", "C"});
}

TEST_CASE("corpus flow relations match their frozen tuple sets") {
  Model book = load_corpus_model("book_borrow.tm");
  auto rel = flow_relation(book);
  REQUIRE(rel.size() == 2);
  CHECK(rel[0] == FlowTuple{"Student", "request", "Library"});
  CHECK(rel[1] == FlowTuple{"Library", "book", "Student"});

  Model box = load_corpus_model("box_arrival.tm");
  auto box_rel = flow_relation(box);
  CHECK(box_rel.size() == 9);
  auto contains = [&](const FlowTuple& t) {
    return std::find(box_rel.begin(), box_rel.end(), t) != box_rel.end();
  };
  CHECK(contains({"TC", "box", "RA"}));
  CHECK(contains({"TC", "form", "RA"}));
  CHECK(contains({"RA", "form", "TC"}));
  CHECK(contains({"RA", "bag", "Cart"}));
  CHECK(contains({"Cart", "cart", "RO"}));
  CHECK(contains({"RA", "nbags", "System"}));
  CHECK(contains({"RA", "bagid", "System"}));
  CHECK(contains({"RA", "time", "System"}));
  CHECK(contains({"RA", "raid", "System"}));

  CHECK(flow_relation(load_corpus_model("control_light.tm")).size() == 1);
  CHECK(flow_relation(load_corpus_model("atm.tm")).size() == 4);
}

TEST_CASE("flows carrying guards or missing things are rejected") {
  Model m = tiny_model("flow x a_c -> a_p\n");
  // fabricate a broken arc directly: flows with trigger payloads
  m.arcs[0].actions.push_back({"v", Expr::make_number(1)});
  CHECK(has_code(validate_model(m, {}), "flow-with-trigger-payload"));
  m.arcs[0].actions.clear();
  m.arcs[0].thing.clear();
  CHECK(has_code(validate_model(m, {}), "flow-missing-thing"));
}
