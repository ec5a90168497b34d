#include "thingc/random_model.hpp"

#include <random>

namespace thingc {

namespace {

struct PlannedStage {
  std::string id;
  StageKind kind;
  size_t machine;  // 1-based machine index
};

}  // namespace

Model random_model(std::uint64_t seed, const RandomModelOptions& opts) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };

  int machine_count = pick(1, std::max(1, opts.max_machines));
  int chain_count = pick(1, std::max(1, opts.max_chains));

  std::vector<PlannedStage> planned;
  std::vector<std::pair<std::string, std::string>> flows;  // (thing, src->dst pairs flattened)
  std::vector<std::string> flow_things;
  int stage_n = 0;
  auto fresh = [&](StageKind kind, size_t machine) {
    planned.push_back({"s" + std::to_string(++stage_n), kind, machine});
    return planned.back().id;
  };
  auto link = [&](const std::string& thing, const std::string& a, const std::string& b) {
    flows.emplace_back(a, b);
    flow_things.push_back(thing);
  };

  for (int c = 0; c < chain_count; c++) {
    std::string thing = "thing" + std::to_string(c + 1);
    size_t at = static_cast<size_t>(pick(1, machine_count));
    int hops = machine_count > 1 ? pick(0, 2) : 0;
    if (hops == 0) {
      // intra-machine pipeline: Create -> Process
      std::string a = fresh(StageKind::Create, at);
      std::string b = fresh(StageKind::Process, at);
      link(thing, a, b);
      continue;
    }
    // Create -> Release -> Transfer, crossing hops, ending Receive -> Process
    std::string cur = fresh(StageKind::Create, at);
    for (int h = 0; h < hops; h++) {
      std::string rel = fresh(StageKind::Release, at);
      std::string out = fresh(StageKind::Transfer, at);
      size_t next = at;
      while (next == at) next = static_cast<size_t>(pick(1, machine_count));
      std::string in = fresh(StageKind::Transfer, next);
      std::string rcv = fresh(StageKind::Receive, next);
      link(thing, cur, rel);
      link(thing, rel, out);
      link(thing, out, in);
      link(thing, in, rcv);
      cur = rcv;
      at = next;
    }
    if (pick(0, 1)) {
      std::string proc = fresh(StageKind::Process, at);
      link(thing, cur, proc);
    }
  }

  ModelBuilder b("rnd");
  bool with_var = opts.with_variables && pick(0, 1);
  if (with_var) b.add_variable("x", VarType::Number, {}, Value::number(0));
  for (int mi = 1; mi <= machine_count; mi++) {
    b.begin_machine("m" + std::to_string(mi), "", pick(0, 3) == 0, "");
    for (const auto& s : planned)
      if (s.machine == static_cast<size_t>(mi)) b.add_stage(s.kind, s.id, "");
    b.end_machine();
  }
  for (size_t i = 0; i < flows.size(); i++)
    b.add_flow(flow_things[i], flows[i].first, flows[i].second);

  std::vector<std::string> trigger_sources, all_stages;
  for (const auto& s : planned) {
    all_stages.push_back(s.id);
    if (s.kind == StageKind::Process || s.kind == StageKind::Create)
      trigger_sources.push_back(s.id);
  }
  int trigger_count = pick(0, std::max(0, opts.max_triggers));
  for (int t = 0; t < trigger_count && !trigger_sources.empty(); t++) {
    const std::string& src = trigger_sources[static_cast<size_t>(
        pick(0, static_cast<int>(trigger_sources.size()) - 1))];
    const std::string& dst =
        all_stages[static_cast<size_t>(pick(0, static_cast<int>(all_stages.size()) - 1))];
    ExprPtr guard;
    std::vector<Action> actions;
    if (with_var) {
      std::string err;
      if (pick(0, 1)) guard = parse_expr("x < 3", err);
      if (pick(0, 1)) actions.push_back({"x", parse_expr("x + 1", err)});
    }
    b.add_trigger(src, dst, std::move(guard), std::move(actions));
  }

  BuildResult r = b.finish();
  return *r.model;  // construction is valid for every seed
}

}  // namespace thingc
