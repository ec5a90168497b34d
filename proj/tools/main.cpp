#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "thingc/dsl.hpp"
#include "thingc/events.hpp"
#include "thingc/json_io.hpp"
#include "thingc/render.hpp"
#include "thingc/sim.hpp"
#include "thingc/transform.hpp"
#include "thingc/validate.hpp"

namespace fs = std::filesystem;
using namespace thingc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitUsage = 2;

bool use_color() {
  const char* v = std::getenv("THINGC_COLOR");
  if (!v) return false;
  std::string s = v;
  return s == "1" || s == "always" || s == "yes";
}

void print_diags(const std::vector<Diagnostic>& diags, bool as_json) {
  if (as_json) {
    if (!diags.empty()) std::cerr << diagnostics_to_json(diags).dump(2) << "\n";
    return;
  }
  bool color = use_color();
  for (const auto& d : diags) {
    if (color)
      std::cerr << (d.severity == Severity::Error ? "\033[31m" : "\033[33m") << d.str()
                << "\033[0m\n";
    else
      std::cerr << d.str() << "\n";
  }
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "cannot open " << path << "\n";
    return false;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

bool write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write " << path << "\n";
    return false;
  }
  out << content;
  return true;
}

// parse + validate; returns model or nullopt (diagnostics already printed)
std::optional<Model> load_model(const std::string& path, bool lax, bool as_json, int& exit_code,
                                FlowTable table = FlowTable::Full, bool run_validation = false) {
  std::string text;
  if (!read_file(path, text)) {
    exit_code = kExitUsage;
    return std::nullopt;
  }
  ParseResult pr = parse(text, path);
  std::vector<Diagnostic> diags = pr.diagnostics;
  if (pr.model && run_validation) {
    auto v = validate_model(*pr.model, {lax, table});
    diags.insert(diags.end(), v.begin(), v.end());
    for (const auto& e : pr.model->events) {
      auto r = check_region(*pr.model, e);
      diags.insert(diags.end(), r.begin(), r.end());
    }
  }
  print_diags(diags, as_json);
  if (!pr.model || has_errors(diags)) {
    exit_code = pr.model ? kExitDiagnostics : kExitDiagnostics;
    return std::nullopt;
  }
  exit_code = kExitOk;
  return pr.model;
}

std::string behavior_text(const BehaviorGraph& g) {
  std::ostringstream os;
  for (const auto& n : g.nodes) os << n << "\n";
  for (const auto& e : g.edges) os << e.from << " -> " << e.to << "\n";
  return os.str();
}

// ---- corpus verification ----------------------------------------------

struct CorpusReport {
  int checked = 0;
  int failed = 0;
  void record(const std::string& what, bool ok) {
    checked++;
    if (!ok) failed++;
    std::cout << (ok ? "ok   " : "FAIL ") << what << "\n";
  }
};

std::vector<std::string> sorted_files(const fs::path& dir, const std::string& ext) {
  std::vector<std::string> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

std::string model_for_scenario(const fs::path& dir, const std::string& tms_stem) {
  std::string best;
  for (const auto& f : sorted_files(dir, ".tm")) {
    std::string stem = fs::path(f).stem().string();
    if (tms_stem.rfind(stem, 0) == 0 && stem.size() > best.size()) best = stem;
  }
  return best;
}

// Every artifact derived from a corpus model, keyed by golden file name.
std::map<std::string, std::string> corpus_artifacts(const fs::path& dir) {
  std::map<std::string, std::string> arts;
  for (const auto& f : sorted_files(dir, ".tm")) {
    std::string stem = fs::path(f).stem().string();
    std::string text;
    if (!read_file(f, text)) continue;
    ParseResult pr = parse(text, f);
    if (!pr.model) {
      arts[stem + ".PARSE-ERROR"] = "unparseable";
      continue;
    }
    const Model& m = *pr.model;
    arts[stem + ".behavior.json"] = behavior_to_json(build_behavior(m, m.events)).dump(2) + "\n";
    arts[stem + ".flow.json"] = flow_relation_to_json(flow_relation(m)).dump(2) + "\n";
    arts[stem + ".send.json"] = events_to_json(detect_send_events(m)).dump(2) + "\n";
    if (auto uc = reduce_to_use_case(m); uc.diagram)
      arts[stem + ".usecase.json"] = use_case_to_json(*uc.diagram).dump(2) + "\n";
    if (auto l1 = simplify_level1(m); l1.model) {
      arts[stem + ".level1.tm"] = serialize(*l1.model);
      if (auto l2 = simplify_level2(m); l2.model)
        arts[stem + ".level2.tm"] = serialize(*l2.model);
    }
  }
  for (const auto& f : sorted_files(dir, ".tms")) {
    std::string tms_stem = fs::path(f).stem().string();
    std::string model_stem = model_for_scenario(dir, tms_stem);
    if (model_stem.empty()) continue;
    std::string mtext, stext;
    if (!read_file((dir / (model_stem + ".tm")).string(), mtext) || !read_file(f, stext))
      continue;
    ParseResult pr = parse(mtext, model_stem + ".tm");
    if (!pr.model) continue;
    auto sr = load_scenario(stext, *pr.model, f);
    if (!sr.scenario) continue;
    auto sim = simulate(*pr.model, *sr.scenario);
    if (!sim.trace) continue;
    arts[tms_stem + ".trace.jsonl"] = trace_to_jsonl(*sim.trace);
    auto occ = trace_to_events(*pr.model, *sim.trace, pr.model->events);
    arts[tms_stem + ".occurrences.json"] = occurrences_to_json(occ.occurrences).dump(2) + "\n";
  }
  return arts;
}

int corpus_verify(const fs::path& dir) {
  CorpusReport report;
  // models must parse and validate clean first
  for (const auto& f : sorted_files(dir, ".tm")) {
    std::string text;
    bool ok = read_file(f, text);
    if (ok) {
      ParseResult pr = parse(text, f);
      ok = pr.model.has_value();
      if (ok) {
        auto diags = validate_model(*pr.model, {});
        for (const auto& e : pr.model->events) {
          auto r = check_region(*pr.model, e);
          diags.insert(diags.end(), r.begin(), r.end());
        }
        ok = !has_errors(diags);
        if (!ok) print_diags(diags, false);
      }
    }
    report.record(fs::path(f).filename().string() + " validates", ok);
  }
  auto arts = corpus_artifacts(dir);
  for (const auto& [name, content] : arts) {
    fs::path golden = dir / "golden" / name;
    std::string expected;
    bool ok = read_file(golden.string(), expected) && expected == content;
    report.record(name, ok);
  }
  std::cout << report.checked << " checks, " << report.failed << " failures\n";
  return report.failed == 0 ? kExitOk : kExitDiagnostics;
}

int corpus_bless(const fs::path& dir) {
  fs::create_directories(dir / "golden");
  for (const auto& [name, content] : corpus_artifacts(dir)) {
    std::ofstream out(dir / "golden" / name, std::ios::binary);
    out << content;
    std::cout << "wrote " << (dir / "golden" / name).string() << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thinging Machine model toolkit"};
  app.require_subcommand(1);

  std::string file, out, scenario_file, corpus_dir;
  bool lax = false, as_json = false, occurrences = false, overlay = false;
  int level = 1;
  std::string what = "model";

  auto add_file = [&](CLI::App* cmd) {
    cmd->add_option("file", file, "model file")->required();
    cmd->add_flag("--json", as_json, "JSON output");
    cmd->add_flag("--lax", lax, "downgrade trigger-source violations to warnings");
    cmd->add_option("-o,--output", out, "output path (default stdout)");
  };

  std::string table = "full";
  auto* check = app.add_subcommand("check", "parse and validate a model");
  add_file(check);
  check->add_option("--table", table, "flow legality table: full or level1")
      ->check(CLI::IsMember({"full", "level1"}));
  auto* fmt = app.add_subcommand("fmt", "print the canonical text form");
  add_file(fmt);
  auto* simplify = app.add_subcommand("simplify", "apply a simplification level");
  add_file(simplify);
  simplify->add_option("--level", level, "1 or 2")->required()->check(CLI::Range(1, 2));
  auto* usecase = app.add_subcommand("usecase", "reduce to a use-case diagram");
  add_file(usecase);
  auto* events = app.add_subcommand("events", "list declared events");
  add_file(events);
  auto* behavior = app.add_subcommand("behavior", "build the event chronology graph");
  add_file(behavior);
  auto* sendscan = app.add_subcommand("sendscan", "detect send events");
  add_file(sendscan);
  auto* sim = app.add_subcommand("sim", "execute a scenario");
  add_file(sim);
  sim->add_option("scenario", scenario_file, "scenario file")->required();
  sim->add_flag("--occurrences", occurrences, "print event occurrences instead of the trace");
  auto* render = app.add_subcommand("render", "emit graphviz dot");
  add_file(render);
  render->add_option("--what", what, "model, behavior or usecase")
      ->check(CLI::IsMember({"model", "behavior", "usecase"}));
  render->add_flag("--overlay", overlay, "tint stages and arcs by event region");
  auto* corpus = app.add_subcommand("corpus", "corpus maintenance");
  auto* verify = corpus->add_subcommand("verify", "check corpus models against golden outputs");
  verify->add_option("dir", corpus_dir, "corpus directory");
  auto* bless = corpus->add_subcommand("bless", "regenerate golden outputs");
  bless->add_option("dir", corpus_dir, "corpus directory");
  corpus->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  if (corpus->parsed()) {
    fs::path dir = corpus_dir;
    if (corpus_dir.empty()) {
      const char* env = std::getenv("THINGC_CORPUS");
      dir = env ? fs::path(env) : fs::path("corpus");
    }
    if (!fs::is_directory(dir)) {
      std::cerr << "no corpus directory at " << dir.string() << "\n";
      return kExitUsage;
    }
    return verify->parsed() ? corpus_verify(dir) : corpus_bless(dir);
  }

  int ec = kExitOk;
  auto model = load_model(file, lax, as_json, ec,
                          table == "level1" ? FlowTable::Level1 : FlowTable::Full,
                          check->parsed());
  if (!model) return ec;
  const Model& m = *model;

  std::string output;
  if (check->parsed()) {
    output = as_json ? model_to_json(m).dump(2) + "\n" : "";
  } else if (fmt->parsed()) {
    output = serialize(m);
  } else if (simplify->parsed()) {
    auto r = level == 1 ? simplify_level1(m) : simplify_level2(m);
    print_diags(r.diagnostics, as_json);
    if (!r.model) return kExitDiagnostics;
    output = as_json ? model_to_json(*r.model).dump(2) + "\n" : serialize(*r.model);
  } else if (usecase->parsed()) {
    auto r = reduce_to_use_case(m);
    print_diags(r.diagnostics, as_json);
    if (!r.diagram) return kExitDiagnostics;
    if (as_json) {
      output = use_case_to_json(*r.diagram).dump(2) + "\n";
    } else {
      std::ostringstream os;
      for (const auto& a : r.diagram->actors) os << "actor " << a << "\n";
      for (const auto& u : r.diagram->use_cases) os << "usecase " << u << "\n";
      for (const auto& [a, u] : r.diagram->associations) os << a << " -- " << u << "\n";
      output = os.str();
    }
  } else if (events->parsed()) {
    if (as_json) {
      output = events_to_json(m.events).dump(2) + "\n";
    } else {
      std::ostringstream os;
      for (const auto& e : m.events) os << e.id << " " << e.name << "\n";
      output = os.str();
    }
  } else if (behavior->parsed()) {
    auto g = build_behavior(m, m.events);
    output = as_json ? behavior_to_json(g).dump(2) + "\n" : behavior_text(g);
  } else if (sendscan->parsed()) {
    auto sends = detect_send_events(m);
    if (as_json) {
      output = events_to_json(sends).dump(2) + "\n";
    } else {
      std::ostringstream os;
      for (const auto& e : sends) os << e.id << "\n";
      output = os.str();
    }
  } else if (sim->parsed()) {
    std::string stext;
    if (!read_file(scenario_file, stext)) return kExitUsage;
    auto sr = load_scenario(stext, m, scenario_file);
    print_diags(sr.diagnostics, as_json);
    if (!sr.scenario) return kExitDiagnostics;
    auto r = simulate(m, *sr.scenario);
    print_diags(r.diagnostics, as_json);
    if (!r.trace) return kExitDiagnostics;
    if (occurrences) {
      auto occ = trace_to_events(m, *r.trace, m.events);
      print_diags(occ.diagnostics, as_json);
      output = occurrences_to_json(occ.occurrences).dump(2) + "\n";
    } else {
      output = trace_to_jsonl(*r.trace);
    }
  } else if (render->parsed()) {
    if (what == "model") {
      output = render_model_dot(m, overlay ? m.events : std::vector<EventDef>{});
    } else if (what == "behavior") {
      output = render_behavior_dot(build_behavior(m, m.events));
    } else {
      auto r = reduce_to_use_case(m);
      print_diags(r.diagnostics, as_json);
      if (!r.diagram) return kExitDiagnostics;
      output = render_use_case_dot(*r.diagram);
    }
  }

  if (!write_output(out, output)) return kExitUsage;
  return kExitOk;
}
