#include "thingc/dsl.hpp"

#include <cctype>
#include <sstream>

namespace thingc {

namespace {

// Cursor over one source line.
struct LineScanner {
  std::string line;
  size_t pos = 0;

  void skip_ws() {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) pos++;
  }

  bool done() {
    skip_ws();
    return pos >= line.size();
  }

  char peek() {
    skip_ws();
    return pos < line.size() ? line[pos] : '\0';
  }

  // Identifier, number or standalone punctuation.
  std::string word() {
    skip_ws();
    if (pos >= line.size()) return {};
    char c = line[pos];
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.') {
      size_t start = pos;
      while (pos < line.size()) {
        char d = line[pos];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '.' ||
            (d == '-' && pos + 1 < line.size() && line[pos + 1] != '>')) {
          pos++;
        } else {
          break;
        }
      }
      return line.substr(start, pos - start);
    }
    pos++;
    return std::string(1, c);
  }

  bool eat(const std::string& tok) {
    skip_ws();
    if (line.compare(pos, tok.size(), tok) == 0) {
      pos += tok.size();
      return true;
    }
    return false;
  }

  // Quoted string with \" and \\ escapes. Returns false if not at a quote.
  bool quoted(std::string& out, std::string& err) {
    skip_ws();
    if (pos >= line.size() || line[pos] != '"') return false;
    pos++;
    out.clear();
    while (pos < line.size()) {
      char c = line[pos++];
      if (c == '\\' && pos < line.size()) {
        out += line[pos++];
      } else if (c == '"') {
        return true;
      } else {
        out += c;
      }
    }
    err = "unterminated string";
    return false;
  }

  std::string rest() {
    skip_ws();
    std::string r = line.substr(pos);
    pos = line.size();
    while (!r.empty() && std::isspace(static_cast<unsigned char>(r.back()))) r.pop_back();
    return r;
  }
};

std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (size_t i = 0; i < line.size(); i++) {
    char c = line[i];
    if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_str = !in_str;
    if (c == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

bool is_ident(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

struct Parser {
  std::string filename;
  std::vector<Diagnostic> diags;
  std::string model_name;
  bool saw_model_line = false;

  struct Pending {
    enum class Kind { Machine, End, Stage, Flow, Trigger, Var, Event } kind;
    // machine
    std::string id, name, label, usecase;
    bool actor = false;
    // stage
    StageKind stage_kind = StageKind::Create;
    // flow/trigger
    std::string thing, source, target;
    ExprPtr guard;
    std::vector<Action> actions;
    // var
    VarType var_type = VarType::Number;
    std::vector<std::string> enum_values;
    Value initial;
    // event
    std::vector<std::string> region;
    std::string time;
    SourceSpan span;
  };
  std::vector<Pending> decls;

  SourceSpan span_at(int line_no, int col) const {
    SourceSpan s;
    s.file = filename;
    s.line = line_no;
    s.column = col;
    s.end_line = line_no;
    s.end_column = col;
    return s;
  }

  void error(const std::string& code, const std::string& msg, int line_no, int col) {
    diags.push_back(Diagnostic::error(code, msg, "", span_at(line_no, col)));
  }

  void parse_line(const std::string& raw, int line_no) {
    LineScanner sc{strip_comment(raw)};
    if (sc.done()) return;
    SourceSpan sp = span_at(line_no, static_cast<int>(sc.pos) + 1);
    std::string head = sc.word();

    if (head == "model") {
      std::string id = sc.word();
      if (!is_ident(id)) return error("syntax-error", "expected model name", line_no, 1);
      if (saw_model_line) return error("syntax-error", "duplicate model line", line_no, 1);
      saw_model_line = true;
      model_name = id;
      if (!sc.done()) error("syntax-error", "trailing input after model line", line_no, 1);
      return;
    }
    if (head == "machine") {
      Pending p;
      p.kind = Pending::Kind::Machine;
      p.span = sp;
      p.id = sc.word();
      if (!is_ident(p.id)) return error("syntax-error", "expected machine id", line_no, 1);
      std::string err;
      sc.quoted(p.name, err);
      if (!err.empty()) return error("lexical-error", err, line_no, 1);
      for (;;) {
        if (sc.peek() == '{') break;
        std::string w = sc.word();
        if (w == "actor") {
          p.actor = true;
        } else if (w == "usecase") {
          if (!sc.quoted(p.usecase, err) || !err.empty())
            return error("syntax-error", "expected quoted use-case name", line_no, 1);
        } else {
          return error("syntax-error", "unexpected token '" + w + "' in machine header", line_no,
                       1);
        }
      }
      if (!sc.eat("{") || !sc.done())
        return error("syntax-error", "machine header must end with '{'", line_no, 1);
      decls.push_back(std::move(p));
      return;
    }
    if (head == "}") {
      Pending p;
      p.kind = Pending::Kind::End;
      p.span = sp;
      if (!sc.done()) return error("syntax-error", "trailing input after '}'", line_no, 1);
      decls.push_back(std::move(p));
      return;
    }
    if (head == "stage") {
      Pending p;
      p.kind = Pending::Kind::Stage;
      p.span = sp;
      std::string kind = sc.word();
      auto sk = stage_kind_from_string(kind);
      if (!sk)
        return error("unknown-stage-kind", "unknown stage kind '" + kind + "'", line_no, 1);
      p.stage_kind = *sk;
      p.id = sc.word();
      if (!is_ident(p.id)) return error("syntax-error", "expected stage id", line_no, 1);
      std::string err;
      sc.quoted(p.label, err);
      if (!err.empty()) return error("lexical-error", err, line_no, 1);
      if (!sc.done()) return error("syntax-error", "trailing input after stage", line_no, 1);
      decls.push_back(std::move(p));
      return;
    }
    if (head == "flow") {
      Pending p;
      p.kind = Pending::Kind::Flow;
      p.span = sp;
      p.thing = sc.word();
      p.source = sc.word();
      if (!sc.eat("->")) return error("syntax-error", "expected '->' in flow", line_no, 1);
      p.target = sc.word();
      if (!is_ident(p.thing) || !is_ident(p.source) || !is_ident(p.target) || !sc.done())
        return error("syntax-error", "expected 'flow <thing> <src> -> <dst>'", line_no, 1);
      decls.push_back(std::move(p));
      return;
    }
    if (head == "trigger") {
      Pending p;
      p.kind = Pending::Kind::Trigger;
      p.span = sp;
      p.source = sc.word();
      if (!sc.eat("->")) return error("syntax-error", "expected '->' in trigger", line_no, 1);
      p.target = sc.word();
      if (!is_ident(p.source) || !is_ident(p.target))
        return error("syntax-error", "expected 'trigger <src> -> <dst>'", line_no, 1);
      std::string tail = sc.rest();
      std::string guard_text, action_text;
      // `if <expr>` then `do <action>; ...`; `do` may appear alone.
      if (tail.rfind("if ", 0) == 0) {
        size_t do_pos = tail.find(" do ");
        if (do_pos == std::string::npos) {
          guard_text = tail.substr(3);
        } else {
          guard_text = tail.substr(3, do_pos - 3);
          action_text = tail.substr(do_pos + 4);
        }
      } else if (tail.rfind("do ", 0) == 0) {
        action_text = tail.substr(3);
      } else if (!tail.empty()) {
        return error("syntax-error", "unexpected trigger clause '" + tail + "'", line_no, 1);
      }
      std::string err;
      if (!guard_text.empty()) {
        p.guard = parse_expr(guard_text, err);
        if (!p.guard) return error("syntax-error", "bad guard: " + err, line_no, 1);
      }
      if (!action_text.empty()) {
        std::istringstream as(action_text);
        std::string one;
        while (std::getline(as, one, ';')) {
          size_t assign = one.find(":=");
          if (assign == std::string::npos)
            return error("syntax-error", "action must be '<var> := <expr>'", line_no, 1);
          Action act;
          act.var = one.substr(0, assign);
          while (!act.var.empty() && std::isspace(static_cast<unsigned char>(act.var.back())))
            act.var.pop_back();
          while (!act.var.empty() && std::isspace(static_cast<unsigned char>(act.var.front())))
            act.var.erase(act.var.begin());
          act.value = parse_expr(one.substr(assign + 2), err);
          if (!is_ident(act.var) || !act.value)
            return error("syntax-error", "bad action: " + err, line_no, 1);
          p.actions.push_back(std::move(act));
        }
      }
      decls.push_back(std::move(p));
      return;
    }
    if (head == "var") {
      Pending p;
      p.kind = Pending::Kind::Var;
      p.span = sp;
      p.id = sc.word();
      if (!is_ident(p.id) || !sc.eat(":"))
        return error("syntax-error", "expected 'var <id> : <type> = <initial>'", line_no, 1);
      std::string type = sc.word();
      if (type == "number") {
        p.var_type = VarType::Number;
      } else if (type == "enum") {
        p.var_type = VarType::Enum;
        if (!sc.eat("(")) return error("syntax-error", "expected '(' after enum", line_no, 1);
        for (;;) {
          std::string v = sc.word();
          if (!is_ident(v)) return error("syntax-error", "expected enum value", line_no, 1);
          p.enum_values.push_back(v);
          if (sc.eat(",")) continue;
          if (sc.eat(")")) break;
          return error("syntax-error", "expected ',' or ')' in enum values", line_no, 1);
        }
      } else {
        return error("syntax-error", "unknown variable type '" + type + "'", line_no, 1);
      }
      if (!sc.eat("=")) return error("syntax-error", "expected '=' in var", line_no, 1);
      std::string init = sc.rest();
      if (p.var_type == VarType::Number) {
        try {
          size_t used = 0;
          double v = std::stod(init, &used);
          if (used != init.size()) throw std::invalid_argument(init);
          p.initial = Value::number(v);
        } catch (const std::exception&) {
          return error("syntax-error", "bad numeric initial '" + init + "'", line_no, 1);
        }
      } else {
        p.initial = Value::symbol(init);
      }
      decls.push_back(std::move(p));
      return;
    }
    if (head == "event") {
      Pending p;
      p.kind = Pending::Kind::Event;
      p.span = sp;
      p.id = sc.word();
      std::string err;
      if (!is_ident(p.id) || !sc.quoted(p.name, err) || !err.empty())
        return error("syntax-error", "expected 'event <id> \"<name>\" region { ... }'", line_no,
                     1);
      std::string kw = sc.word();
      if (kw != "region" || !sc.eat("{"))
        return error("syntax-error", "expected 'region {' in event", line_no, 1);
      for (;;) {
        if (sc.eat("}")) break;
        std::string id = sc.word();
        if (id.empty())
          return error("syntax-error", "unterminated region list", line_no, 1);
        p.region.push_back(id);
      }
      if (!sc.done()) {
        std::string kw2 = sc.word();
        if (kw2 != "time")
          return error("syntax-error", "unexpected token '" + kw2 + "' after region", line_no, 1);
        p.time = sc.rest();
      }
      decls.push_back(std::move(p));
      return;
    }
    error("syntax-error", "unknown declaration '" + head + "'", line_no, 1);
  }
};

}  // namespace

ParseResult parse(const std::string& text, const std::string& filename) {
  Parser p;
  p.filename = filename;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) p.parse_line(line, ++line_no);

  ParseResult result;
  result.diagnostics = std::move(p.diags);

  bool any_machine = false;
  for (const auto& d : p.decls)
    if (d.kind == Parser::Pending::Kind::Machine) any_machine = true;
  if (!any_machine) {
    SourceSpan sp;
    sp.file = filename;
    result.diagnostics.push_back(
        Diagnostic::error("no-root-machine", "source declares no machine", "", sp));
    return result;
  }

  ModelBuilder b(p.saw_model_line ? p.model_name : "main");
  for (auto& d : p.decls) {
    using K = Parser::Pending::Kind;
    switch (d.kind) {
      case K::Machine: b.begin_machine(d.id, d.name, d.actor, d.usecase, d.span); break;
      case K::End: b.end_machine(d.span); break;
      case K::Stage: b.add_stage(d.stage_kind, d.id, d.label, d.span); break;
      case K::Flow: b.add_flow(d.thing, d.source, d.target, d.span); break;
      case K::Trigger:
        b.add_trigger(d.source, d.target, d.guard, std::move(d.actions), d.span);
        break;
      case K::Var:
        b.add_variable(d.id, d.var_type, std::move(d.enum_values), d.initial, d.span);
        break;
      case K::Event:
        b.add_event(d.id, d.name, std::move(d.region), d.time, d.span);
        break;
    }
  }
  BuildResult built = b.finish();
  for (auto& diag : built.diagnostics) result.diagnostics.push_back(std::move(diag));
  if (!has_errors(result.diagnostics)) result.model = std::move(built.model);
  return result;
}

namespace {

void serialize_machine(const Model& m, const Machine& mm, int depth, std::ostringstream& os) {
  std::string ind(static_cast<size_t>(depth) * 2, ' ');
  os << ind << "machine " << mm.id;
  if (mm.name != mm.id) os << " " << quote(mm.name);
  if (mm.is_actor) os << " actor";
  if (!mm.usecase.empty()) os << " usecase " << quote(mm.usecase);
  os << " {\n";
  std::string inner(static_cast<size_t>(depth + 1) * 2, ' ');
  for (const auto& s : m.stages) {
    if (s.machine != mm.id) continue;
    os << inner << "stage " << to_string(s.kind) << " " << s.id;
    if (!s.label.empty()) os << " " << quote(s.label);
    os << "\n";
  }
  for (const auto& child : m.machines)
    if (child.parent == mm.id) serialize_machine(m, child, depth + 1, os);
  os << ind << "}\n";
}

}  // namespace

std::string serialize(const Model& m) {
  std::ostringstream os;
  os << "model " << m.name << "\n";

  for (const auto& v : m.variables) {
    os << "var " << v.id << " : ";
    if (v.type == VarType::Number) {
      os << "number";
    } else {
      os << "enum(";
      for (size_t i = 0; i < v.enum_values.size(); i++) {
        if (i) os << ", ";
        os << v.enum_values[i];
      }
      os << ")";
    }
    os << " = " << v.initial.str() << "\n";
  }

  const std::string root_id = m.root().id;
  for (const auto& s : m.stages) {
    if (s.machine != root_id) continue;
    os << "stage " << to_string(s.kind) << " " << s.id;
    if (!s.label.empty()) os << " " << quote(s.label);
    os << "\n";
  }
  for (const auto& mm : m.machines) {
    if (mm.parent != root_id) continue;
    os << "\n";
    serialize_machine(m, mm, 0, os);
  }

  bool first_arc = true;
  for (const auto& a : m.arcs) {
    if (first_arc) {
      os << "\n";
      first_arc = false;
    }
    if (a.kind == ArcKind::Flow) {
      os << "flow " << a.thing << " " << a.source << " -> " << a.target << "\n";
    } else {
      os << "trigger " << a.source << " -> " << a.target;
      if (a.guard) os << " if " << to_string(a.guard);
      if (!a.actions.empty()) {
        os << " do ";
        for (size_t i = 0; i < a.actions.size(); i++) {
          if (i) os << "; ";
          os << to_string(a.actions[i]);
        }
      }
      os << "\n";
    }
  }

  bool first_event = true;
  for (const auto& e : m.events) {
    if (first_event) {
      os << "\n";
      first_event = false;
    }
    os << "event " << e.id << " " << quote(e.name) << " region {";
    for (const auto& el : e.region) os << " " << el;
    os << " }";
    if (!e.time.empty()) os << " time " << e.time;
    os << "\n";
  }
  return os.str();
}

}  // namespace thingc
