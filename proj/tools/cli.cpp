#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "holx/digest.hpp"
#include "holx/error.hpp"
#include "holx/execution.hpp"
#include "holx/holon.hpp"
#include "holx/interop.hpp"
#include "holx/model_io.hpp"
#include "holx/precedence.hpp"
#include "holx/transform.hpp"
#include "holx/validate.hpp"

namespace holx::cli {

namespace {

using nlohmann::json;

enum class Style { plain, good, bad, bold };

struct Printer {
  std::ostream& out;
  bool color;

  std::string styled(const std::string& text, Style s) const {
    if (!color || s == Style::plain) return text;
    const char* code = s == Style::good ? "\x1b[32m" : s == Style::bad ? "\x1b[31m" : "\x1b[1m";
    return code + text + "\x1b[0m";
  }
};

struct Cell {
  std::string text;
  Style style = Style::plain;
};

// Left-aligned columns separated by two spaces; the last column is not padded.
void print_table(const Printer& p, const std::vector<std::string>& header, const std::vector<std::vector<Cell>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].text.size());
  }
  auto line = [&](const std::vector<Cell>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      std::string t = cells[i].text;
      if (i + 1 < cells.size()) t.append(width[i] - t.size() + 2, ' ');
      s += p.styled(t, cells[i].style);
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    p.out << s << '\n';
  };
  std::vector<Cell> head;
  for (const auto& h : header) head.push_back(Cell{h, Style::bold});
  line(head);
  for (const auto& r : rows) line(r);
}

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SchemaViolationInOutput:
      return kInternalError;
    case ErrorCode::DomainFault:
    case ErrorCode::CapabilityMissing:
    case ErrorCode::ConsumedItemAbsent:
    case ErrorCode::RetiredHolon:
    case ErrorCode::TimeRegression:
      return kNegative;
    default:
      return kInputError;
  }
}

SystemModel load_valid(const std::string& file) {
  SystemModel m = load_model(file);
  const auto violations = validate(m);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw Error(ErrorCode::InvalidModel,
                "model has " + std::to_string(violations.size()) + " violation(s), first: " + v.code + " " +
                    v.subject + ": " + v.message,
                file);
  }
  return m;
}

void dump(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

std::string witness_text(const Witness& w) {
  switch (w.kind) {
    case WitnessKind::predecessor: return w.id;
    case WitnessKind::external_flow: return "external " + w.id;
    case WitnessKind::self: return "self";
  }
  return "?";
}

json verdict_json(const InteropVerdict& v) {
  json j;
  j["process"] = v.process;
  j["interoperable"] = v.interoperable;
  j["unmatched"] = json::array();
  for (const auto& u : v.unmatched) j["unmatched"].push_back(to_string(u));
  j["producers"] = json::object();
  for (const auto& [item, w] : v.producers) {
    j["producers"][to_string(item)] = json{{"kind", std::string(to_string(w.kind))}, {"id", w.id}};
  }
  return j;
}

// ---- commands ----

int cmd_validate(const Printer& p, const std::string& file, bool as_json) {
  const SystemModel m = load_model(file);
  const auto violations = validate(m);
  if (as_json) {
    json j;
    j["ok"] = violations.empty();
    j["violations"] = json::array();
    for (const auto& v : violations) {
      j["violations"].push_back(json{{"code", v.code}, {"subject", v.subject}, {"message", v.message}});
    }
    dump(p.out, j);
  } else if (violations.empty()) {
    p.out << p.styled("OK", Style::good) << '\n';
  } else {
    for (const auto& v : violations) p.out << p.styled(v.code, Style::bad) << "  " << v.subject << "  " << v.message << '\n';
  }
  return violations.empty() ? kOk : kNegative;
}

int cmd_interop(const Printer& p, const std::string& file, int horizon, const std::optional<std::string>& process,
                bool as_json) {
  const SystemModel m = load_valid(file);
  std::vector<InteropVerdict> verdicts;
  bool overall = true;
  if (process) {
    const auto rel = build_precedence(m, horizon);
    verdicts.push_back(check_process_interop(m, rel, *process));
    overall = verdicts.back().interoperable;
  } else {
    const auto sys = check_system_interop(m, horizon);
    for (const auto& [id, v] : sys.verdicts) verdicts.push_back(v);
    overall = sys.overall;
  }
  if (as_json) {
    json j;
    j["horizon"] = horizon;
    j["overall"] = overall;
    j["processes"] = json::array();
    for (const auto& v : verdicts) j["processes"].push_back(verdict_json(v));
    dump(p.out, j);
  } else {
    std::vector<std::vector<Cell>> rows;
    for (const auto& v : verdicts) {
      std::string unmatched;
      for (const auto& u : v.unmatched) unmatched += (unmatched.empty() ? "" : ", ") + to_string(u);
      std::string witnesses;
      for (const auto& [item, w] : v.producers) {
        witnesses += (witnesses.empty() ? "" : ", ") + to_string(item) + " <- " + witness_text(w);
      }
      rows.push_back({Cell{v.process},
                      v.interoperable ? Cell{"interoperable", Style::good} : Cell{"not-interoperable", Style::bad},
                      Cell{unmatched.empty() ? "-" : unmatched}, Cell{witnesses.empty() ? "-" : witnesses}});
    }
    print_table(p, {"process", "verdict", "unmatched", "witnesses"}, rows);
    p.out << "overall: "
          << (overall ? p.styled("interoperable", Style::good) : p.styled("not-interoperable", Style::bad)) << '\n';
  }
  return overall ? kOk : kNegative;
}

int cmd_lcim(const Printer& p, const std::string& file, bool as_json) {
  const SystemModel m = load_valid(file);
  json j = json::array();
  std::vector<std::vector<Cell>> rows;
  for (const auto& proc : m.processes) {
    const auto level = classify_lcim(m, proc.id);
    if (as_json) {
      j.push_back(json{{"process", proc.id}, {"level", level.level}, {"justification", level.justification}});
    } else {
      std::string why;
      for (const auto& s : level.justification) why += (why.empty() ? "" : "; ") + s;
      rows.push_back({Cell{proc.id}, Cell{std::to_string(level.level)}, Cell{why.empty() ? "-" : why}});
    }
  }
  if (as_json) {
    dump(p.out, j);
  } else {
    print_table(p, {"process", "level", "justification"}, rows);
  }
  return kOk;
}

int cmd_precedence(const Printer& p, const std::string& file, int horizon, bool dot, bool as_json) {
  const SystemModel m = load_valid(file);
  const auto rel = build_precedence(m, horizon);
  const auto pairs = rel.pairs();
  if (dot) {
    p.out << "digraph precedence {\n";
    for (const auto& proc : rel.processes()) {
      for (int i = 1; i <= horizon; ++i) p.out << "  \"" << to_string(OccNode{proc, i}) << "\";\n";
    }
    for (const auto& [a, b] : rel.edges()) {
      p.out << "  \"" << to_string(a) << "\" -> \"" << to_string(b) << "\";\n";
    }
    p.out << "}\n";
  } else if (as_json) {
    json j;
    j["horizon"] = horizon;
    j["back_edges"] = rel.back_edges();
    j["pairs"] = json::array();
    for (const auto& [a, b] : pairs) j["pairs"].push_back(json::array({to_string(a), to_string(b)}));
    dump(p.out, j);
  } else {
    p.out << "horizon " << horizon << '\n';
    std::string back;
    for (const auto& f : rel.back_edges()) back += (back.empty() ? "" : ", ") + f;
    p.out << "back flows: " << (back.empty() ? "-" : back) << '\n';
    for (const auto& [a, b] : pairs) p.out << to_string(a) << " < " << to_string(b) << '\n';
  }
  return kOk;
}

int cmd_transform(const Printer& p, std::ostream& err, const std::string& file, const std::optional<std::string>& to,
                  const std::optional<std::string>& mapping_file, const std::optional<std::string>& out_path,
                  bool as_json) {
  const SystemModel m = load_valid(file);
  TransformResult result;
  if (mapping_file) {
    MetaModelRegistry registry = builtin_registry();
    const Mapping& mapping = registry.add_mapping(MappingSpec::from_text(read_file(*mapping_file)));
    result = apply(m, mapping);
  } else if (*to == "b2mml") {
    result = to_b2mml_subset(m);
  } else {
    result = to_ueml_subset(m);
  }
  const std::string document = xml::write(result.document);
  if (out_path) write_file(*out_path, document);
  const auto& r = result.report;
  if (as_json) {
    json j;
    if (out_path) {
      j["out"] = *out_path;
    } else {
      j["document"] = document;
    }
    j["domain_size"] = r.domain_size;
    j["matched"] = r.matched;
    j["unmapped"] = json::array();
    for (const auto& u : r.unmapped) j["unmapped"].push_back(json{{"kind", u.kind}, {"id", u.key}, {"reason", u.reason}});
    dump(p.out, j);
    return kOk;
  }
  std::ostream& report = out_path ? p.out : err;
  if (!out_path) p.out << document;
  report << "matched " << r.matched << " of " << r.domain_size << " elements\n";
  for (const auto& u : r.unmapped) report << "unmapped " << u.kind << ' ' << u.key << ": " << u.reason << '\n';
  return kOk;
}

int cmd_simulate(const Printer& p, const std::string& file, const std::optional<std::string>& scenario_id,
                 const std::optional<std::string>& fault, bool as_json) {
  const SystemModel m = load_valid(file);
  const Scenario* sc = nullptr;
  if (scenario_id) {
    sc = m.find_scenario(*scenario_id);
    if (!sc) throw Error(ErrorCode::NotFound, "no scenario '" + *scenario_id + "'", *scenario_id);
  } else if (!m.scenarios.empty()) {
    sc = &m.scenarios.front();
  } else {
    throw Error(ErrorCode::NotFound, "model has no scenario", file);
  }
  std::optional<FaultPoint> forced;
  if (fault) {
    forced = parse_fault_point(*fault);
    if (!forced) throw Error(ErrorCode::InvalidState, "unknown fault point '" + *fault + "'", *fault);
  }

  Store store(m);
  SteppingClock clock(sc->clock_start, sc->clock_step);
  json runs = json::array();
  std::vector<std::string> log;
  bool all_committed = true;
  int n = 0;
  for (const auto& d : sc->runs) {
    ++n;
    FaultPlan plan{forced ? forced : d.fault};
    const std::string before = snapshot_bytes(*store.snapshot());
    json entry{{"run", n}, {"process", d.process}};
    std::string line = "run " + std::to_string(n) + " " + d.process + ": ";
    try {
      const ProcessInstance inst = store.run_instance(RunRequest{d.process, d.inputs, d.resources}, clock, plan);
      entry["status"] = "committed";
      entry["instance"] = inst.id;
      entry["start"] = format_iso8601(inst.start);
      entry["end"] = format_iso8601(inst.end);
      line += p.styled("committed", Style::good) + " " + inst.id + " [" + format_iso8601(inst.start) + " .. " +
              format_iso8601(inst.end) + "]";
    } catch (const Error& e) {
      if (exit_for(e.code()) != kNegative) throw;
      all_committed = false;
      const bool unchanged = snapshot_bytes(*store.snapshot()) == before;
      entry["status"] = "rolled-back";
      entry["error"] = std::string(to_string(e.code()));
      entry["message"] = e.what();
      entry["store_unchanged"] = unchanged;
      line += p.styled("rolled back", Style::bad) + " (" + std::string(to_string(e.code())) + ": " + e.what() +
              "); store " + (unchanged ? "unchanged" : "CHANGED");
    }
    runs.push_back(entry);
    log.push_back(line);
  }

  const auto final_model = store.snapshot();
  std::vector<std::string> unsynced;
  for (const auto& h : final_model->holons) {
    if (!h.retired && !sync_check(*final_model, h.id)) unsynced.push_back(h.id);
  }
  const std::string store_digest = digest_hex(digest(snapshot_bytes(*final_model)));
  if (as_json) {
    json j;
    j["scenario"] = sc->id;
    j["runs"] = runs;
    j["unsynchronized"] = unsynced;
    j["store_digest"] = store_digest;
    dump(p.out, j);
  } else {
    p.out << "scenario " << sc->id << " (" << sc->runs.size() << " runs)\n";
    for (const auto& l : log) p.out << l << '\n';
    if (unsynced.empty()) {
      p.out << "sync: all live holons synchronized\n";
    } else {
      std::string ids;
      for (const auto& id : unsynced) ids += (ids.empty() ? "" : ", ") + id;
      p.out << "sync: " << p.styled("unsynchronized", Style::bad) << ' ' << ids << '\n';
    }
    p.out << "store digest " << store_digest << '\n';
  }
  return all_committed && unsynced.empty() ? kOk : kNegative;
}

json genealogy_json(const GenealogyNode& n) {
  json j{{"holon", n.holon}};
  if (n.instance) j["instance"] = *n.instance;
  j["children"] = json::array();
  for (const auto& c : n.children) j["children"].push_back(genealogy_json(c));
  return j;
}

void print_genealogy(std::ostream& out, const GenealogyNode& n, int depth) {
  out << std::string(2 * depth, ' ') << n.holon;
  if (n.instance) out << " (" << *n.instance << ")";
  out << '\n';
  for (const auto& c : n.children) print_genealogy(out, c, depth + 1);
}

int cmd_genealogy(const Printer& p, const std::string& file, const std::string& holon, bool as_json) {
  const SystemModel m = load_valid(file);
  const auto tree = genealogy(m, holon);
  if (as_json) {
    dump(p.out, genealogy_json(tree));
  } else {
    print_genealogy(p.out, tree, 0);
  }
  return kOk;
}

}  // namespace

bool color_from_environment(bool stdout_is_terminal) {
  const char* v = std::getenv("HOLX_COLOR");
  if (v && std::string_view(v) == "never") return false;
  return stdout_is_terminal;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Options& options) {
  CLI::App app{"holx: holonic manufacturing model toolkit", "holx"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "holx 1.0.0");

  std::string file;
  int horizon = 2;
  bool as_json = false;
  bool dot = false;
  std::optional<std::string> process, to, mapping, out_path, scenario, fault;
  std::string holon;

  auto* validate_cmd = app.add_subcommand("validate", "Check model constraints");
  auto* interop_cmd = app.add_subcommand("interop", "Process interoperability over the precedence relation");
  auto* lcim_cmd = app.add_subcommand("lcim", "Conceptual interoperability level per process");
  auto* precedence_cmd = app.add_subcommand("precedence", "Occurrence precedence pairs");
  auto* transform_cmd = app.add_subcommand("transform", "Translate a model through a meta-model mapping");
  auto* simulate_cmd = app.add_subcommand("simulate", "Execute a scenario");
  auto* genealogy_cmd = app.add_subcommand("genealogy", "Composition tree of a holon");

  for (auto* c : {validate_cmd, interop_cmd, lcim_cmd, precedence_cmd, transform_cmd, simulate_cmd, genealogy_cmd}) {
    c->add_option("file", file, "Model file (.holx)")->required();
    c->add_flag("--json", as_json, "Machine-readable output");
  }
  for (auto* c : {interop_cmd, precedence_cmd}) c->add_option("--horizon,-k", horizon, "Occurrence horizon K");
  interop_cmd->add_option("--process", process, "Check a single process");
  precedence_cmd->add_flag("--dot", dot, "Graphviz output of the generating edges");
  auto* to_opt = transform_cmd->add_option("--to", to, "Built-in target")->check(CLI::IsMember({"b2mml", "ueml"}));
  auto* mapping_opt = transform_cmd->add_option("--mapping", mapping, "Mapping spec file");
  to_opt->excludes(mapping_opt);
  transform_cmd->add_option("--out", out_path, "Write the document here");
  simulate_cmd->add_option("--scenario", scenario, "Scenario id (default: first)");
  simulate_cmd->add_option("--fault", fault, "Fault injected into every run")
      ->check(CLI::IsMember({"pre-info", "post-info-pre-physical", "post-physical-pre-commit"}));
  genealogy_cmd->add_option("holon", holon, "Holon id")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (transform_cmd->parsed() && !to && !mapping) {
      throw CLI::RequiredError("transform needs --to or --mapping");
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  const Printer p{out, options.color && !as_json};
  try {
    if (validate_cmd->parsed()) return cmd_validate(p, file, as_json);
    if (interop_cmd->parsed()) return cmd_interop(p, file, horizon, process, as_json);
    if (lcim_cmd->parsed()) return cmd_lcim(p, file, as_json);
    if (precedence_cmd->parsed()) return cmd_precedence(p, file, horizon, dot, as_json);
    if (transform_cmd->parsed()) return cmd_transform(p, err, file, to, mapping, out_path, as_json);
    if (simulate_cmd->parsed()) return cmd_simulate(p, file, scenario, fault, as_json);
    if (genealogy_cmd->parsed()) return cmd_genealogy(p, file, holon, as_json);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_for(e.code()) == kNegative ? kInputError : exit_for(e.code());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kInternalError;
}

}  // namespace holx::cli
