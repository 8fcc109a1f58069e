// gptlab command-line driver.
//
// Exit codes: 0 ok, 1 validation or analysis failure, 2 parse error,
// 3 search budget exceeded (a partial report is still written).

#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <iostream>

#include "gptlab/report.hpp"

using namespace gptlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitParse = 2;
constexpr int kExitBudget = 3;

struct Options {
  // system build
  std::string kind;
  int n = 0;
  int d = 0;
  std::string mode = "exact";
  std::string output;
  // system check / analyze / report show
  std::string input;
  std::vector<std::string> inputs;
  bool theorem1 = false, enumerate = false, cnot = false, appendix = false, audit = false;
  std::size_t control = 1, target = 2;
  std::size_t node_cap = 50'000'000;
  std::size_t workers = 1;
  bool timings = false;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

SearchConfig search_config(const Options& o) {
  SearchConfig cfg;
  cfg.node_cap = o.node_cap;
  cfg.workers = o.workers;
  return cfg;
}

int cmd_system_build(const Options& o) {
  const auto kind = parse_system_kind(o.kind);
  if (!kind || *kind == SystemKind::custom) throw Error(ErrorCode::ParseError, "unknown kind '" + o.kind + "'");
  const ScalarMode mode = o.mode == "float" ? ScalarMode::floating : ScalarMode::exact;
  const int param = (*kind == SystemKind::cube || *kind == SystemKind::octoplex) ? o.d : o.n;
  const auto d = catalog_descriptor(*kind, param, mode);
  const SystemDescriptor full = d.scalar_mode == ScalarMode::exact ? describe(instantiate<Rational>(d))
                                                                   : describe(instantiate<double>(d));
  emit(o.output, canonical_dump(to_json(full)) + "\n");
  return kExitOk;
}

template <class F>
Json check_system(const SystemDescriptor& d, const SearchConfig& cfg) {
  return system_summary(instantiate<F>(d), cfg);
}

int cmd_system_check(const Options& o) {
  const Json input = read_json_file(o.input);
  const auto d = parse_system_descriptor(input);
  const auto start = std::chrono::steady_clock::now();
  AnalysisReport r;
  r.analysis = "system-check";
  r.scalar_mode = std::string(to_string(d.scalar_mode));
  r.input_hash = sha256_hex(canonical_dump(input));
  r.results = d.scalar_mode == ScalarMode::exact ? check_system<Rational>(d, search_config(o))
                                                 : check_system<double>(d, search_config(o));
  if (!r.results.value("valid", false)) r.status = "failed";
  if (o.timings) {
    r.timings = Json{{"total_seconds",
                      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
  }
  std::cout << render_report(r);
  if (!o.output.empty()) write_report(o.output, r);
  return r.passed() ? kExitOk : kExitFailed;
}

template <class F>
void validate_components(const CompositeDescriptor& c) {
  for (const auto& part : c.components) {
    const auto report = validate_system(instantiate<F>(part));
    if (!report.ok()) throw Error(ErrorCode::InvalidParameter, "component '" + part.name + "' fails validation");
  }
}

int cmd_compose(const Options& o) {
  std::vector<SystemDescriptor> parts;
  for (const auto& path : o.inputs) parts.push_back(parse_system_descriptor(read_json_file(path)));
  const auto c = make_composite_descriptor(parts);
  if (c.scalar_mode == ScalarMode::exact) {
    validate_components<Rational>(c);
  } else {
    validate_components<double>(c);
  }
  emit(o.output, canonical_dump(to_json(c)) + "\n");
  return kExitOk;
}

template <class F>
std::vector<LocalSystem<F>> instantiate_all(const CompositeDescriptor& c) {
  std::vector<LocalSystem<F>> out;
  for (const auto& part : c.components) out.push_back(instantiate<F>(part));
  return out;
}

template <class F>
Json run_analysis(const CompositeDescriptor& desc, const Options& o, std::string& name, bool& pass) {
  const auto comp = compose(instantiate_all<F>(desc));
  const auto cfg = search_config(o);
  pass = true;
  if (o.theorem1) {
    name = "theorem1";
    auto j = analyze_theorem1(comp, cfg);
    pass = j["pass"].template get<bool>();
    return j;
  }
  if (o.cnot) {
    name = o.audit ? "cnot+audit" : "cnot";
    return analyze_cnot(comp, o.control, o.target, o.audit, cfg);
  }
  if (o.appendix) {
    name = "appendix";
    if constexpr (std::is_same_v<F, double>) {
      auto j = analyze_polygon_frames(comp, cfg);
      pass = j["orthogonality_pass"].template get<bool>() && j["triviality_pass"].template get<bool>();
      return j;
    } else {
      throw Error(ErrorCode::InvalidParameter, "the appendix analysis runs in float mode");
    }
  }
  if (o.audit) {
    name = "audit-entanglement";
    return analyze_audit(comp, cfg);
  }
  name = "enumerate";
  auto j = analyze_enumerate(comp, cfg);
  pass = j["criterion_discrepancies"].template get<std::size_t>() == 0;
  return j;
}

int cmd_analyze(const Options& o) {
  const int selected = o.theorem1 + o.enumerate + o.cnot + o.appendix;
  if (selected > 1) throw Error(ErrorCode::ParseError, "choose one of --theorem1, --enumerate, --cnot, --appendix");
  if (selected == 0 && !o.audit) throw Error(ErrorCode::ParseError, "no analysis selected");
  const Json input = read_json_file(o.input);
  const auto desc = parse_composite_descriptor(input);

  AnalysisReport r;
  r.scalar_mode = std::string(to_string(desc.scalar_mode));
  Json config{{"theorem1", o.theorem1}, {"enumerate", o.enumerate}, {"cnot", o.cnot},
              {"appendix", o.appendix}, {"audit", o.audit}};
  if (o.cnot) {
    config["control"] = o.control;
    config["target"] = o.target;
  }
  r.input_hash = sha256_hex(canonical_dump(Json{{"input", input}, {"config", config}}));
  const auto start = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    bool pass = true;
    r.results = desc.scalar_mode == ScalarMode::exact ? run_analysis<Rational>(desc, o, r.analysis, pass)
                                                      : run_analysis<double>(desc, o, r.analysis, pass);
    r.results["pass"] = pass;
    if (!pass) {
      r.status = "failed";
      code = kExitFailed;
    }
  } catch (const SearchBudgetExceeded& e) {
    if (r.analysis.empty()) r.analysis = "analysis";
    r.status = "budget_exceeded";
    r.results = Json{{"nodes", e.nodes()}, {"partial_results", e.partial_results()}, {"message", e.what()}};
    code = kExitBudget;
  }
  if (o.timings) {
    r.timings = Json{{"total_seconds",
                      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
  }
  std::cout << render_report(r);
  if (!o.output.empty()) write_report(o.output, r);
  return code;
}

int cmd_report_show(const Options& o) {
  std::cout << render_report(read_report(o.input));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gptlab: reversible dynamics of composite GPT systems"};
  app.require_subcommand(1);
  Options o;
  int (*action)(const Options&) = nullptr;

  auto* system = app.add_subcommand("system", "Build or check a single system");
  system->require_subcommand(1);
  auto* build = system->add_subcommand("build", "Write a catalog system descriptor");
  build->add_option("--kind", o.kind, "classical | cube | octoplex | polygon | squashed-gtrit")->required();
  build->add_option("--n", o.n, "Size parameter for classical and polygon");
  build->add_option("--d", o.d, "Dimension parameter for cube and octoplex");
  build->add_option("--mode", o.mode, "exact | float")->check(CLI::IsMember({"exact", "float"}));
  build->add_option("-o,--output", o.output, "Output file (stdout if omitted)");
  build->callback([&] { action = cmd_system_build; });

  auto* check = system->add_subcommand("check", "Validate and summarize a system descriptor");
  check->add_option("input", o.input)->required();
  check->add_option("-o,--output", o.output, "Write the JSON report here");
  check->add_flag("--timings", o.timings, "Include wall-clock timings");
  check->callback([&] { action = cmd_system_check; });

  auto* comp = app.add_subcommand("compose", "Combine system descriptors into a composite");
  comp->add_option("inputs", o.inputs)->required()->expected(2, -1);
  comp->add_option("-o,--output", o.output, "Output file (stdout if omitted)");
  comp->callback([&] { action = cmd_compose; });

  auto* analyze = app.add_subcommand("analyze", "Run an analysis pipeline on a composite");
  analyze->add_option("input", o.input)->required();
  analyze->add_flag("--theorem1", o.theorem1, "Enumerate reversibles and certify each as trivial");
  analyze->add_flag("--enumerate", o.enumerate, "Enumerate reversibles with per-map criteria");
  analyze->add_flag("--cnot", o.cnot, "Conditional transformation between two subsystems");
  analyze->add_option("--control", o.control, "Control subsystem (1-based)");
  analyze->add_option("--target", o.target, "Target subsystem (1-based)");
  analyze->add_flag("--appendix", o.appendix, "Odd-polygon frame analysis");
  analyze->add_flag("--audit-entanglement", o.audit, "Product-state and correlation audit");
  analyze->add_option("--node-cap", o.node_cap, "Search node budget");
  analyze->add_option("--workers", o.workers, "Search worker threads");
  analyze->add_option("-o,--output", o.output, "Write the JSON report here");
  analyze->add_flag("--timings", o.timings, "Include wall-clock timings");
  analyze->callback([&] { action = cmd_analyze; });

  auto* report = app.add_subcommand("report", "Inspect stored reports");
  report->require_subcommand(1);
  auto* show = report->add_subcommand("show", "Print a stored report");
  show->add_option("input", o.input)->required();
  show->callback([&] { action = cmd_report_show; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    return action ? action(o) : kExitParse;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::ParseError ? kExitParse : kExitFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
}
