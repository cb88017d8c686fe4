// Headless driver: ingest -> group -> solve/portfolio -> evaluate -> export.
// Artifacts are the same JSON documents the service returns.
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "examsched/documents.hpp"
#include "examsched/service.hpp"
#include "examsched/synthetic.hpp"
#include "examsched/text.hpp"

// After the Eigen-based headers: httplib pulls in <resolv.h>, whose _res
// macro breaks Eigen.
#include "CLI11.hpp"
#include "httplib.h"

namespace fs = std::filesystem;
using namespace examsched;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitValidation = 2;
constexpr int kExitSolve = 3;

class SolveFailure : public Error {
 public:
  using Error::Error;
};

struct Common {
  std::string instance;
  std::string grid_config;
  std::string weights;
  std::string weight_set;
  std::string out_dir = ".";
  std::string k = "19";
  std::uint64_t seed = 0;
  bool serial = false;
  int max_parallel = 4;
  double phase1_limit = 600.0;
  double phase2_limit = 4 * 3600.0;
  long long phase1_work = 0;
  long long phase2_work = 0;
  std::string backend = "builtin";
};

void write_out(const Common& c, const std::string& name, const std::string& content) {
  fs::create_directories(c.out_dir);
  text::write_file((fs::path(c.out_dir) / name).string(), content);
}

Instance read_instance(const Common& c) {
  if (c.instance.empty()) throw Error(ErrorCode::kConfiguration, "--instance is required");
  Instance inst = instance_from_json(parse_document(text::read_file(c.instance), "instance"));
  if (!c.grid_config.empty()) {
    // A different grid keeps the data but re-resolves the constraints.
    auto period = parse_period_config(text::read_file(c.grid_config));
    GroupingResult g{inst.groups, inst.ambiguous_sections, inst.forced_overlaps};
    auto warnings = inst.ingest_warnings;
    inst = assemble_instance(inst.source, g, inst.constraints, period, inst.weights);
    inst.ingest_warnings = warnings;
  }
  auto findings = validate_instance(inst);
  if (has_errors(findings)) throw ValidationFailure(findings);
  return inst;
}

WeightCatalog read_catalog(const std::string& spec) {
  if (spec.empty() || spec == "default") return default_catalog();
  return catalog_from_json(Json::parse(text::read_file(spec)));
}

// "", a catalog set name, "default", or a weights / catalog document.
NamedWeights read_weights(const Common& c, const Instance& inst) {
  if (c.weights.empty()) return {"instance", inst.weights, {}};
  WeightCatalog cat;
  if (c.weights == "default" || c.weights == "survey") {
    cat = default_catalog();
  } else if (fs::exists(c.weights)) {
    Json doc = Json::parse(text::read_file(c.weights));
    if (doc.value("kind", "") == "weight-catalog" || doc.is_array()) {
      cat = catalog_from_json(doc);
    } else {
      return {fs::path(c.weights).stem().string(), weights_from_json(doc), {}};
    }
  } else {
    cat = default_catalog();
    for (const auto& w : cat)
      if (w.name == c.weights) return w;
    throw Error(ErrorCode::kConfiguration, "no weight set or file '" + c.weights + "'");
  }
  if (c.weight_set.empty()) return cat.front();
  for (const auto& w : cat)
    if (w.name == c.weight_set) return w;
  throw Error(ErrorCode::kConfiguration, "no weight set '" + c.weight_set + "'");
}

TwoPhaseConfig run_config(const Common& c) {
  TwoPhaseConfig cfg;
  cfg.phase1_initial_limit = c.phase1_limit;
  cfg.phase1_extension = c.phase1_limit;
  cfg.phase1_hard_cap = std::max(cfg.phase1_hard_cap, c.phase1_limit);
  cfg.phase2_limit = c.phase2_limit;
  cfg.phase1_work_limit = c.phase1_work;
  cfg.phase2_work_limit = c.phase2_work;
  cfg.seed = c.seed;
  cfg.backend = c.backend;
  auto ks = parse_k_range(c.k);
  cfg.k_fixed = ks.front();
  validate_config(cfg);
  return cfg;
}

void add_instance_option(CLI::App* app, Common& c) {
  app->add_option("--instance", c.instance, "Instance document")->required();
  app->add_option("--grid-config", c.grid_config, "Exam period config replacing the instance's");
}

void add_run_options(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Seed");
  app->add_option("--time-limit-phase1", c.phase1_limit, "Phase-1 initial limit, seconds");
  app->add_option("--time-limit-phase2", c.phase2_limit, "Phase-2 limit, seconds");
  app->add_option("--work-limit-phase1", c.phase1_work, "Phase-1 deterministic work budget");
  app->add_option("--work-limit-phase2", c.phase2_work, "Phase-2 deterministic work budget");
  app->add_option("--backend", c.backend, "builtin | external (program in $EXAMSCHED_BACKEND)");
}

int cmd_ingest(const Common& c, const std::string& data_dir, SourceFiles files) {
  auto from_dir = [&](std::string& slot, const char* name) {
    auto p = fs::path(data_dir) / name;
    if (slot.empty() && !data_dir.empty() && fs::exists(p)) slot = text::read_file(p.string());
  };
  auto as_content = [](std::string& slot) {
    if (!slot.empty()) slot = text::read_file(slot);
  };
  as_content(files.enrollments);
  as_content(files.sections);
  as_content(files.constraints);
  as_content(files.coordinated);
  if (!c.grid_config.empty()) files.period_config = text::read_file(c.grid_config);
  from_dir(files.enrollments, "enrollments.csv");
  from_dir(files.sections, "sections.csv");
  from_dir(files.constraints, "constraints.csv");
  from_dir(files.coordinated, "coordinated.txt");
  from_dir(files.period_config, "period.txt");
  Weights w = survey_weights();
  if (!c.weights.empty() && fs::exists(c.weights)) w = weights_from_json(Json::parse(text::read_file(c.weights)));
  try {
    Instance inst = load_instance(files, w);
    write_out(c, "instance.json", dump(instance_to_json(inst)));
    write_out(c, "validation.json", dump(findings_to_json(validate_instance(inst))));
    write_out(c, "grouping.json", dump(grouping_to_json(inst)));
    std::cout << inst.n_students() << " students, " << inst.n_groups() << " groups, " << inst.n_slots() << " slots\n";
  } catch (const ValidationFailure& f) {
    write_out(c, "validation.json", dump(findings_to_json(f.findings())));
    throw;
  }
  return kExitOk;
}

int cmd_group(const Common& c, const std::string& edits) {
  Instance inst = read_instance(c);
  if (!edits.empty()) {
    GroupingResult g{inst.groups, inst.ambiguous_sections, inst.forced_overlaps};
    g = apply_group_edits(inst.source, g, group_edits_from_json(Json::parse(text::read_file(edits))));
    auto warnings = inst.ingest_warnings;
    inst = assemble_instance(inst.source, g, inst.constraints, inst.grid.config(), inst.weights);
    inst.ingest_warnings = warnings;
    auto findings = validate_instance(inst);
    write_out(c, "validation.json", dump(findings_to_json(findings)));
    write_out(c, "instance.json", dump(instance_to_json(inst)));
    if (has_errors(findings)) throw ValidationFailure(findings);
  }
  write_out(c, "grouping.json", dump(grouping_to_json(inst)));
  write_out(c, "overlap-matrix.json", dump(overlap_matrix_to_json(overlap_matrix(inst))));
  std::cout << inst.n_groups() << " groups, " << inst.ambiguous_sections.size() << " ambiguous sections\n";
  return kExitOk;
}

int cmd_solve(const Common& c, const std::string& method, bool timings) {
  Instance inst = read_instance(c);
  NamedWeights w = read_weights(c, inst);
  TwoPhaseConfig cfg = run_config(c);
  Schedule schedule;
  if (method == "exact") {
    MilpModel model = build_full_model(inst, w.weights);
    SolveLimits lim;
    lim.time_limit = c.phase2_limit;
    lim.work_limit = c.phase2_work;
    lim.seed = c.seed;
    SolveOutcome out = solve_model(model, lim, c.backend);
    Json log = outcome_to_json(out, timings);
    log["kind"] = "run-log";
    log["schema_version"] = kSchemaVersion;
    write_out(c, "run-log.json", dump(log));
    if (!out.has_solution()) throw SolveFailure(ErrorCode::kBuild, "no solution: " + out.message);
    schedule = out.assignment;
  } else if (method == "two-phase") {
    TwoPhaseResult r = run_two_phase(inst, w.weights, cfg);
    write_out(c, "run-log.json", dump(two_phase_log(r, cfg, timings)));
    if (r.infeasible) throw SolveFailure(ErrorCode::kBuild, "infeasible: " + r.message);
    schedule = r.schedule;
  } else if (method == "greedy") {
    schedule = meeting_time_greedy(inst, w.weights);
  } else {
    throw Error(ErrorCode::kConfiguration, "unknown method '" + method + "'");
  }
  auto report = evaluate_schedule(inst, schedule, w.weights);
  write_out(c, "schedule.json", dump(schedule_to_json(inst, schedule, w.name)));
  write_out(c, "report.json", dump(report_to_json(report)));
  std::cout << "objective " << report.weighted_objective << (report.hard_feasible() ? "" : " (hard violations)") << "\n";
  return report.hard_feasible() ? kExitOk : kExitSolve;
}

int cmd_portfolio(const Common& c, const std::string& k_range, bool timings) {
  Instance inst = read_instance(c);
  WeightCatalog cat = read_catalog(c.weights);
  PortfolioConfig pc;
  pc.k_values = parse_k_range(k_range);
  pc.seed = c.seed;
  pc.max_parallel = c.serial ? 1 : c.max_parallel;
  pc.run = run_config(c);
  PortfolioResult res = run_portfolio(inst, cat, pc, [](const PortfolioRun& r) {
    std::fprintf(stderr, "run w=%d k=%d %s\n", r.weight_index, r.k_used, r.failed ? "failed" : "done");
  });
  write_out(c, "manifest.json", dump(portfolio_manifest(inst, res, pc)));
  if (timings) write_out(c, "timings.json", dump(portfolio_timings(res)));
  int found = 0;
  for (const auto& b : res.best) {
    if (b.run_index < 0) continue;
    ++found;
    const auto& name = res.catalog[static_cast<std::size_t>(b.weight_index)].name;
    write_out(c, "schedule-" + name + ".json", dump(schedule_to_json(inst, b.schedule, name)));
  }
  std::cout << res.runs.size() << " runs, " << found << " schedules\n";
  return found == static_cast<int>(res.best.size()) ? kExitOk : kExitSolve;
}

int cmd_evaluate(const Common& c, const std::string& schedule_path) {
  Instance inst = read_instance(c);
  NamedWeights w = read_weights(c, inst);
  Schedule s = schedule_from_json(inst, parse_document(text::read_file(schedule_path), "schedule"));
  auto report = evaluate_schedule(inst, s, w.weights);
  std::string doc = dump(report_to_json(report));
  if (c.out_dir.empty() || c.out_dir == "-") std::cout << doc;
  else write_out(c, "report.json", doc);
  return report.hard_feasible() ? kExitOk : kExitValidation;
}

int cmd_whatif(const Common& c, const std::vector<std::string>& days, const std::string& method) {
  Instance inst = read_instance(c);
  std::vector<int> deltas;
  for (const auto& d : days)
    for (const auto& part : text::split(d, ',')) deltas.push_back(std::stoi(std::string(text::trim(part))));
  WhatIfTable t = whatif_days(inst, deltas, read_catalog(c.weights), parse_whatif_method(method), run_config(c));
  write_out(c, "whatif.json", dump(whatif_to_json(t)));
  for (std::size_t w = 0; w < t.weight_sets.size(); ++w) {
    std::cout << t.weight_sets[w];
    for (const auto& cell : t.cells[w])
      std::cout << "  " << (cell.report ? std::to_string(cell.report->weighted_objective) : std::string("infeasible"));
    std::cout << "\n";
  }
  return kExitOk;
}

int cmd_export(const Common& c, const std::string& what, const std::string& format, const std::string& schedule_path,
               int phase1_k) {
  Instance inst = read_instance(c);
  if (what == "model") {
    NamedWeights w = read_weights(c, inst);
    MilpModel m = phase1_k > 0 ? build_phase1_model(inst, w.weights, select_phase1_groups(inst, phase1_k))
                               : build_full_model(inst, w.weights);
    auto fmt = parse_export_format(format.empty() ? "mps" : format);
    write_out(c, fmt == ExportFormat::kMps ? "model.mps" : "model.lp", export_model(m, fmt));
    std::cout << m.n_vars() << " variables, " << m.n_rows() << " rows, " << m.n_nonzeros() << " nonzeros\n";
    return kExitOk;
  }
  if (schedule_path.empty()) throw Error(ErrorCode::kConfiguration, "--schedule is required");
  Schedule s = schedule_from_json(inst, parse_document(text::read_file(schedule_path), "schedule"));
  if (what == "schedule") {
    if (format == "csv") write_out(c, "schedule.csv", schedule_csv(inst, s));
    else write_out(c, "schedule.json", dump(schedule_to_json(inst, s)));
    return kExitOk;
  }
  if (what == "report") {
    NamedWeights w = read_weights(c, inst);
    write_out(c, "report.json", dump(report_to_json(evaluate_schedule(inst, s, w.weights))));
    return kExitOk;
  }
  throw Error(ErrorCode::kConfiguration, "unknown export target '" + what + "'");
}

int cmd_serve(const std::string& host, int port, int max_jobs) {
  Workspace ws(max_jobs);
  Service service(ws);
  httplib::Server server;
  service.mount(server);
  std::cerr << "listening on " << host << ":" << port << "\n";
  if (!server.listen(host, port)) throw Error(ErrorCode::kConfiguration, "cannot listen on " + host + ":" + std::to_string(port));
  return kExitOk;
}

int cmd_generate(const Common& c, SyntheticConfig cfg) {
  cfg.multi_section = std::min(cfg.multi_section, cfg.courses);
  cfg.coordinated = std::min(cfg.coordinated, cfg.multi_section);
  SourceFiles f = generate_sources(cfg);
  write_out(c, "enrollments.csv", f.enrollments);
  write_out(c, "sections.csv", f.sections);
  write_out(c, "coordinated.txt", f.coordinated);
  return kExitOk;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kValidation:
    case ErrorCode::kUnknownReference: return kExitValidation;
    case ErrorCode::kBuild:
    case ErrorCode::kSearchBudget:
    case ErrorCode::kBackendUnavailable: return kExitSolve;
    default: return kExitOther;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Final-exam timetabling"};
  app.require_subcommand(1);
  Common c;
  bool timings = false;

  auto* ingest = app.add_subcommand("ingest", "Parse registrar files, group courses and validate");
  std::string data_dir;
  SourceFiles files;
  ingest->add_option("--data-dir", data_dir, "Directory with enrollments.csv, sections.csv, constraints.csv, coordinated.txt, period.txt");
  ingest->add_option("--enrollments", files.enrollments, "Enrollment file");
  ingest->add_option("--sections", files.sections, "Section file");
  ingest->add_option("--constraints", files.constraints, "Constraint file");
  ingest->add_option("--coordinated", files.coordinated, "Coordinated course list");
  ingest->add_option("--grid-config", c.grid_config, "Exam period config");
  ingest->add_option("--weights", c.weights, "Weights document stored in the instance");
  ingest->add_option("--out-dir", c.out_dir, "Output directory");

  auto* group = app.add_subcommand("group", "Review or edit the grouping");
  std::string edits;
  add_instance_option(group, c);
  group->add_option("--edits", edits, "Group edits document");
  group->add_option("--out-dir", c.out_dir, "Output directory");

  auto* solve = app.add_subcommand("solve", "Solve one weight set");
  std::string method = "two-phase";
  add_instance_option(solve, c);
  add_run_options(solve, c);
  solve->add_option("--weights", c.weights, "Weight set name, weights document or catalog");
  solve->add_option("--weight-set", c.weight_set, "Set name inside a catalog");
  solve->add_option("--k", c.k, "Phase-1 group count");
  solve->add_option("--method", method, "two-phase | exact | greedy");
  solve->add_flag("--timings", timings, "Include wall-clock fields");
  solve->add_option("--out-dir", c.out_dir, "Output directory");

  auto* portfolio = app.add_subcommand("portfolio", "Sweep weight sets and k");
  std::string k_range = "17..21";
  add_instance_option(portfolio, c);
  add_run_options(portfolio, c);
  portfolio->add_option("--weights", c.weights, "default or a weight catalog document");
  portfolio->add_option("--k", k_range, "k range, e.g. 17..21");
  portfolio->add_flag("--serial", c.serial, "One run at a time");
  portfolio->add_option("--max-parallel", c.max_parallel, "Concurrent runs");
  portfolio->add_flag("--timings", timings, "Write timings.json");
  portfolio->add_option("--out-dir", c.out_dir, "Output directory");

  auto* evaluate = app.add_subcommand("evaluate", "Inconvenience report of a schedule");
  std::string schedule_path;
  add_instance_option(evaluate, c);
  evaluate->add_option("--schedule", schedule_path, "Schedule document")->required();
  evaluate->add_option("--weights", c.weights, "Weight set name, weights document or catalog");
  evaluate->add_option("--weight-set", c.weight_set, "Set name inside a catalog");
  evaluate->add_option("--out-dir", c.out_dir, "Output directory; '-' for stdout");

  auto* whatif = app.add_subcommand("whatif", "Compare the period with more or fewer days");
  std::vector<std::string> days;
  std::string whatif_method = "two-phase";
  add_instance_option(whatif, c);
  add_run_options(whatif, c);
  whatif->add_option("--days", days, "Day deltas, e.g. +1 or -1,+1")->required()->allow_extra_args(false);
  whatif->add_option("--method", whatif_method, "two-phase | exact | oracle");
  whatif->add_option("--weights", c.weights, "default or a weight catalog document");
  whatif->add_option("--k", c.k, "Phase-1 group count");
  whatif->add_option("--out-dir", c.out_dir, "Output directory");

  auto* exp = app.add_subcommand("export", "Write a schedule, report or model file");
  std::string what = "schedule", format;
  int phase1_k = 0;
  add_instance_option(exp, c);
  exp->add_option("what", what, "schedule | report | model");
  exp->add_option("--schedule", schedule_path, "Schedule document");
  exp->add_option("--format", format, "json | csv for schedules; lp | mps for models");
  exp->add_option("--weights", c.weights, "Weight set name, weights document or catalog");
  exp->add_option("--phase1-k", phase1_k, "Export the phase-1 model over the k largest groups");
  exp->add_option("--out-dir", c.out_dir, "Output directory");

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  std::string host = "127.0.0.1";
  int port = 8080, max_jobs = 4;
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port");
  serve->add_option("--max-jobs", max_jobs, "Background solver jobs");

  auto* generate = app.add_subcommand("generate", "Write seeded synthetic registrar files");
  SyntheticConfig syn;
  generate->add_option("--seed", syn.seed, "Seed");
  generate->add_option("--students", syn.students, "Students");
  generate->add_option("--courses", syn.courses, "Courses");
  generate->add_option("--faculty", syn.faculty, "Faculty");
  generate->add_option("--out-dir", c.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*ingest) return cmd_ingest(c, data_dir, files);
    if (*group) return cmd_group(c, edits);
    if (*solve) return cmd_solve(c, method, timings);
    if (*portfolio) return cmd_portfolio(c, k_range, timings);
    if (*evaluate) return cmd_evaluate(c, schedule_path);
    if (*whatif) return cmd_whatif(c, days, whatif_method);
    if (*exp) return cmd_export(c, what, format, schedule_path, phase1_k);
    if (*serve) return cmd_serve(host, port, max_jobs);
    if (*generate) return cmd_generate(c, syn);
  } catch (const ValidationFailure& e) {
    Json doc = error_to_json(e.code(), e.what());
    doc["findings"] = findings_to_json(e.findings());
    std::cerr << doc.dump() << "\n";
    return kExitValidation;
  } catch (const SolveFailure& e) {
    std::cerr << error_to_json(e.code(), e.what()).dump() << "\n";
    return kExitSolve;
  } catch (const Error& e) {
    std::cerr << error_to_json(e.code(), e.what()).dump() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << error_to_json(ErrorCode::kConfiguration, e.what()).dump() << "\n";
    return kExitOther;
  }
  return kExitOther;
}
