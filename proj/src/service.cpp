#include "examsched/service.hpp"

#include "httplib.h"

#include "examsched/text.hpp"

namespace examsched {
namespace {

ServiceResponse json_response(int status, const Json& doc) { return {status, "application/json", dump(doc)}; }

Json parse_body(const std::string& body) {
  if (text::trim(body).empty()) return Json::object();
  try {
    return Json::parse(body);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("request body is not JSON: ") + e.what());
  }
}

Json schedule_view_json(const Instance& inst, const ScheduleView& v) {
  return {{"kind", "schedule-view"},
          {"schema_version", kSchemaVersion},
          {"id", v.id},
          {"instance_id", v.instance_id},
          {"instance_revision", v.instance_revision},
          {"stale", v.stale},
          {"weight_set", v.weight_set},
          {"weights", weights_to_json(v.weights)},
          {"schedule", schedule_to_json(inst, v.schedule, v.weight_set)},
          {"report", report_to_json(v.report)},
          {"undo_depth", v.undo_depth}};
}

Json job_json(const JobView& j) {
  Json doc = {{"kind", "job"},    {"schema_version", kSchemaVersion}, {"id", j.id},
              {"job_kind", j.kind}, {"state", to_string(j.state)},      {"result", j.result}};
  if (j.state == JobState::kFailed) doc["error"] = {{"code", j.error_code}, {"message", j.error}};
  return doc;
}

TwoPhaseConfig run_config(const Json& body) {
  TwoPhaseConfig c;
  c.phase1_initial_limit = body.value("phase1_time_limit", c.phase1_initial_limit);
  c.phase1_extension = body.value("phase1_extension", c.phase1_extension);
  c.phase1_hard_cap = body.value("phase1_hard_cap", c.phase1_hard_cap);
  c.phase2_limit = body.value("phase2_time_limit", c.phase2_limit);
  c.phase1_work_limit = body.value("phase1_work_limit", c.phase1_work_limit);
  c.phase2_work_limit = body.value("phase2_work_limit", c.phase2_work_limit);
  c.k_fixed = body.value("k", c.k_fixed);
  c.seed = body.value("seed", c.seed);
  c.backend = body.value("backend", c.backend);
  validate_config(c);
  return c;
}

WeightCatalog catalog_of(const Json& body) {
  return body.contains("catalog") ? catalog_from_json(body.at("catalog")) : default_catalog();
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  for (auto& p : text::split(path, '/'))
    if (!p.empty()) out.push_back(p);
  return out;
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kRejectedMove: return 409;
    case ErrorCode::kValidation: return 422;
    case ErrorCode::kConfiguration:
    case ErrorCode::kParse:
    case ErrorCode::kUnknownReference:
    case ErrorCode::kUnsupported:
    case ErrorCode::kSearchBudget: return 400;
    case ErrorCode::kBackendUnavailable: return 503;
    case ErrorCode::kBuild:
    case ErrorCode::kEvaluation: return 500;
  }
  return 500;
}

ServiceResponse Service::handle(const ServiceRequest& req) {
  try {
    const auto parts = split_path(req.path);
    const auto& m = req.method;
    auto n = parts.size();
    auto at = [&](std::size_t i) -> const std::string& { return parts[i]; };

    if (n >= 1 && at(0) == "instances") {
      if (n == 1 && m == "POST") {
        Json body = parse_body(req.body);
        Instance inst;
        if (body.value("kind", "") == "instance") {
          inst = instance_from_json(body);
        } else {
          const Json& f = body.at("files");
          SourceFiles files;
          files.enrollments = f.at("enrollments").get<std::string>();
          files.sections = f.at("sections").get<std::string>();
          files.constraints = f.value("constraints", "");
          files.coordinated = f.value("coordinated", "");
          files.period_config = f.value("period_config", "");
          Weights w = body.contains("weights") ? weights_from_json(body.at("weights")) : survey_weights();
          inst = load_instance(files, w);
        }
        auto findings = validate_instance(inst);
        std::string id = ws_.add_instance(std::move(inst));
        return json_response(201, {{"instance_id", id}, {"revision", ws_.revision(id)},
                                   {"validation", findings_to_json(findings)}});
      }
      if (n < 2) throw Error(ErrorCode::kNotFound, "no route " + m + " " + req.path);
      const std::string& id = at(1);
      if (n == 2 && m == "GET") return json_response(200, instance_to_json(*ws_.instance(id)));
      if (n == 3) {
        const std::string& what = at(2);
        if (what == "validation" && m == "GET") return json_response(200, findings_to_json(validate_instance(*ws_.instance(id))));
        if (what == "groups" && m == "GET") {
          Json doc = grouping_to_json(*ws_.instance(id));
          doc["revision"] = ws_.revision(id);
          return json_response(200, doc);
        }
        if (what == "groups" && m == "PUT") {
          ws_.edit_groups(id, group_edits_from_json(parse_body(req.body)));
          auto inst = ws_.instance(id);
          Json doc = grouping_to_json(*inst);
          doc["revision"] = ws_.revision(id);
          doc["validation"] = findings_to_json(validate_instance(*inst));
          return json_response(200, doc);
        }
        if (what == "overlap-matrix" && m == "GET") {
          auto inst = ws_.instance(id);
          std::shared_ptr<const Instance> hist;
          if (auto it = req.query.find("historical"); it != req.query.end()) hist = ws_.instance(it->second);
          return json_response(200, overlap_matrix_to_json(overlap_matrix(*inst, hist.get())));
        }
        if (what == "constraints" && m == "PUT") {
          Json body = parse_body(req.body);
          ws_.set_constraints(id, parse_constraints(body.at("csv").get<std::string>()));
          return json_response(200, {{"revision", ws_.revision(id)},
                                     {"validation", findings_to_json(validate_instance(*ws_.instance(id)))}});
        }
        if (what == "portfolio" && m == "POST") {
          Json body = parse_body(req.body);
          PortfolioConfig pc;
          if (body.contains("k")) {
            const Json& k = body.at("k");
            pc.k_values = k.is_string() ? parse_k_range(k.get<std::string>()) : k.get<std::vector<int>>();
          }
          pc.max_parallel = body.value("max_parallel", pc.max_parallel);
          pc.seed = body.value("seed", pc.seed);
          Json run = body;
          run.erase("k");
          run.erase("seed");
          pc.run = run_config(run);
          std::string job = ws_.start_portfolio(id, catalog_of(body), pc);
          return json_response(202, {{"job_id", job}});
        }
        if (what == "whatif" && m == "POST") {
          Json body = parse_body(req.body);
          auto deltas = body.value("day_deltas", std::vector<int>{-1, 1});
          auto method = parse_whatif_method(body.value("method", "two-phase"));
          std::string job = ws_.start_whatif(id, deltas, catalog_of(body), method, run_config(body));
          return json_response(202, {{"job_id", job}});
        }
      }
    }

    if (n == 2 && at(0) == "jobs" && m == "GET") return json_response(200, job_json(ws_.job(at(1))));

    if (n >= 1 && at(0) == "schedules") {
      if (n == 1 && m == "POST") {
        Json body = parse_body(req.body);
        auto instance_id = body.at("instance_id").get<std::string>();
        auto inst = ws_.instance(instance_id);
        Schedule s = schedule_from_json(*inst, body.at("schedule"));
        std::optional<Weights> w;
        if (body.contains("weights")) w = weights_from_json(body.at("weights"));
        std::string sid = ws_.add_schedule(instance_id, s, body.value("weight_set", ""), w);
        auto v = ws_.schedule(sid);
        return json_response(201, schedule_view_json(*v.instance, v));
      }
      if (n < 2) throw Error(ErrorCode::kNotFound, "no route " + m + " " + req.path);
      const std::string& sid = at(1);
      auto view = ws_.schedule(sid);
      auto render = [](const ScheduleView& v) { return schedule_view_json(*v.instance, v); };
      if (n == 2 && m == "GET") return json_response(200, render(view));
      if (n == 3 && at(2) == "moves" && m == "POST") {
        Json body = parse_body(req.body);
        const Json& g = body.at("group");
        std::string group = g.is_string() ? g.get<std::string>() : std::to_string(g.get<int>());
        const Json& s = body.at("slot");
        int slot = s.is_string() ? view.instance->grid.resolve(s.get<std::string>()) : s.get<int>();
        MoveResult r = ws_.apply_move(sid, group, slot);
        return json_response(200, {{"after", render(r.after)},
                                    {"before", report_to_json(r.before)},
                                    {"delta", delta_to_json(r.delta)}});
      }
      if (n == 3 && at(2) == "undo" && m == "POST") return json_response(200, render(ws_.undo(sid)));
      if (n == 3 && at(2) == "export" && m == "GET") {
        const Instance& src = *view.instance;
        std::string format = req.query.count("format") ? req.query.at("format") : "json";
        if (format == "csv") return {200, "text/csv", schedule_csv(src, view.schedule)};
        if (format == "json") return json_response(200, schedule_to_json(src, view.schedule, view.weight_set));
        throw Error(ErrorCode::kConfiguration, "unknown export format '" + format + "'");
      }
    }
    throw Error(ErrorCode::kNotFound, "no route " + m + " " + req.path);
  } catch (const ValidationFailure& e) {
    Json doc = error_to_json(e.code(), e.what());
    doc["findings"] = findings_to_json(e.findings());
    return json_response(http_status(e.code()), doc);
  } catch (const Error& e) {
    return json_response(http_status(e.code()), error_to_json(e.code(), e.what()));
  } catch (const Json::exception& e) {
    return json_response(400, error_to_json(ErrorCode::kParse, e.what()));
  }
}

void Service::mount(httplib::Server& server) {
  auto forward = [this](const httplib::Request& in, httplib::Response& out) {
    ServiceRequest req{in.method, in.path, {}, in.body};
    for (const auto& [k, v] : in.params) req.query[k] = v;
    ServiceResponse res = handle(req);
    out.status = res.status;
    out.set_content(res.body, res.content_type);
  };
  server.Get(".*", forward);
  server.Post(".*", forward);
  server.Put(".*", forward);
}

}  // namespace examsched
