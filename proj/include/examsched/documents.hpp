#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "examsched/evaluate.hpp"
#include "examsched/heuristic.hpp"
#include "examsched/portfolio.hpp"
#include "examsched/whatif.hpp"

namespace examsched {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Pretty-printed with a trailing newline. Keys are sorted, so equal documents
// are equal bytes.
std::string dump(const Json& doc);
Json parse_document(std::string_view text, std::string_view expected_kind = {});

// Everything needed to rebuild the instance, including the registrar's
// source rows, so documents round-trip bit for bit.
Json instance_to_json(const Instance& instance);
Instance instance_from_json(const Json& doc);
std::string instance_digest(const Instance& instance);

Json period_to_json(const ExamPeriodConfig& config);
ExamPeriodConfig period_from_json(const Json& doc);
Json grid_to_json(const TimeGrid& grid);

Json weights_to_json(const Weights& w);
Weights weights_from_json(const Json& doc);
Json catalog_to_json(const WeightCatalog& catalog);
WeightCatalog catalog_from_json(const Json& doc);

Json grouping_to_json(const Instance& instance);
std::vector<GroupEdit> group_edits_from_json(const Json& doc);
Json findings_to_json(const std::vector<Finding>& findings);
Json overlap_matrix_to_json(const OverlapMatrix& matrix);

Json schedule_to_json(const Instance& instance, const Schedule& schedule, const std::string& weight_set = {});
// Groups are matched by label, slots by id. Throws Error(kUnknownReference).
Schedule schedule_from_json(const Instance& instance, const Json& doc);
// Registrar-facing table: group,sections,slot,day,time
std::string schedule_csv(const Instance& instance, const Schedule& schedule);

Json report_to_json(const InconvenienceReport& report);
Json delta_to_json(const ReportDelta& delta);

Json outcome_to_json(const SolveOutcome& outcome, bool timings);
Json two_phase_log(const TwoPhaseResult& result, const TwoPhaseConfig& config, bool timings);

// Manifest without wall-clock fields, so serial runs reproduce it byte for
// byte; timings go to a separate document.
Json portfolio_manifest(const Instance& instance, const PortfolioResult& result, const PortfolioConfig& config);
Json portfolio_timings(const PortfolioResult& result);

Json whatif_to_json(const WhatIfTable& table);

Json error_to_json(ErrorCode code, const std::string& message);

}  // namespace examsched
