#include "examsched/workspace.hpp"

#include <charconv>

namespace examsched {

BoundedExecutor::BoundedExecutor(int workers) {
  if (workers < 1) throw Error(ErrorCode::kConfiguration, "executor needs at least one worker");
  for (int i = 0; i < workers; ++i)
    threads_.emplace_back([this] {
      while (true) {
        std::function<void()> task;
        {
          std::unique_lock lock(mu_);
          cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
          if (stopping_) return;
          task = std::move(queue_.front());
          queue_.pop_front();
        }
        task();
      }
    });
}

BoundedExecutor::~BoundedExecutor() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  for (auto& t : threads_) t.join();
}

void BoundedExecutor::post(std::function<void()> task) {
  {
    std::lock_guard lock(mu_);
    queue_.push_back(std::move(task));
  }
  cv_.notify_one();
}

const char* to_string(JobState state) {
  switch (state) {
    case JobState::kQueued: return "queued";
    case JobState::kRunning: return "running";
    case JobState::kDone: return "done";
    case JobState::kFailed: return "failed";
  }
  return "failed";
}

Workspace::Workspace(int max_jobs) : executor_(max_jobs) {}

std::string Workspace::add_instance(Instance inst) {
  std::unique_lock lock(mu_);
  std::string id = "i" + std::to_string(next_instance_++);
  instances_[id] = {std::make_shared<const Instance>(std::move(inst)), 1};
  return id;
}

std::shared_ptr<const Instance> Workspace::instance(const std::string& id) const {
  std::shared_lock lock(mu_);
  auto it = instances_.find(id);
  if (it == instances_.end()) throw Error(ErrorCode::kNotFound, "no instance '" + id + "'");
  return it->second.instance;
}

int Workspace::revision(const std::string& id) const {
  std::shared_lock lock(mu_);
  auto it = instances_.find(id);
  if (it == instances_.end()) throw Error(ErrorCode::kNotFound, "no instance '" + id + "'");
  return it->second.revision;
}

void Workspace::replace_instance(const std::string& id, Instance next) {
  std::unique_lock lock(mu_);
  auto it = instances_.find(id);
  if (it == instances_.end()) throw Error(ErrorCode::kNotFound, "no instance '" + id + "'");
  it->second.instance = std::make_shared<const Instance>(std::move(next));
  ++it->second.revision;
}

void Workspace::edit_groups(const std::string& id, const std::vector<GroupEdit>& edits) {
  auto cur = instance(id);
  GroupingResult grouping{cur->groups, cur->ambiguous_sections, cur->forced_overlaps};
  GroupingResult next = apply_group_edits(cur->source, grouping, edits);
  Instance inst = assemble_instance(cur->source, next, cur->constraints, cur->grid.config(), cur->weights);
  inst.ingest_warnings = cur->ingest_warnings;
  replace_instance(id, std::move(inst));
}

void Workspace::set_constraints(const std::string& id, const ConstraintSet& constraints) {
  Instance inst = *instance(id);
  apply_constraint_set(inst, constraints);
  replace_instance(id, std::move(inst));
}

std::string Workspace::register_schedule(const std::string& instance_id, std::shared_ptr<const Instance> inst,
                                         int revision, Schedule schedule, const std::string& weight_set,
                                         Weights weights) {
  if (schedule.size() != inst->n_groups() || !schedule.complete())
    throw Error(ErrorCode::kValidation, "a stored schedule must place every group");
  evaluate_schedule(*inst, schedule, weights);  // range checks
  auto entry = std::make_shared<ScheduleEntry>();
  entry->instance_id = instance_id;
  entry->instance = std::move(inst);
  entry->revision = revision;
  entry->weight_set = weight_set;
  entry->weights = weights;
  entry->schedule = std::move(schedule);
  std::unique_lock lock(mu_);
  std::string id = "s" + std::to_string(next_schedule_++);
  schedules_[id] = std::move(entry);
  return id;
}

std::string Workspace::add_schedule(const std::string& instance_id, Schedule schedule, const std::string& weight_set,
                                    std::optional<Weights> weights) {
  std::shared_ptr<const Instance> inst;
  int rev = 0;
  {
    std::shared_lock lock(mu_);
    auto it = instances_.find(instance_id);
    if (it == instances_.end()) throw Error(ErrorCode::kNotFound, "no instance '" + instance_id + "'");
    inst = it->second.instance;
    rev = it->second.revision;
  }
  Weights w = weights.value_or(inst->weights);
  return register_schedule(instance_id, inst, rev, std::move(schedule), weight_set, w);
}

std::shared_ptr<Workspace::ScheduleEntry> Workspace::find_schedule(const std::string& id) const {
  std::shared_lock lock(mu_);
  auto it = schedules_.find(id);
  if (it == schedules_.end()) throw Error(ErrorCode::kNotFound, "no schedule '" + id + "'");
  return it->second;
}

ScheduleView Workspace::view(const std::string& id, const ScheduleEntry& e) const {
  ScheduleView v;
  v.id = id;
  v.instance_id = e.instance_id;
  v.instance = e.instance;
  v.instance_revision = e.revision;
  {
    std::shared_lock lock(mu_);
    auto it = instances_.find(e.instance_id);
    v.stale = it == instances_.end() || it->second.revision != e.revision;
  }
  v.weight_set = e.weight_set;
  v.weights = e.weights;
  v.schedule = e.schedule;
  v.report = evaluate_schedule(*e.instance, e.schedule, e.weights);
  v.undo_depth = e.history.size();
  return v;
}

ScheduleView Workspace::schedule(const std::string& id) const {
  auto e = find_schedule(id);
  std::lock_guard lock(e->mu);
  return view(id, *e);
}

std::vector<std::string> Workspace::schedule_ids() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, e] : schedules_) out.push_back(id);
  return out;
}

MoveResult Workspace::apply_move(const std::string& schedule_id, const std::string& group, int slot) {
  auto e = find_schedule(schedule_id);
  std::lock_guard lock(e->mu);
  const Instance& inst = *e->instance;
  if (view(schedule_id, *e).stale)
    throw Error(ErrorCode::kRejectedMove, "STALE_REVISION: the instance changed; re-validate before editing");
  int g = inst.group_index(group);
  if (g < 0) {
    int v = -1;
    auto [p, ec] = std::from_chars(group.data(), group.data() + group.size(), v);
    if (ec == std::errc() && p == group.data() + group.size() && v >= 0 && v < inst.n_groups()) g = v;
  }
  if (g < 0) throw Error(ErrorCode::kNotFound, "no group '" + group + "'");
  const auto& label = inst.groups[static_cast<std::size_t>(g)].label;
  if (slot < 0 || slot >= inst.n_slots())
    throw Error(ErrorCode::kRejectedMove, "UNKNOWN_SLOT: slot " + std::to_string(slot) + " does not exist");
  if (auto pin = inst.pinned_slot(g); pin && *pin != slot)
    throw Error(ErrorCode::kRejectedMove, "PIN_VIOLATED: " + label + " is pinned to " + inst.grid.label(*pin));
  if (inst.forbidden(g, slot))
    throw Error(ErrorCode::kRejectedMove, "BLOCKED_SLOT: " + label + " may not sit in " + inst.grid.label(slot));
  if (!inst.available(slot))
    throw Error(ErrorCode::kRejectedMove, "UNAVAILABLE_SLOT: " + inst.grid.label(slot) + " is closed");

  MoveResult out;
  out.before = evaluate_schedule(inst, e->schedule, e->weights);
  e->history.push_back(e->schedule);
  e->schedule[g] = slot;
  out.after = view(schedule_id, *e);
  out.delta = report_delta(out.after.report, out.before);
  return out;
}

ScheduleView Workspace::undo(const std::string& schedule_id) {
  auto e = find_schedule(schedule_id);
  std::lock_guard lock(e->mu);
  if (e->history.empty()) throw Error(ErrorCode::kRejectedMove, "NOTHING_TO_UNDO: no moves to undo");
  e->schedule = std::move(e->history.back());
  e->history.pop_back();
  return view(schedule_id, *e);
}

std::string Workspace::submit(const std::string& kind, std::function<Json()> work) {
  std::string id;
  {
    std::unique_lock lock(mu_);
    id = "j" + std::to_string(next_job_++);
    jobs_[id] = JobView{id, kind, JobState::kQueued, nullptr, {}, {}};
  }
  executor_.post([this, id, work = std::move(work)] {
    {
      std::unique_lock lock(mu_);
      jobs_[id].state = JobState::kRunning;
    }
    Json result;
    std::string code, message;
    bool ok = true;
    try {
      result = work();
    } catch (const Error& err) {
      ok = false;
      code = to_string(err.code());
      message = err.what();
    } catch (const std::exception& err) {
      ok = false;
      code = "INTERNAL";
      message = err.what();
    }
    std::unique_lock lock(mu_);
    auto& job = jobs_[id];
    job.state = ok ? JobState::kDone : JobState::kFailed;
    job.result = std::move(result);
    job.error_code = code;
    job.error = message;
  });
  return id;
}

JobView Workspace::job(const std::string& id) const {
  std::shared_lock lock(mu_);
  auto it = jobs_.find(id);
  if (it == jobs_.end()) throw Error(ErrorCode::kNotFound, "no job '" + id + "'");
  return it->second;
}

std::string Workspace::start_portfolio(const std::string& instance_id, WeightCatalog catalog, PortfolioConfig config) {
  auto inst = instance(instance_id);
  int rev = revision(instance_id);
  return submit("portfolio", [=, this] {
    PortfolioResult res = run_portfolio(*inst, catalog, config);
    Json doc = portfolio_manifest(*inst, res, config);
    Json ids = Json::array();
    for (const auto& b : res.best) {
      if (b.run_index < 0) {
        ids.push_back(nullptr);
        continue;
      }
      const auto& set = res.catalog[static_cast<std::size_t>(b.weight_index)];
      ids.push_back(register_schedule(instance_id, inst, rev, b.schedule, set.name, set.weights));
    }
    doc["schedule_ids"] = ids;
    doc["timings"] = portfolio_timings(res);
    return doc;
  });
}

std::string Workspace::start_whatif(const std::string& instance_id, std::vector<int> day_deltas, WeightCatalog catalog,
                                    WhatIfMethod method, TwoPhaseConfig config) {
  auto inst = instance(instance_id);
  return submit("whatif", [=] { return whatif_to_json(whatif_days(*inst, day_deltas, catalog, method, config)); });
}

}  // namespace examsched
