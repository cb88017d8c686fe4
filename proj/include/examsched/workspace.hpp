#pragma once

#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

#include "examsched/documents.hpp"

namespace examsched {

// Fixed pool of worker threads draining a FIFO queue.
class BoundedExecutor {
 public:
  explicit BoundedExecutor(int workers);
  ~BoundedExecutor();
  BoundedExecutor(const BoundedExecutor&) = delete;
  BoundedExecutor& operator=(const BoundedExecutor&) = delete;

  void post(std::function<void()> task);
  int workers() const { return static_cast<int>(threads_.size()); }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::function<void()>> queue_;
  bool stopping_ = false;
  std::vector<std::thread> threads_;
};

enum class JobState { kQueued, kRunning, kDone, kFailed };
const char* to_string(JobState state);

struct JobView {
  std::string id;
  std::string kind;
  JobState state = JobState::kQueued;
  Json result;  // null until done
  std::string error_code;
  std::string error;
};

struct ScheduleView {
  std::string id;
  std::string instance_id;
  std::shared_ptr<const Instance> instance;  // the revision the schedule belongs to
  int instance_revision = 0;
  bool stale = false;  // the instance changed after this schedule was made
  std::string weight_set;
  Weights weights;
  Schedule schedule;
  InconvenienceReport report;
  std::size_t undo_depth = 0;
};

struct MoveResult {
  ScheduleView after;
  InconvenienceReport before;
  ReportDelta delta;
};

// Registrar session state behind the service: instances with revisions,
// schedules with undo history, and background jobs. Reads and writes of one
// schedule are serialized; distinct schedules edit concurrently.
class Workspace {
 public:
  explicit Workspace(int max_jobs = 4);

  std::string add_instance(Instance instance);
  std::shared_ptr<const Instance> instance(const std::string& id) const;
  int revision(const std::string& id) const;

  // New revision with edited grouping or constraints; schedules of older
  // revisions become stale.
  void edit_groups(const std::string& id, const std::vector<GroupEdit>& edits);
  void set_constraints(const std::string& id, const ConstraintSet& constraints);

  std::string add_schedule(const std::string& instance_id, Schedule schedule, const std::string& weight_set = {},
                           std::optional<Weights> weights = std::nullopt);
  ScheduleView schedule(const std::string& id) const;
  std::vector<std::string> schedule_ids() const;

  // group may be a label or a numeric index. Throws Error(kRejectedMove)
  // naming the violated rule, Error(kNotFound) for unknown ids.
  MoveResult apply_move(const std::string& schedule_id, const std::string& group, int slot);
  ScheduleView undo(const std::string& schedule_id);

  std::string start_portfolio(const std::string& instance_id, WeightCatalog catalog, PortfolioConfig config);
  std::string start_whatif(const std::string& instance_id, std::vector<int> day_deltas, WeightCatalog catalog,
                           WhatIfMethod method, TwoPhaseConfig config);
  JobView job(const std::string& id) const;

 private:
  struct InstanceEntry {
    std::shared_ptr<const Instance> instance;
    int revision = 1;
  };
  struct ScheduleEntry {
    mutable std::mutex mu;
    std::string instance_id;
    std::shared_ptr<const Instance> instance;
    int revision = 0;
    std::string weight_set;
    Weights weights;
    Schedule schedule;
    std::vector<Schedule> history;
  };

  std::shared_ptr<ScheduleEntry> find_schedule(const std::string& id) const;
  ScheduleView view(const std::string& id, const ScheduleEntry& e) const;
  void replace_instance(const std::string& id, Instance next);
  std::string register_schedule(const std::string& instance_id, std::shared_ptr<const Instance> instance,
                                int revision, Schedule schedule, const std::string& weight_set, Weights weights);
  std::string submit(const std::string& kind, std::function<Json()> work);

  mutable std::shared_mutex mu_;
  std::map<std::string, InstanceEntry> instances_;
  std::map<std::string, std::shared_ptr<ScheduleEntry>> schedules_;
  std::map<std::string, JobView> jobs_;
  int next_instance_ = 1, next_schedule_ = 1, next_job_ = 1;
  BoundedExecutor executor_;
};

}  // namespace examsched
