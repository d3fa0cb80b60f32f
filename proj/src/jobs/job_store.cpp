// Copyright 2026 The QFaaS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qfaas/jobs/job_store.hpp"

#include <boost/uuid/random_generator.hpp>
#include <boost/uuid/uuid_io.hpp>

#include <algorithm>

#include "qfaas/error.hpp"

namespace qfaas::jobs {

using nlohmann::json;

namespace {

EpochMillis now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> get_optional(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<T>();
}

}  // namespace

std::string_view status_name(JobStatus status) {
  switch (status) {
    case JobStatus::Created: return "Created";
    case JobStatus::Queued: return "Queued";
    case JobStatus::Running: return "Running";
    case JobStatus::Completed: return "Completed";
    case JobStatus::Failed: return "Failed";
  }
  return "Unknown";
}

std::optional<JobStatus> status_from_name(std::string_view name) {
  for (JobStatus s : {JobStatus::Created, JobStatus::Queued, JobStatus::Running, JobStatus::Completed,
                      JobStatus::Failed}) {
    if (status_name(s) == name) return s;
  }
  return std::nullopt;
}

bool is_terminal(JobStatus status) { return status == JobStatus::Completed || status == JobStatus::Failed; }

bool is_legal_transition(JobStatus from, JobStatus to) {
  switch (from) {
    case JobStatus::Created: return to == JobStatus::Queued;
    case JobStatus::Queued: return to == JobStatus::Running || to == JobStatus::Failed;
    case JobStatus::Running: return to == JobStatus::Completed || to == JobStatus::Failed;
    default: return false;
  }
}

json to_json(const Job& job) {
  json j = {
      {"job_id", job.job_id},
      {"function", job.function_identifier},
      {"owner", job.owner},
      {"backend", job.backend_name},
      {"provider", job.provider},
      {"shots", job.shots},
      {"seed", job.seed},
      {"status", status_name(job.status)},
      {"created_at", job.created_at},
      {"waiting_ms", job.waiting_ms},
      {"running_ms", job.running_ms},
      {"circuit", job.circuit_text},
      {"bindings", job.bindings},
      {"selection_reason", job.selection_reason},
  };
  put_optional(j, "submitted_at", job.submitted_at);
  put_optional(j, "started_at", job.started_at);
  put_optional(j, "finished_at", job.finished_at);
  put_optional(j, "counts", job.counts);
  j["data"] = job.result_data ? *job.result_data : json(nullptr);
  put_optional(j, "error", job.error);
  return j;
}

Job job_from_json(const json& j) {
  Job job;
  try {
    job.job_id = j.at("job_id").get<std::string>();
    job.function_identifier = j.at("function").get<std::string>();
    job.owner = j.at("owner").get<std::string>();
    job.backend_name = j.at("backend").get<std::string>();
    job.provider = j.at("provider").get<std::string>();
    job.shots = j.at("shots").get<std::uint64_t>();
    job.seed = j.at("seed").get<std::uint64_t>();
    const auto status = status_from_name(j.at("status").get<std::string>());
    if (!status) throw Error("StorageFailure", "unknown job status in record " + job.job_id);
    job.status = *status;
    job.created_at = j.at("created_at").get<EpochMillis>();
    job.submitted_at = get_optional<EpochMillis>(j, "submitted_at");
    job.started_at = get_optional<EpochMillis>(j, "started_at");
    job.finished_at = get_optional<EpochMillis>(j, "finished_at");
    job.counts = get_optional<sim::Counts>(j, "counts");
    if (job.status == JobStatus::Completed && j.contains("data")) job.result_data = j["data"];
    job.error = get_optional<std::string>(j, "error");
    job.waiting_ms = j.value("waiting_ms", std::int64_t{0});
    job.running_ms = j.value("running_ms", std::int64_t{0});
    job.circuit_text = j.value("circuit", std::string{});
    job.bindings = j.value("bindings", std::map<std::string, std::int64_t>{});
    job.selection_reason = j.value("selection_reason", std::string{});
  } catch (const json::exception& e) {
    throw Error("StorageFailure", std::string("malformed job record: ") + e.what());
  }
  return job;
}

JobStore::JobStore(const std::filesystem::path& data_dir, JobStoreOptions options)
    : dir_(data_dir / "jobs", options.durable) {
  for (const auto& key : dir_.keys()) {
    const auto doc = dir_.get(key);
    if (!doc) continue;
    if (doc->value("schema", std::string{}) != kJobSchema) {
      throw Error("StorageFailure", "job record '" + key + "' has unsupported schema");
    }
    Job job = job_from_json(*doc);
    by_owner_[job.owner].insert(job.job_id);
    jobs_.emplace(job.job_id, std::move(job));
  }
}

Job JobStore::create(const NewJob& spec) {
  thread_local boost::uuids::random_generator uuid_gen;
  Job job;
  job.function_identifier = spec.function_identifier;
  job.owner = spec.owner;
  job.backend_name = spec.backend_name;
  job.provider = spec.provider;
  job.shots = spec.shots;
  job.seed = spec.seed;
  job.circuit_text = spec.circuit_text;
  job.bindings = spec.bindings;
  job.selection_reason = spec.selection_reason;
  job.status = JobStatus::Created;
  job.created_at = now_ms();

  std::lock_guard lock(mutex_);
  do {
    job.job_id = boost::uuids::to_string(uuid_gen());
  } while (jobs_.contains(job.job_id));
  json doc = to_json(job);
  doc["schema"] = kJobSchema;
  dir_.put(job.job_id, doc);
  by_owner_[job.owner].insert(job.job_id);
  jobs_.emplace(job.job_id, job);
  return job;
}

Job& JobStore::find_locked(std::string_view job_id) {
  const auto it = jobs_.find(job_id);
  if (it == jobs_.end()) throw Error("UnknownJob", "no job '" + std::string(job_id) + "'", {{"job_id", job_id}});
  return it->second;
}

const Job& JobStore::find_locked(std::string_view job_id) const {
  const auto it = jobs_.find(job_id);
  if (it == jobs_.end()) throw Error("UnknownJob", "no job '" + std::string(job_id) + "'", {{"job_id", job_id}});
  return it->second;
}

Job JobStore::apply_locked(Job& job, JobStatus to, TransitionPayload payload) {
  auto illegal = [&](const std::string& why) {
    return Error("IllegalTransition",
                 "job " + job.job_id + ": " + std::string(status_name(job.status)) + " -> " +
                     std::string(status_name(to)) + " " + why,
                 {{"from", status_name(job.status)}, {"to", status_name(to)}});
  };
  if (!is_legal_transition(job.status, to)) throw illegal("is not a legal edge");
  if (to == JobStatus::Completed && (!payload.counts || !payload.result_data)) {
    throw illegal("requires counts and result data");
  }
  if (to == JobStatus::Failed && (!payload.error || payload.error->empty())) throw illegal("requires error text");

  Job next = job;
  const EpochMillis now = now_ms();
  next.status = to;
  switch (to) {
    case JobStatus::Queued: next.submitted_at = std::max(now, job.created_at); break;
    case JobStatus::Running:
      next.started_at = std::max(now, *job.submitted_at);
      next.waiting_ms = *next.started_at - *job.submitted_at;
      break;
    case JobStatus::Completed:
    case JobStatus::Failed:
      if (job.started_at) {
        next.finished_at = std::max(now, *job.started_at);
        next.running_ms = *next.finished_at - *job.started_at;
      } else {
        next.finished_at = std::max(now, *job.submitted_at);
        next.waiting_ms = *next.finished_at - *job.submitted_at;
      }
      if (to == JobStatus::Completed) {
        next.counts = std::move(payload.counts);
        next.result_data = std::move(payload.result_data);
      } else {
        next.error = std::move(payload.error);
      }
      break;
    case JobStatus::Created: break;
  }

  json doc = to_json(next);
  doc["schema"] = kJobSchema;
  dir_.put(next.job_id, doc);
  job = next;
  return next;
}

Job JobStore::transition(std::string_view job_id, JobStatus to, TransitionPayload payload) {
  Job result;
  {
    std::lock_guard lock(mutex_);
    result = apply_locked(find_locked(job_id), to, std::move(payload));
  }
  changed_.notify_all();
  return result;
}

Job JobStore::await_result(std::string_view job_id, std::chrono::milliseconds threshold) const {
  std::unique_lock lock(mutex_);
  const Job* job = &find_locked(job_id);
  changed_.wait_for(lock, threshold, [&] { return is_terminal(job->status); });
  return *job;
}

Job JobStore::get(std::string_view job_id) const {
  std::lock_guard lock(mutex_);
  return find_locked(job_id);
}

Job JobStore::get(std::string_view job_id, const Principal& caller) const {
  Job job = get(job_id);
  if (!caller.is_admin() && job.owner != caller.username) {
    throw Error("PermissionDenied", "job '" + job.job_id + "' belongs to another user");
  }
  return job;
}

JobPage JobStore::list(const JobFilter& filter, const Principal& caller, std::size_t page,
                       std::size_t page_size) const {
  if (!caller.is_admin() && filter.owner && *filter.owner != caller.username) {
    throw Error("PermissionDenied", "only admins may list other users' jobs");
  }
  const std::optional<std::string> owner = caller.is_admin() ? filter.owner : std::optional(caller.username);
  page = std::max<std::size_t>(page, 1);
  page_size = std::clamp<std::size_t>(page_size, 1, 500);

  std::vector<const Job*> matches;
  {
    std::lock_guard lock(mutex_);
    auto consider = [&](const Job& job) {
      if (filter.function_identifier && job.function_identifier != *filter.function_identifier) return;
      if (filter.status && job.status != *filter.status) return;
      matches.push_back(&job);
    };
    if (owner) {
      if (const auto it = by_owner_.find(*owner); it != by_owner_.end()) {
        for (const auto& id : it->second) consider(jobs_.find(id)->second);
      }
    } else {
      for (const auto& [id, job] : jobs_) consider(job);
    }
    std::sort(matches.begin(), matches.end(), [](const Job* a, const Job* b) {
      return a->created_at != b->created_at ? a->created_at > b->created_at : a->job_id < b->job_id;
    });

    JobPage out;
    out.total = matches.size();
    out.page = page;
    out.page_size = page_size;
    const std::size_t first = (page - 1) * page_size;
    for (std::size_t i = first; i < matches.size() && i < first + page_size; ++i) out.items.push_back(*matches[i]);
    return out;
  }
}

std::size_t JobStore::recover_orphans() {
  std::size_t failed = 0;
  {
    std::lock_guard lock(mutex_);
    for (auto& [id, job] : jobs_) {
      if (is_terminal(job.status)) continue;
      if (job.status == JobStatus::Created) apply_locked(job, JobStatus::Queued, {});
      TransitionPayload payload;
      payload.error = "interrupted: server restarted before the job finished";
      apply_locked(job, JobStatus::Failed, std::move(payload));
      ++failed;
    }
  }
  if (failed) changed_.notify_all();
  return failed;
}

std::size_t JobStore::size() const {
  std::lock_guard lock(mutex_);
  return jobs_.size();
}

}  // namespace qfaas::jobs
