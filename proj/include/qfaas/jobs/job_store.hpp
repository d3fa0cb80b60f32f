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

#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qfaas/role.hpp"
#include "qfaas/sim/simulator.hpp"
#include "qfaas/storage/document_dir.hpp"

namespace qfaas::jobs {

/// Created -> Queued -> Running -> {Completed, Failed}; Queued -> Failed.
enum class JobStatus { Created, Queued, Running, Completed, Failed };

std::string_view status_name(JobStatus status);
std::optional<JobStatus> status_from_name(std::string_view name);
bool is_terminal(JobStatus status);
bool is_legal_transition(JobStatus from, JobStatus to);

inline constexpr std::chrono::milliseconds kDefaultAwaitThreshold{60000};
inline constexpr std::string_view kJobSchema = "qfaas.job/v1";

/// Wall-clock milliseconds since the Unix epoch.
using EpochMillis = std::int64_t;

struct Job {
  std::string job_id;
  std::string function_identifier;
  std::string owner;
  std::string backend_name;
  std::string provider;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  JobStatus status = JobStatus::Created;

  EpochMillis created_at = 0;
  std::optional<EpochMillis> submitted_at;  // entered Queued
  std::optional<EpochMillis> started_at;    // entered Running
  std::optional<EpochMillis> finished_at;   // entered a terminal state

  std::optional<sim::Counts> counts;        // iff Completed
  std::optional<nlohmann::json> result_data;  // iff Completed
  std::optional<std::string> error;         // iff Failed

  std::int64_t waiting_ms = 0;  // Queued span
  std::int64_t running_ms = 0;  // Running span

  std::string circuit_text;
  std::map<std::string, std::int64_t> bindings;
  std::string selection_reason;
};

nlohmann::json to_json(const Job& job);
Job job_from_json(const nlohmann::json& doc);

struct NewJob {
  std::string function_identifier;
  std::string owner;
  std::string backend_name;
  std::string provider;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  std::string circuit_text;
  std::map<std::string, std::int64_t> bindings;
  std::string selection_reason;
};

struct TransitionPayload {
  std::optional<sim::Counts> counts;
  std::optional<nlohmann::json> result_data;
  std::optional<std::string> error;
};

struct JobFilter {
  std::optional<std::string> owner;
  std::optional<std::string> function_identifier;
  std::optional<JobStatus> status;
};

struct JobPage {
  std::vector<Job> items;
  std::size_t total = 0;
  std::size_t page = 1;
  std::size_t page_size = 0;
};

struct JobStoreOptions {
  /// fsync every write. Turning this off trades crash durability for speed.
  bool durable = true;
};

/// Job records under <data_dir>/jobs, one document per job, written before
/// any mutating call returns. An in-memory owner index is rebuilt on load.
class JobStore {
 public:
  explicit JobStore(const std::filesystem::path& data_dir, JobStoreOptions options = {});

  /// Issues a UUID job id and persists the record in status Created.
  Job create(const NewJob& spec);

  /// Applies the edge iff legal. Completed needs counts and result_data,
  /// Failed needs error text. Throws Error{"IllegalTransition"} or
  /// Error{"UnknownJob"}.
  Job transition(std::string_view job_id, JobStatus to, TransitionPayload payload = {});

  /// Returns once the job is terminal or `threshold` has passed, whichever
  /// comes first. Never cancels the job.
  Job await_result(std::string_view job_id, std::chrono::milliseconds threshold = kDefaultAwaitThreshold) const;

  /// Unchecked lookup. Throws Error{"UnknownJob"}.
  Job get(std::string_view job_id) const;
  /// Owners see their jobs, admins see all. Throws UnknownJob / PermissionDenied.
  Job get(std::string_view job_id, const Principal& caller) const;

  /// Newest first. Non-admins only see their own jobs; asking for another
  /// owner throws PermissionDenied. Pages are 1-based.
  JobPage list(const JobFilter& filter, const Principal& caller, std::size_t page = 1,
               std::size_t page_size = 50) const;

  /// Fails jobs a previous process left in Created/Queued/Running; their
  /// provider handles died with it. Returns how many were failed.
  std::size_t recover_orphans();

  std::size_t size() const;

 private:
  Job& find_locked(std::string_view job_id);
  const Job& find_locked(std::string_view job_id) const;
  Job apply_locked(Job& job, JobStatus to, TransitionPayload payload);

  storage::DocumentDir dir_;
  mutable std::mutex mutex_;
  mutable std::condition_variable changed_;
  std::map<std::string, Job, std::less<>> jobs_;
  std::map<std::string, std::set<std::string>, std::less<>> by_owner_;
};

}  // namespace qfaas::jobs
