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
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "qfaas/providers/catalog.hpp"
#include "qfaas/sim/simulator.hpp"

namespace qfaas::providers {

using Clock = std::chrono::steady_clock;

struct ProviderConfig {
  std::size_t worker_threads = 2;
  std::size_t max_in_flight_per_provider = 64;
  std::chrono::milliseconds tick{100};
  unsigned max_qubits = sim::kDefaultMaxQubits;
};

enum class HandleState { Queued, Running, Done, Failed };

std::string_view state_name(HandleState state);

struct ProviderJobHandle {
  std::string id;
  std::string backend;
  std::string provider;
  HandleState state = HandleState::Queued;
  Clock::time_point submitted_at;
  Clock::time_point ready_at;
  std::optional<sim::ExecutionResult> result;  // present iff Done
  std::optional<std::string> error;            // present iff Failed
};

/// Invoked after the handle enters Running, Done or Failed. Runs on the
/// scheduler thread (Running) or a worker thread (terminal states).
using TransitionCallback = std::function<void(const ProviderJobHandle&)>;

/// The quantum cloud stand-in. Local jobs start on the next scheduler wake-up;
/// mock remote jobs stay queued for queue_length * avg_seconds_per_job
/// (queue length observed at submit) and then run on the same simulator with
/// the backend's readout noise. A single scheduler thread promotes
/// queued handles to running; a bounded worker pool executes them.
class ProviderService {
 public:
  ProviderService(ProviderCatalog catalog, ProviderConfig config = {});
  ~ProviderService();

  ProviderService(const ProviderService&) = delete;
  ProviderService& operator=(const ProviderService&) = delete;

  /// Every backend with its live queue_length, ordered by name.
  std::vector<BackendInfo> snapshot() const;
  std::vector<BackendInfo> list_backends(const BackendFilter& filter = {}) const;
  BackendInfo verify_backend(Role role, std::string_view name, const circuit::CircuitStats& stats) const;

  /// Throws Error{"CapacityExceeded"} when the provider already has
  /// max_in_flight_per_provider unfinished jobs, Error{"UnknownBackend"} for
  /// names missing from the catalog.
  ProviderJobHandle submit(const BackendInfo& backend, circuit::Circuit circuit, std::uint64_t shots,
                           std::optional<std::uint64_t> seed, TransitionCallback on_transition = {});

  /// Throws Error{"UnknownHandle"}.
  ProviderJobHandle poll(std::string_view handle_id) const;

  /// Marks a backend up or down; unknown names throw Error{"UnknownBackend"}.
  void set_operational(std::string_view name, bool operational);

  /// Atomically replaces the catalog. In-flight counts carry over by name.
  void reload(ProviderCatalog catalog);

  const ProviderConfig& config() const { return config_; }

 private:
  struct Entry {
    ProviderJobHandle handle;
    circuit::Circuit circuit;
    double readout_flip_p = 0;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    TransitionCallback on_transition;
  };

  void scheduler_loop(std::stop_token stop);
  void execute(const std::string& id);
  void finish(const std::string& id, std::optional<sim::ExecutionResult> result, std::optional<std::string> error);
  BackendInfo with_live_queue(const BackendInfo& backend) const;

  ProviderConfig config_;
  mutable std::mutex mutex_;
  std::condition_variable_any wake_;
  ProviderCatalog catalog_;
  std::map<std::string, Entry, std::less<>> handles_;
  std::map<std::string, std::uint64_t, std::less<>> in_flight_by_backend_;
  std::map<std::string, std::uint64_t, std::less<>> in_flight_by_provider_;
  std::uint64_t next_id_ = 1;
  bool pending_wake_ = false;

  struct Pool;
  std::unique_ptr<Pool> pool_;
  std::jthread scheduler_;
};

}  // namespace qfaas::providers
