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

#include "qfaas/providers/provider_service.hpp"

#include <boost/asio/post.hpp>
#include <boost/asio/thread_pool.hpp>

#include <vector>

#include "qfaas/error.hpp"

namespace qfaas::providers {

struct ProviderService::Pool {
  explicit Pool(std::size_t threads) : pool(threads) {}
  boost::asio::thread_pool pool;
};

std::string_view state_name(HandleState state) {
  switch (state) {
    case HandleState::Queued: return "queued";
    case HandleState::Running: return "running";
    case HandleState::Done: return "done";
    case HandleState::Failed: return "failed";
  }
  return "unknown";
}

ProviderService::ProviderService(ProviderCatalog catalog, ProviderConfig config)
    : config_(config),
      catalog_(std::move(catalog)),
      pool_(std::make_unique<Pool>(std::max<std::size_t>(1, config.worker_threads))) {
  scheduler_ = std::jthread([this](std::stop_token stop) { scheduler_loop(stop); });
}

ProviderService::~ProviderService() {
  scheduler_.request_stop();
  wake_.notify_all();
  if (scheduler_.joinable()) scheduler_.join();
  pool_->pool.stop();
  pool_->pool.join();
}

BackendInfo ProviderService::with_live_queue(const BackendInfo& backend) const {
  BackendInfo b = backend;
  const auto it = in_flight_by_backend_.find(b.name);
  b.queue_length = b.background_queue + (it == in_flight_by_backend_.end() ? 0 : it->second);
  return b;
}

std::vector<BackendInfo> ProviderService::snapshot() const {
  std::lock_guard lock(mutex_);
  std::vector<BackendInfo> out;
  out.reserve(catalog_.backends.size());
  for (const auto& b : catalog_.backends) out.push_back(with_live_queue(b));
  return out;
}

std::vector<BackendInfo> ProviderService::list_backends(const BackendFilter& filter) const {
  return filter_backends(snapshot(), filter);
}

BackendInfo ProviderService::verify_backend(Role role, std::string_view name,
                                            const circuit::CircuitStats& stats) const {
  return providers::verify_backend(snapshot(), role, name, stats);
}

ProviderJobHandle ProviderService::submit(const BackendInfo& backend, circuit::Circuit circuit, std::uint64_t shots,
                                          std::optional<std::uint64_t> seed, TransitionCallback on_transition) {
  if (shots == 0) throw Error("InvalidShots", "shots must be positive");
  ProviderJobHandle snapshot;
  {
    std::lock_guard lock(mutex_);
    const BackendInfo* current = catalog_.find(backend.name);
    if (!current) throw Error("UnknownBackend", "no backend named '" + backend.name + "'", {{"backend", backend.name}});
    auto& provider_load = in_flight_by_provider_[current->provider];
    if (provider_load >= config_.max_in_flight_per_provider) {
      throw Error("CapacityExceeded",
                  "provider '" + current->provider + "' already has " + std::to_string(provider_load) +
                      " jobs in flight",
                  {{"provider", current->provider}, {"limit", config_.max_in_flight_per_provider}});
    }

    const BackendInfo live = with_live_queue(*current);
    const auto now = Clock::now();
    const auto delay = current->is_local() ? Clock::duration::zero()
                                           : std::chrono::duration_cast<Clock::duration>(
                                                 std::chrono::duration<double>(live.estimated_wait_seconds()));

    Entry entry;
    entry.handle.id = "ph-" + std::to_string(next_id_++);
    entry.handle.backend = current->name;
    entry.handle.provider = current->provider;
    entry.handle.state = HandleState::Queued;
    entry.handle.submitted_at = now;
    entry.handle.ready_at = now + delay;
    entry.circuit = std::move(circuit);
    entry.readout_flip_p = current->readout_flip_p;
    entry.shots = shots;
    entry.seed = seed ? *seed : sim::entropy_seed();
    entry.on_transition = std::move(on_transition);

    ++provider_load;
    ++in_flight_by_backend_[current->name];
    snapshot = entry.handle;
    handles_.emplace(snapshot.id, std::move(entry));
    pending_wake_ = true;
  }
  wake_.notify_all();
  return snapshot;
}

ProviderJobHandle ProviderService::poll(std::string_view handle_id) const {
  std::lock_guard lock(mutex_);
  const auto it = handles_.find(handle_id);
  if (it == handles_.end()) {
    throw Error("UnknownHandle", "no provider job '" + std::string(handle_id) + "'", {{"handle", handle_id}});
  }
  return it->second.handle;
}

void ProviderService::set_operational(std::string_view name, bool operational) {
  std::lock_guard lock(mutex_);
  for (auto& b : catalog_.backends) {
    if (b.name == name) {
      b.operational = operational;
      return;
    }
  }
  throw Error("UnknownBackend", "no backend named '" + std::string(name) + "'");
}

void ProviderService::reload(ProviderCatalog catalog) {
  std::lock_guard lock(mutex_);
  catalog_ = std::move(catalog);
}

void ProviderService::scheduler_loop(std::stop_token stop) {
  std::unique_lock lock(mutex_);
  while (!stop.stop_requested()) {
    // Earliest pending deadline bounds the sleep; the tick bounds it otherwise.
    auto deadline = Clock::now() + config_.tick;
    for (const auto& [id, entry] : handles_) {
      if (entry.handle.state == HandleState::Queued && entry.handle.ready_at < deadline) {
        deadline = entry.handle.ready_at;
      }
    }
    wake_.wait_until(lock, stop, deadline, [this] { return pending_wake_; });
    pending_wake_ = false;
    if (stop.stop_requested()) break;

    const auto now = Clock::now();
    std::vector<std::pair<ProviderJobHandle, TransitionCallback>> promoted;
    for (auto& [id, entry] : handles_) {
      if (entry.handle.state == HandleState::Queued && entry.handle.ready_at <= now) {
        entry.handle.state = HandleState::Running;
        promoted.emplace_back(entry.handle, entry.on_transition);
      }
    }
    if (promoted.empty()) continue;

    lock.unlock();
    for (auto& [handle, callback] : promoted) {
      if (callback) callback(handle);
      boost::asio::post(pool_->pool, [this, id = handle.id] { execute(id); });
    }
    lock.lock();
  }
}

void ProviderService::execute(const std::string& id) {
  circuit::Circuit circuit;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  double flip_p = 0;
  std::string backend;
  {
    std::lock_guard lock(mutex_);
    const auto it = handles_.find(id);
    if (it == handles_.end()) return;
    circuit = std::move(it->second.circuit);
    shots = it->second.shots;
    seed = it->second.seed;
    flip_p = it->second.readout_flip_p;
    backend = it->second.handle.backend;
  }
  try {
    finish(id, sim::execute(circuit, shots, seed, flip_p, backend, config_.max_qubits), std::nullopt);
  } catch (const std::exception& e) {
    finish(id, std::nullopt, std::string(e.what()));
  }
}

void ProviderService::finish(const std::string& id, std::optional<sim::ExecutionResult> result,
                             std::optional<std::string> error) {
  ProviderJobHandle snapshot;
  TransitionCallback callback;
  {
    std::lock_guard lock(mutex_);
    auto& entry = handles_.at(id);
    entry.handle.state = result ? HandleState::Done : HandleState::Failed;
    entry.handle.result = std::move(result);
    entry.handle.error = std::move(error);
    if (auto it = in_flight_by_backend_.find(entry.handle.backend); it != in_flight_by_backend_.end() && it->second) {
      --it->second;
    }
    if (auto it = in_flight_by_provider_.find(entry.handle.provider); it != in_flight_by_provider_.end() && it->second) {
      --it->second;
    }
    snapshot = entry.handle;
    callback = std::move(entry.on_transition);
  }
  if (callback) callback(snapshot);
}

}  // namespace qfaas::providers
