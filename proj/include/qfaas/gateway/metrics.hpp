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

#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "qfaas/providers/catalog.hpp"

namespace qfaas::gateway {

/// Process counters rendered in the Prometheus text format.
class Metrics {
 public:
  void invocation() { invocations_.fetch_add(1, std::memory_order_relaxed); }
  void job_completed() { completed_.fetch_add(1, std::memory_order_relaxed); }
  void job_failed() { failed_.fetch_add(1, std::memory_order_relaxed); }
  void http_response(int status);

  std::uint64_t invocations() const { return invocations_.load(); }
  std::uint64_t jobs_completed() const { return completed_.load(); }
  std::uint64_t jobs_failed() const { return failed_.load(); }

  /// `backends` supplies the queue_depth gauge.
  std::string render(const std::vector<providers::BackendInfo>& backends) const;

 private:
  std::atomic<std::uint64_t> invocations_{0};
  std::atomic<std::uint64_t> completed_{0};
  std::atomic<std::uint64_t> failed_{0};
  mutable std::mutex mutex_;
  std::map<int, std::uint64_t> by_status_;
};

}  // namespace qfaas::gateway
