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

#include "qfaas/gateway/metrics.hpp"

#include <sstream>

namespace qfaas::gateway {

void Metrics::http_response(int status) {
  std::lock_guard lock(mutex_);
  ++by_status_[status];
}

std::string Metrics::render(const std::vector<providers::BackendInfo>& backends) const {
  std::ostringstream out;
  out << "# TYPE invocations_total counter\n"
      << "invocations_total " << invocations_.load() << "\n"
      << "# TYPE jobs_completed_total counter\n"
      << "jobs_completed_total " << completed_.load() << "\n"
      << "# TYPE jobs_failed_total counter\n"
      << "jobs_failed_total " << failed_.load() << "\n"
      << "# TYPE queue_depth gauge\n";
  for (const auto& b : backends) out << "queue_depth{backend=\"" << b.name << "\"} " << b.queue_length << "\n";
  out << "# TYPE http_requests_total counter\n";
  std::lock_guard lock(mutex_);
  for (const auto& [code, n] : by_status_) out << "http_requests_total{code=\"" << code << "\"} " << n << "\n";
  return out.str();
}

}  // namespace qfaas::gateway
