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

#include "qfaas/selector/selector.hpp"

#include <tuple>

#include "qfaas/error.hpp"

namespace qfaas::selector {

using providers::BackendInfo;

std::vector<std::string> rejection_reasons(const BackendInfo& b, Role role, const circuit::CircuitStats& stats,
                                           const SelectionCriteria& criteria) {
  std::vector<std::string> reasons;
  if (!b.operational) reasons.emplace_back("down");
  if (!b.allowed_roles.contains(role)) reasons.emplace_back("role");
  if (b.qubits < stats.width) reasons.emplace_back("qubits");
  if (criteria.backend_type && b.kind != *criteria.backend_type) reasons.emplace_back("kind");
  if (criteria.provider && b.provider != *criteria.provider) reasons.emplace_back("provider");
  if (criteria.backend_name && b.name != *criteria.backend_name) reasons.emplace_back("name");
  return reasons;
}

std::vector<BackendInfo> eligible(const std::vector<BackendInfo>& catalog, Role role,
                                  const circuit::CircuitStats& stats, const SelectionCriteria& criteria) {
  std::vector<BackendInfo> out;
  for (const auto& b : catalog) {
    if (rejection_reasons(b, role, stats, criteria).empty()) out.push_back(b);
  }
  return out;
}

namespace {

auto rank_key(const BackendInfo& b) { return std::make_tuple(b.estimated_wait_seconds(), b.qubits, std::cref(b.name)); }

}  // namespace

SelectionDecision select(const std::vector<BackendInfo>& catalog, Role role, const circuit::CircuitStats& stats,
                         const SelectionCriteria& criteria) {
  if (criteria.backend_name) {
    BackendInfo b = providers::verify_backend(catalog, role, *criteria.backend_name, stats);
    const double wait = b.estimated_wait_seconds();
    return {std::move(b), wait, "manual selection"};
  }
  if (!criteria.auto_select) {
    throw Error("InvalidCriteria", "autoSelect is off but no backendName was given");
  }

  const auto candidates = eligible(catalog, role, stats, criteria);
  if (candidates.empty()) {
    nlohmann::json rejections = nlohmann::json::array();
    for (const auto& b : catalog) {
      rejections.push_back({{"backend", b.name}, {"reasons", rejection_reasons(b, role, stats, criteria)}});
    }
    throw Error("NoEligibleBackend", "no backend satisfies the request", {{"rejections", rejections}});
  }

  const BackendInfo* best = &candidates.front();
  const BackendInfo* runner_up = nullptr;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const BackendInfo* b = &candidates[i];
    if (rank_key(*b) < rank_key(*best)) {
      runner_up = best;
      best = b;
    } else if (!runner_up || rank_key(*b) < rank_key(*runner_up)) {
      runner_up = b;
    }
  }

  std::string reason;
  if (!runner_up) {
    reason = "only eligible backend";
  } else if (best->estimated_wait_seconds() < runner_up->estimated_wait_seconds()) {
    reason = "least estimated wait";
  } else if (best->qubits < runner_up->qubits) {
    reason = "smallest sufficient device (tie on wait)";
  } else {
    reason = "name order (tie on wait and qubits)";
  }
  return {*best, best->estimated_wait_seconds(), reason};
}

}  // namespace qfaas::selector
