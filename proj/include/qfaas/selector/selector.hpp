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

#include <optional>
#include <string>
#include <vector>

#include "qfaas/circuit/circuit.hpp"
#include "qfaas/providers/catalog.hpp"
#include "qfaas/role.hpp"

namespace qfaas::selector {

struct SelectionCriteria {
  std::optional<std::string> provider;
  std::optional<providers::BackendKind> backend_type;
  /// When set, selection is manual regardless of auto_select.
  std::optional<std::string> backend_name;
  bool auto_select = true;
};

struct SelectionDecision {
  providers::BackendInfo backend;
  double estimated_wait_seconds = 0;
  std::string reason;
};

/// Why `backend` is not eligible; empty when it is. Reason codes:
/// "down", "role", "qubits", "kind", "provider", "name".
std::vector<std::string> rejection_reasons(const providers::BackendInfo& backend, Role role,
                                           const circuit::CircuitStats& stats, const SelectionCriteria& criteria);

/// Backends passing every predicate, in catalog order.
std::vector<providers::BackendInfo> eligible(const std::vector<providers::BackendInfo>& catalog, Role role,
                                             const circuit::CircuitStats& stats, const SelectionCriteria& criteria);

/// Manual (backend_name set): verify_backend semantics. Automatic: minimum of
/// (estimated wait, qubits, name) over the eligible set.
/// Throws Error{"NoEligibleBackend"} with details
/// {"rejections": [{"backend", "reasons": [...]}, ...]}, or the
/// verify_backend errors in manual mode, or Error{"InvalidCriteria"} when
/// auto_select is off without a backend name.
SelectionDecision select(const std::vector<providers::BackendInfo>& catalog, Role role,
                         const circuit::CircuitStats& stats, const SelectionCriteria& criteria);

}  // namespace qfaas::selector
