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

#include <memory>
#include <string>

#include "qfaas/gateway/gateway.hpp"

namespace qfaas::gateway {

/// Routes:
///   POST   /api/auth/login                 (no token)
///   GET    /api/auth/me
///   POST   /api/function/{identifier}      invocation
///   POST   /api/functions                  create (202)
///   GET    /api/functions
///   GET    /api/functions/{identifier}
///   PUT    /api/functions/{identifier}
///   DELETE /api/functions/{identifier}     (204)
///   GET    /api/functions/{identifier}/deployments
///   GET    /api/job/{id}
///   GET    /api/jobs?owner&status&function&page&page_size
///   GET    /api/backends?provider&type&operational
///   GET    /metrics                        (no token)
///   GET    /ui/...                         static files when ui_dir is set
class HttpServer {
 public:
  explicit HttpServer(Gateway& gateway);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves on a background thread until stop().
  void start();
  /// Serves on the calling thread until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace qfaas::gateway
