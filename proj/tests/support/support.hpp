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

#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "qfaas/circuit/circuit.hpp"
#include "qfaas/gateway/gateway.hpp"
#include "qfaas/gateway/http_server.hpp"

namespace qfaas::testing {

using Complex = std::complex<double>;

/// Row-major dense square matrix.
struct Dense {
  std::size_t dim = 0;
  std::vector<Complex> m;

  static Dense identity(std::size_t dim);
  Complex& at(std::size_t r, std::size_t c) { return m[r * dim + c]; }
  Complex at(std::size_t r, std::size_t c) const { return m[r * dim + c]; }
};

Dense operator*(const Dense& a, const Dense& b);
Dense operator+(const Dense& a, const Dense& b);
Dense kron(const Dense& a, const Dense& b);

/// The full 2^n x 2^n unitary of one gate, assembled from 2x2 factors with
/// Kronecker products (qubit n-1 leftmost, so qubit q is bit q of the index).
Dense gate_unitary(const circuit::GateOp& op, unsigned n);

/// Final state of `c` from the product of every gate's dense unitary.
std::vector<Complex> oracle_state(const circuit::Circuit& c);

/// Random valid circuit, width in [1, max_width], gate count in [0, max_gates].
circuit::Circuit random_circuit(std::mt19937_64& rng, unsigned max_width, std::size_t max_gates);
/// Random valid circuit of exactly `width` qubits and `gates` ops.
circuit::Circuit random_circuit_exact(std::mt19937_64& rng, unsigned width, std::size_t gates);

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct HttpReply {
  int status = 0;
  nlohmann::json body;
  std::string raw;
};

/// Test users: admin (admin), dev and dev2 (developer), alice and bob (enduser).
/// Each password is "<name>-pw".
gateway::GatewayConfig test_config(const std::filesystem::path& data_dir);

/// A gateway plus HTTP server on an ephemeral local port.
class TestServer {
 public:
  explicit TestServer(const std::filesystem::path& data_dir);
  TestServer(const std::filesystem::path& data_dir, gateway::GatewayConfig config);
  ~TestServer();

  int port() const { return port_; }
  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  gateway::Gateway& gateway() { return *gateway_; }

  /// Logs in over HTTP; caches the token per user.
  std::string token(const std::string& user);
  HttpReply call(const std::string& method, const std::string& path, const std::string& token = "",
                 const nlohmann::json& body = nullptr);

  /// Creates a function over HTTP and waits for its pipeline. Returns the record.
  nlohmann::json deploy(const std::string& user, const std::string& name, const std::string& template_tag,
                        const std::string& source, bool is_public = false);

 private:
  std::unique_ptr<gateway::Gateway> gateway_;
  std::unique_ptr<gateway::HttpServer> http_;
  int port_ = 0;
  std::map<std::string, std::string> tokens_;
};

/// Sample function sources.
std::string qrng_source();
std::string bell_source();
std::string ghz_source();

}  // namespace qfaas::testing
