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

#include "support.hpp"

#include <httplib.h>
#include <stdlib.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qfaas/encoding.hpp"

namespace qfaas::testing {

using circuit::GateKind;
using circuit::GateOp;
using nlohmann::json;

Dense Dense::identity(std::size_t dim) {
  Dense d{dim, std::vector<Complex>(dim * dim)};
  for (std::size_t i = 0; i < dim; ++i) d.at(i, i) = 1;
  return d;
}

Dense operator*(const Dense& a, const Dense& b) {
  Dense out{a.dim, std::vector<Complex>(a.dim * a.dim)};
  for (std::size_t r = 0; r < a.dim; ++r) {
    for (std::size_t k = 0; k < a.dim; ++k) {
      const Complex x = a.at(r, k);
      if (x == Complex{}) continue;
      for (std::size_t c = 0; c < a.dim; ++c) out.at(r, c) += x * b.at(k, c);
    }
  }
  return out;
}

Dense operator+(const Dense& a, const Dense& b) {
  Dense out = a;
  for (std::size_t i = 0; i < out.m.size(); ++i) out.m[i] += b.m[i];
  return out;
}

Dense kron(const Dense& a, const Dense& b) {
  Dense out{a.dim * b.dim, std::vector<Complex>(a.dim * b.dim * a.dim * b.dim)};
  for (std::size_t ar = 0; ar < a.dim; ++ar) {
    for (std::size_t ac = 0; ac < a.dim; ++ac) {
      for (std::size_t br = 0; br < b.dim; ++br) {
        for (std::size_t bc = 0; bc < b.dim; ++bc) {
          out.at(ar * b.dim + br, ac * b.dim + bc) = a.at(ar, ac) * b.at(br, bc);
        }
      }
    }
  }
  return out;
}

namespace {

Dense two_by_two(Complex a, Complex b, Complex c, Complex d) { return {2, {a, b, c, d}}; }

const Dense kI = two_by_two(1, 0, 0, 1);
const Dense kX = two_by_two(0, 1, 1, 0);
const Dense kY = two_by_two(0, Complex(0, -1), Complex(0, 1), 0);
const Dense kZ = two_by_two(1, 0, 0, -1);
const Dense kP0 = two_by_two(1, 0, 0, 0);
const Dense kP1 = two_by_two(0, 0, 0, 1);

Dense scaled(const Dense& a, Complex s) {
  Dense out = a;
  for (auto& x : out.m) x *= s;
  return out;
}

/// exp(-i theta/2 P) for a Pauli P.
Dense pauli_rotation(const Dense& pauli, double theta) {
  return scaled(kI, std::cos(theta / 2)) + scaled(pauli, Complex(0, -std::sin(theta / 2)));
}

Dense factor(GateKind kind, std::optional<double> angle) {
  const double r = 1 / std::sqrt(2.0);
  switch (kind) {
    case GateKind::H: return scaled(kX + kZ, r);
    case GateKind::X: return kX;
    case GateKind::Y: return kY;
    case GateKind::Z: return kZ;
    case GateKind::S: return kP0 + scaled(kP1, Complex(0, 1));
    case GateKind::T: return kP0 + scaled(kP1, std::polar(1.0, std::numbers::pi / 4));
    case GateKind::RX: return pauli_rotation(kX, *angle);
    case GateKind::RY: return pauli_rotation(kY, *angle);
    case GateKind::RZ: return pauli_rotation(kZ, *angle);
    default: throw std::logic_error("not a single-qubit gate");
  }
}

/// Kronecker product with `placed[q]` on qubit q and identity elsewhere.
Dense embed(const std::map<unsigned, Dense>& placed, unsigned n) {
  Dense out = Dense::identity(1);
  for (unsigned q = n; q-- > 0;) {
    const auto it = placed.find(q);
    out = kron(out, it == placed.end() ? kI : it->second);
  }
  return out;
}

std::string read_sample(const char* name) {
  std::ifstream in(std::string(QFAAS_SOURCE_DIR) + "/functions/" + name);
  if (!in) throw std::runtime_error(std::string("missing sample ") + name);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

Dense gate_unitary(const GateOp& op, unsigned n) {
  const auto& t = op.targets;
  switch (op.kind) {
    case GateKind::CX: return embed({{t[0], kP0}}, n) + embed({{t[0], kP1}, {t[1], kX}}, n);
    case GateKind::CZ: return embed({{t[0], kP0}}, n) + embed({{t[0], kP1}, {t[1], kZ}}, n);
    case GateKind::SWAP: {
      Dense sum = embed({}, n) + embed({{t[0], kX}, {t[1], kX}}, n) + embed({{t[0], kY}, {t[1], kY}}, n) +
                  embed({{t[0], kZ}, {t[1], kZ}}, n);
      return scaled(sum, 0.5);
    }
    default: return embed({{t[0], factor(op.kind, op.angle)}}, n);
  }
}

std::vector<Complex> oracle_state(const circuit::Circuit& c) {
  const std::size_t dim = std::size_t{1} << c.width;
  Dense u = Dense::identity(dim);
  for (const auto& op : c.ops) u = gate_unitary(op, c.width) * u;
  std::vector<Complex> state(dim);
  for (std::size_t r = 0; r < dim; ++r) state[r] = u.at(r, 0);
  return state;
}

circuit::Circuit random_circuit_exact(std::mt19937_64& rng, unsigned width, std::size_t gates) {
  static constexpr GateKind kOneQubit[] = {GateKind::H,  GateKind::X,  GateKind::Y,  GateKind::Z, GateKind::S,
                                           GateKind::T,  GateKind::RX, GateKind::RY, GateKind::RZ};
  static constexpr GateKind kTwoQubit[] = {GateKind::CX, GateKind::CZ, GateKind::SWAP};
  std::uniform_real_distribution<double> angle(-2 * std::numbers::pi, 2 * std::numbers::pi);
  std::uniform_int_distribution<unsigned> qubit(0, width - 1);
  circuit::Circuit c;
  c.width = width;
  for (std::size_t i = 0; i < gates; ++i) {
    GateOp op;
    const bool two = width >= 2 && std::uniform_int_distribution<int>(0, 3)(rng) == 0;
    if (two) {
      op.kind = kTwoQubit[std::uniform_int_distribution<std::size_t>(0, 2)(rng)];
      const unsigned a = qubit(rng);
      unsigned b = qubit(rng);
      while (b == a) b = qubit(rng);
      op.targets = {a, b};
    } else {
      op.kind = kOneQubit[std::uniform_int_distribution<std::size_t>(0, 8)(rng)];
      op.targets = {qubit(rng)};
      if (circuit::is_rotation(op.kind)) op.angle = angle(rng);
    }
    c.ops.push_back(std::move(op));
  }
  c.measure_all();
  return c;
}

circuit::Circuit random_circuit(std::mt19937_64& rng, unsigned max_width, std::size_t max_gates) {
  const unsigned width = std::uniform_int_distribution<unsigned>(1, max_width)(rng);
  const std::size_t gates = std::uniform_int_distribution<std::size_t>(0, max_gates)(rng);
  return random_circuit_exact(rng, width, gates);
}

TempDir::TempDir() {
  std::string pattern = (std::filesystem::temp_directory_path() / "qfaas-test-XXXXXX").string();
  if (!mkdtemp(pattern.data())) throw std::runtime_error("mkdtemp failed");
  path_ = pattern;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

gateway::GatewayConfig test_config(const std::filesystem::path& data_dir) {
  gateway::GatewayConfig config;
  config.host = "127.0.0.1";
  config.port = 0;
  config.data_dir = data_dir;
  config.http_workers = 8;
  config.sim_workers = 2;
  config.password_cost = gateway::PasswordCost::Minimal;
  config.admin_password = "admin-pw";
  config.users = {{"dev", "dev-pw", Role::Developer},
                  {"dev2", "dev2-pw", Role::Developer},
                  {"alice", "alice-pw", Role::EndUser},
                  {"bob", "bob-pw", Role::EndUser}};
  return config;
}

TestServer::TestServer(const std::filesystem::path& data_dir) : TestServer(data_dir, test_config(data_dir)) {}

TestServer::TestServer(const std::filesystem::path& data_dir, gateway::GatewayConfig config) {
  config.data_dir = data_dir;
  gateway_ = std::make_unique<gateway::Gateway>(config);
  http_ = std::make_unique<gateway::HttpServer>(*gateway_);
  port_ = http_->bind("127.0.0.1", 0);
  http_->start();
}

TestServer::~TestServer() {
  http_.reset();
  gateway_.reset();
}

std::string TestServer::token(const std::string& user) {
  if (const auto it = tokens_.find(user); it != tokens_.end()) return it->second;
  const auto reply = call("POST", "/api/auth/login", "", {{"username", user}, {"password", user + "-pw"}});
  if (reply.status != 200) throw std::runtime_error("login failed for " + user + ": " + reply.raw);
  return tokens_[user] = reply.body.at("access_token").get<std::string>();
}

HttpReply TestServer::call(const std::string& method, const std::string& path, const std::string& token,
                           const json& body) {
  httplib::Client client("127.0.0.1", port_);
  client.set_read_timeout(std::chrono::seconds(120));
  httplib::Headers headers;
  if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);
  const std::string payload = body.is_null() ? "" : body.dump();
  httplib::Result res;
  if (method == "GET") {
    res = client.Get(path, headers);
  } else if (method == "POST") {
    res = client.Post(path, headers, payload, "application/json");
  } else if (method == "PUT") {
    res = client.Put(path, headers, payload, "application/json");
  } else if (method == "DELETE") {
    res = client.Delete(path, headers);
  } else {
    throw std::invalid_argument("unsupported method " + method);
  }
  if (!res) throw std::runtime_error("transport failure: " + httplib::to_string(res.error()));
  HttpReply reply;
  reply.status = res->status;
  reply.raw = res->body;
  if (!res->body.empty()) reply.body = json::parse(res->body, nullptr, false);
  return reply;
}

json TestServer::deploy(const std::string& user, const std::string& name, const std::string& template_tag,
                        const std::string& source, bool is_public) {
  const auto reply = call("POST", "/api/functions", token(user),
                          {{"name", name},
                           {"template", template_tag},
                           {"fnCode", {{"requirements", ""}, {"handlerPy", base64_encode(source)}, {"handlerQs", ""}}},
                           {"public", is_public}});
  if (reply.status != 202) throw std::runtime_error("create failed: " + reply.raw);
  const auto id = reply.body.at("identifier").get<std::string>();
  gateway_->registry().await_deployment(id);
  return call("GET", "/api/functions/" + id, token(user)).body;
}

std::string qrng_source() { return read_sample("qrng.qf"); }
std::string bell_source() { return read_sample("bell.qf"); }
std::string ghz_source() { return read_sample("ghz.qf"); }

}  // namespace qfaas::testing
