// Copyright 2026 The slicesim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SLICESIM_TCP_LINK_HPP
#define SLICESIM_TCP_LINK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "slicesim/scenario.hpp"

namespace slicesim {

/// Blocking loopback TCP client used by the gNB process in --tcp mode.
class TcpClient {
 public:
  TcpClient() = default;
  ~TcpClient();
  TcpClient(const TcpClient&) = delete;
  TcpClient& operator=(const TcpClient&) = delete;

  /// Connects with retries until the deadline; throws
  /// SimError("HandshakeTimeout") on failure.
  void connect(std::uint16_t port, double timeout_s);
  void send(const std::vector<std::uint8_t>& bytes);

  /// Reads whatever is available within timeout_ms (0 = just poll).
  /// Empty result means no data. Sets eof() at stream end.
  std::vector<std::uint8_t> poll_recv(int timeout_ms);

  void shutdown_write();
  void close();
  bool eof() const { return eof_; }

 private:
  int fd_ = -1;
  bool eof_ = false;
};

/// RIC process entry in --tcp mode: listens on the port, terminates the
/// E2 session, runs the xApps on telemetry time, and writes
/// control_log.csv under out_dir. Returns the process exit code.
int ric_serve_tcp(const Scenario& scenario, std::uint16_t port,
                  const std::string& out_dir);

void write_control_log_csv(const std::string& path,
                           const std::vector<ControlLogEntry>& log);

}  // namespace slicesim

#endif  // SLICESIM_TCP_LINK_HPP
