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

#include "slicesim/tcp_link.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <thread>

#include "slicesim/e2_session.hpp"
#include "slicesim/ric_xapps.hpp"

namespace slicesim {

namespace {

void send_all(int fd, const std::vector<std::uint8_t>& bytes) {
  std::size_t off = 0;
  while (off < bytes.size()) {
    ssize_t n = ::send(fd, bytes.data() + off, bytes.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw SimError("TransportClosed", std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

sockaddr_in loopback_addr(std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  return addr;
}

}  // namespace

TcpClient::~TcpClient() { close(); }

void TcpClient::connect(std::uint16_t port, double timeout_s) {
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration<double>(timeout_s);
  sockaddr_in addr = loopback_addr(port);
  for (;;) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw SimError("TransportClosed", std::strerror(errno));
    if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0) {
      int one = 1;
      ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
      return;
    }
    ::close(fd_);
    fd_ = -1;
    if (std::chrono::steady_clock::now() >= deadline)
      throw SimError("HandshakeTimeout",
                     "connect to 127.0.0.1:" + std::to_string(port));
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
}

void TcpClient::send(const std::vector<std::uint8_t>& bytes) {
  if (fd_ < 0) throw SimError("TransportClosed", "socket not connected");
  send_all(fd_, bytes);
}

std::vector<std::uint8_t> TcpClient::poll_recv(int timeout_ms) {
  if (fd_ < 0 || eof_) return {};
  pollfd pfd{fd_, POLLIN, 0};
  int rc = ::poll(&pfd, 1, timeout_ms);
  if (rc <= 0) return {};
  std::uint8_t buf[4096];
  ssize_t n = ::recv(fd_, buf, sizeof(buf), 0);
  if (n == 0) {
    eof_ = true;
    return {};
  }
  if (n < 0) {
    if (errno == EINTR || errno == EAGAIN) return {};
    throw SimError("TransportClosed", std::strerror(errno));
  }
  return std::vector<std::uint8_t>(buf, buf + n);
}

void TcpClient::shutdown_write() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_WR);
}

void TcpClient::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

void write_control_log_csv(const std::string& path,
                           const std::vector<ControlLogEntry>& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SimError("IoError", "cannot write " + path);
  out << "timestamp_ms,sst,sd,ded,min,max,outcome\n";
  for (const auto& e : log) {
    out << e.timestamp_ms << "," << unsigned{e.entry.snssai.sst} << ",";
    if (e.entry.snssai.sd) out << *e.entry.snssai.sd;
    out << "," << e.entry.policy.dedicated_pct << "," << e.entry.policy.min_pct
        << "," << e.entry.policy.max_pct << "," << e.outcome << "\n";
  }
}

int ric_serve_tcp(const Scenario& scenario, std::uint16_t port,
                  const std::string& out_dir) {
  int listener = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listener < 0) return 1;
  int one = 1;
  ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr = loopback_addr(port);
  if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0 ||
      ::listen(listener, 1) < 0) {
    ::close(listener);
    return 1;
  }
  int conn = ::accept(listener, nullptr, nullptr);
  ::close(listener);
  if (conn < 0) return 1;
  ::setsockopt(conn, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));

  int rc = 0;
  {
    E2Session session(E2Role::kRic, [conn](const std::vector<std::uint8_t>& b) {
      send_all(conn, b);
    });
    RicRuntime ric(&session, scenario.xapp, scenario.report_period_ms);
    std::vector<XappToggle> toggles;
    for (const auto& ev : scenario.timeline) {
      if (ev.action == TimedEvent::Action::kEnableXapp)
        toggles.push_back(
            {static_cast<std::uint64_t>(ev.t_s * 1000.0 + 0.5), true});
      if (ev.action == TimedEvent::Action::kDisableXapp)
        toggles.push_back(
            {static_cast<std::uint64_t>(ev.t_s * 1000.0 + 0.5), false});
    }
    ric.set_toggles(std::move(toggles));
    session.set_handler([&ric](const E2Message& m) { ric.on_message(m); });

    try {
      std::uint8_t buf[4096];
      for (;;) {
        ssize_t n = ::recv(conn, buf, sizeof(buf), 0);
        if (n == 0) break;
        if (n < 0) {
          if (errno == EINTR) continue;
          rc = 1;
          break;
        }
        session.feed(std::span<const std::uint8_t>(buf, buf + n));
      }
    } catch (const SimError&) {
      rc = 1;
    }

    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    write_control_log_csv((fs::path(out_dir) / "control_log.csv").string(),
                          ric.control_log());
  }
  ::close(conn);
  return rc;
}

}  // namespace slicesim
