#pragma once

// POSIX TCP plumbing for the tunnel: connect/listen helpers and a
// WireStream over a socket with a read timeout.

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <string>

#include "qpp/bytes.hpp"
#include "qpp/tunnel.hpp"

namespace qpp {

class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket() { close(); }
  Socket(Socket&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
  Socket& operator=(Socket&& other) noexcept {
    if (this != &other) {
      close();
      fd_ = other.fd_;
      other.fd_ = -1;
    }
    return *this;
  }
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  void close() {
    if (fd_ >= 0) {
      ::close(fd_);
      fd_ = -1;
    }
  }

 private:
  int fd_ = -1;
};

struct HostPort {
  std::string host;
  uint16_t port = 0;
};

inline HostPort parse_host_port(const std::string& spec) {
  auto colon = spec.rfind(':');
  if (colon == std::string::npos) throw ParamError("expected host:port");
  HostPort hp;
  hp.host = spec.substr(0, colon);
  if (hp.host.empty()) hp.host = "0.0.0.0";
  int port = std::stoi(spec.substr(colon + 1));
  // port 0 is allowed for listeners: the OS picks an ephemeral port
  if (port < 0 || port > 65535) throw ParamError("port out of range");
  hp.port = static_cast<uint16_t>(port);
  return hp;
}

inline Socket tcp_connect(const HostPort& target) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  std::string port = std::to_string(target.port);
  if (getaddrinfo(target.host.c_str(), port.c_str(), &hints, &res) != 0)
    throw IoError("cannot resolve " + target.host);
  Socket sock;
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
      sock = Socket(fd);
      break;
    }
    ::close(fd);
  }
  freeaddrinfo(res);
  if (!sock.valid()) throw IoError("connect to " + target.host + ":" + port + " failed");
  return sock;
}

inline Socket tcp_listen(const HostPort& bind_addr, int backlog = 16) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw IoError("socket() failed");
  Socket sock(fd);
  int one = 1;
  setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(bind_addr.port);
  if (inet_pton(AF_INET, bind_addr.host.c_str(), &addr.sin_addr) != 1)
    throw ParamError("invalid bind address " + bind_addr.host);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
    throw IoError("bind failed: " + std::string(std::strerror(errno)));
  if (::listen(fd, backlog) != 0) throw IoError("listen failed");
  return sock;
}

inline uint16_t local_port(const Socket& sock) {
  sockaddr_in addr{};
  socklen_t len = sizeof(addr);
  if (getsockname(sock.fd(), reinterpret_cast<sockaddr*>(&addr), &len) != 0)
    throw IoError("getsockname failed");
  return ntohs(addr.sin_port);
}

inline Socket tcp_accept(const Socket& listener) {
  int fd = ::accept(listener.fd(), nullptr, nullptr);
  if (fd < 0) throw IoError("accept failed: " + std::string(std::strerror(errno)));
  return Socket(fd);
}

class TcpWireStream : public WireStream {
 public:
  explicit TcpWireStream(Socket sock, unsigned read_timeout_seconds = 30)
      : sock_(std::move(sock)) {
    timeval tv{};
    tv.tv_sec = read_timeout_seconds;
    setsockopt(sock_.fd(), SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
  }

  size_t read_some(uint8_t* buf, size_t len) override {
    for (;;) {
      ssize_t n = ::recv(sock_.fd(), buf, len, 0);
      if (n > 0) return static_cast<size_t>(n);
      if (n == 0) return 0;
      if (errno == EINTR) continue;
      if (errno == EAGAIN || errno == EWOULDBLOCK) throw IoError("read timeout");
      throw IoError("recv failed: " + std::string(std::strerror(errno)));
    }
  }

  void write_all(const uint8_t* buf, size_t len) override {
    while (len > 0) {
      ssize_t n = ::send(sock_.fd(), buf, len, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw IoError("send failed: " + std::string(std::strerror(errno)));
      }
      buf += n;
      len -= static_cast<size_t>(n);
    }
  }

 private:
  Socket sock_;
};

}  // namespace qpp
