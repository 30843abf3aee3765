#include "topiclab/broker_net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

#include "topiclab/error.hpp"
#include "topiclab/util.hpp"

namespace topiclab::broker {

namespace {

template <typename T>
bool parse_uint(std::string_view text, T& out) {
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::string err_line(ErrorCode code) { return "ERR " + std::string(to_string(code)) + "\n"; }

void send_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const auto n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::Network, std::string("send failed: ") + std::strerror(errno));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

// Reads into `buffer` until it holds a newline. Returns false on EOF.
bool fill_until_newline(int fd, std::string& buffer, std::size_t& scanned, std::size_t cap,
                        bool& overflow) {
  char chunk[16384];
  while (buffer.find('\n', scanned) == std::string::npos) {
    scanned = buffer.size();
    if (buffer.size() > cap) {
      overflow = true;
      buffer.clear();
      scanned = 0;
    }
    const auto n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n == 0) return false;
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    buffer.append(chunk, static_cast<std::size_t>(n));
  }
  return true;
}

}  // namespace

Endpoint parse_endpoint(std::string_view address) {
  const auto colon = address.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw Error(ErrorCode::InvalidArgument, "expected host:port, got '" + std::string(address) + "'");
  }
  Endpoint ep;
  ep.host = std::string(address.substr(0, colon));
  if (!parse_uint(address.substr(colon + 1), ep.port)) {
    throw Error(ErrorCode::InvalidArgument, "bad port in '" + std::string(address) + "'");
  }
  return ep;
}

std::size_t max_request_line(std::size_t max_payload_bytes) {
  return 4 * ((max_payload_bytes + 2) / 3) + 512;
}

std::string handle_request(Broker& broker, std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto parts = util::split(line, ' ');
  const auto& cmd = parts[0];
  try {
    if (cmd == "PUB" && parts.size() == 3) {
      auto payload = util::base64_decode(parts[2]);
      const auto offset = broker.publish(parts[1], std::move(payload));
      return "OK " + std::to_string(offset) + "\n";
    }
    if (cmd == "FETCH" && parts.size() == 4) {
      std::uint64_t from = 0;
      std::size_t max_count = 0;
      if (!parse_uint(parts[2], from) || !parse_uint(parts[3], max_count) || max_count == 0) {
        return err_line(ErrorCode::Malformed);
      }
      std::string out;
      for (const auto& rec : broker.fetch(parts[1], from, max_count)) {
        out += "MSG " + std::to_string(rec.offset) + " " + util::base64_encode(rec.payload) + "\n";
      }
      out += "END\n";
      return out;
    }
    if (cmd == "TOPICS" && parts.size() == 1) {
      std::string out;
      for (const auto& t : broker.list_topics()) {
        out += "TOPIC " + t.name + " " + std::to_string(t.next_offset) + "\n";
      }
      out += "END\n";
      return out;
    }
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::PayloadTooLarge:
      case ErrorCode::UnknownTopic:
        return err_line(e.code());
      default:
        return err_line(ErrorCode::Malformed);
    }
  }
  return err_line(ErrorCode::Malformed);
}

// ---------------------------------------------------------------------------
// Server

BrokerServer::BrokerServer(Broker& broker, const Endpoint& endpoint) : broker_(broker) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const auto port_str = std::to_string(endpoint.port);
  const char* host = endpoint.host.empty() ? nullptr : endpoint.host.c_str();
  if (int rc = ::getaddrinfo(host, port_str.c_str(), &hints, &res); rc != 0) {
    throw Error(ErrorCode::Network, "cannot resolve " + endpoint.host + ": " + gai_strerror(rc));
  }
  listen_fd_ = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
  if (listen_fd_ < 0) {
    ::freeaddrinfo(res);
    throw Error(ErrorCode::Network, "socket() failed");
  }
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(listen_fd_, res->ai_addr, res->ai_addrlen) != 0 || ::listen(listen_fd_, 128) != 0) {
    const std::string why = std::strerror(errno);
    ::freeaddrinfo(res);
    ::close(listen_fd_);
    throw Error(ErrorCode::Network, "cannot listen on " + endpoint.host + ":" + port_str + ": " + why);
  }
  ::freeaddrinfo(res);
  sockaddr_in bound{};
  socklen_t len = sizeof bound;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
}

BrokerServer::~BrokerServer() { stop(); }

void BrokerServer::start() {
  if (accept_thread_.joinable()) return;
  accept_thread_ = std::thread([this] { accept_loop(); });
}

void BrokerServer::stop() {
  if (stopping_.exchange(true)) return;
  if (accept_thread_.joinable()) accept_thread_.join();
  if (listen_fd_ >= 0) ::close(listen_fd_);
  listen_fd_ = -1;
  std::lock_guard lock(conns_mu_);
  for (auto& c : conns_) ::shutdown(c.fd, SHUT_RDWR);
  for (auto& c : conns_) {
    if (c.thread.joinable()) c.thread.join();
    ::close(c.fd);
  }
  conns_.clear();
}

void BrokerServer::reap_finished() {
  std::lock_guard lock(conns_mu_);
  for (auto it = conns_.begin(); it != conns_.end();) {
    if (it->done.load()) {
      it->thread.join();
      ::close(it->fd);
      it = conns_.erase(it);
    } else {
      ++it;
    }
  }
}

void BrokerServer::accept_loop() {
  while (!stopping_.load()) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, 100);
    if (rc <= 0) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    reap_finished();
    std::lock_guard lock(conns_mu_);
    auto& conn = conns_.emplace_back();
    conn.fd = fd;
    conn.thread = std::thread([this, &conn] { serve(conn); });
  }
}

void BrokerServer::serve(Connection& conn) {
  const auto cap = max_request_line(broker_.config().max_payload_bytes);
  std::string buffer;
  std::size_t scanned = 0;
  try {
    while (!stopping_.load()) {
      bool overflow = false;
      if (!fill_until_newline(conn.fd, buffer, scanned, cap, overflow)) break;
      const auto nl = buffer.find('\n', scanned);
      std::string line = buffer.substr(0, nl);
      buffer.erase(0, nl + 1);
      scanned = 0;
      if (overflow || line.size() > cap) {
        send_all(conn.fd, err_line(ErrorCode::PayloadTooLarge));
        continue;
      }
      send_all(conn.fd, handle_request(broker_, line));
    }
  } catch (const Error&) {
    // Peer went away mid-response.
  }
  conn.done.store(true);
}

// ---------------------------------------------------------------------------
// Client

BrokerClient::BrokerClient(const Endpoint& endpoint) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const auto port_str = std::to_string(endpoint.port);
  if (int rc = ::getaddrinfo(endpoint.host.c_str(), port_str.c_str(), &hints, &res); rc != 0) {
    throw Error(ErrorCode::Network, "cannot resolve " + endpoint.host + ": " + gai_strerror(rc));
  }
  for (auto* ai = res; ai != nullptr; ai = ai->ai_next) {
    fd_ = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd_ < 0) continue;
    if (::connect(fd_, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd_);
    fd_ = -1;
  }
  ::freeaddrinfo(res);
  if (fd_ < 0) {
    throw Error(ErrorCode::Network, "cannot connect to broker at " + endpoint.host + ":" + port_str);
  }
  int one = 1;
  ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

BrokerClient::~BrokerClient() {
  if (fd_ >= 0) ::close(fd_);
}

BrokerClient::BrokerClient(BrokerClient&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)), buffer_(std::move(other.buffer_)) {}

BrokerClient& BrokerClient::operator=(BrokerClient&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = std::exchange(other.fd_, -1);
    buffer_ = std::move(other.buffer_);
  }
  return *this;
}

void BrokerClient::send_line(std::string_view line) {
  std::string msg(line);
  msg.push_back('\n');
  send_all(fd_, msg);
}

std::string BrokerClient::read_line() {
  std::size_t scanned = 0;
  bool overflow = false;
  if (!fill_until_newline(fd_, buffer_, scanned, std::string::npos / 2, overflow)) {
    throw Error(ErrorCode::Network, "broker closed the connection");
  }
  const auto nl = buffer_.find('\n');
  std::string line = buffer_.substr(0, nl);
  buffer_.erase(0, nl + 1);
  return line;
}

void BrokerClient::throw_server_error(std::string_view line) {
  const auto code = line.substr(std::min<std::size_t>(4, line.size()));
  if (code == "PAYLOAD_TOO_LARGE") throw Error(ErrorCode::PayloadTooLarge, "broker: payload too large");
  if (code == "UNKNOWN_TOPIC") throw Error(ErrorCode::UnknownTopic, "broker: unknown topic");
  if (code == "MALFORMED") throw Error(ErrorCode::Malformed, "broker: malformed request");
  throw Error(ErrorCode::Network, "unexpected broker response '" + std::string(line) + "'");
}

std::uint64_t BrokerClient::publish(std::string_view topic, std::string_view payload) {
  send_line("PUB " + std::string(topic) + " " + util::base64_encode(payload));
  const auto line = read_line();
  std::uint64_t offset = 0;
  if (line.rfind("OK ", 0) == 0 && parse_uint(std::string_view(line).substr(3), offset)) {
    return offset;
  }
  throw_server_error(line);
}

std::vector<Record> BrokerClient::fetch(std::string_view topic, std::uint64_t from_offset,
                                        std::size_t max_count) {
  send_line("FETCH " + std::string(topic) + " " + std::to_string(from_offset) + " " +
            std::to_string(max_count));
  std::vector<Record> out;
  while (true) {
    const auto line = read_line();
    if (line == "END") return out;
    if (line.rfind("ERR ", 0) == 0) throw_server_error(line);
    const auto parts = util::split(line, ' ');
    Record rec;
    if (parts.size() != 3 || parts[0] != "MSG" || !parse_uint(parts[1], rec.offset)) {
      throw Error(ErrorCode::Network, "unexpected broker response '" + line + "'");
    }
    rec.payload = util::base64_decode(parts[2]);
    out.push_back(std::move(rec));
  }
}

std::vector<Record> BrokerClient::fetch_all(std::string_view topic, std::uint64_t from_offset,
                                            std::size_t batch) {
  std::vector<Record> out;
  while (true) {
    auto chunk = fetch(topic, from_offset, batch);
    if (chunk.empty()) return out;
    from_offset = chunk.back().offset + 1;
    for (auto& r : chunk) out.push_back(std::move(r));
  }
}

std::vector<TopicInfo> BrokerClient::list_topics() {
  send_line("TOPICS");
  std::vector<TopicInfo> out;
  while (true) {
    const auto line = read_line();
    if (line == "END") return out;
    const auto parts = util::split(line, ' ');
    TopicInfo info;
    if (parts.size() != 3 || parts[0] != "TOPIC" || !parse_uint(parts[2], info.next_offset)) {
      throw Error(ErrorCode::Network, "unexpected broker response '" + line + "'");
    }
    info.name = parts[1];
    out.push_back(std::move(info));
  }
}

}  // namespace topiclab::broker
