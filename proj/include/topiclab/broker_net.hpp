#pragma once

// Line-delimited TCP front end for the broker.
//
//   PUB <topic> <base64-payload>            -> OK <offset> | ERR <code>
//   FETCH <topic> <from_offset> <max_count> -> MSG <offset> <base64>... END | ERR <code>
//   TOPICS                                  -> TOPIC <name> <next_offset>... END
//
// Error codes: PAYLOAD_TOO_LARGE, UNKNOWN_TOPIC, MALFORMED.

#include <atomic>
#include <cstdint>
#include <list>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "topiclab/broker.hpp"

namespace topiclab::broker {

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;
};

/// Parses `host:port`. Throws Error(InvalidArgument).
Endpoint parse_endpoint(std::string_view address);

/// Executes one request line against `broker` and returns the complete
/// response, each line terminated by '\n'. Never throws for protocol errors.
std::string handle_request(Broker& broker, std::string_view line);

/// Longest request line accepted for a given payload limit.
std::size_t max_request_line(std::size_t max_payload_bytes);

/// Thread-per-connection server. Binding happens in the constructor, so a
/// port of 0 picks an ephemeral port that port() reports.
class BrokerServer {
 public:
  BrokerServer(Broker& broker, const Endpoint& endpoint);
  ~BrokerServer();

  BrokerServer(const BrokerServer&) = delete;
  BrokerServer& operator=(const BrokerServer&) = delete;

  void start();
  /// Closes the listener and every open connection, then joins all threads.
  void stop();
  std::uint16_t port() const { return port_; }

 private:
  struct Connection {
    int fd = -1;
    std::thread thread;
    std::atomic<bool> done{false};
  };

  void accept_loop();
  void serve(Connection& conn);
  void reap_finished();

  Broker& broker_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread accept_thread_;
  std::mutex conns_mu_;
  std::list<Connection> conns_;
};

/// Blocking client for one connection. Not thread-safe; use one per thread.
/// Server-side errors are rethrown as Error with the matching code.
class BrokerClient {
 public:
  explicit BrokerClient(const Endpoint& endpoint);
  explicit BrokerClient(std::string_view address) : BrokerClient(parse_endpoint(address)) {}
  ~BrokerClient();

  BrokerClient(BrokerClient&& other) noexcept;
  BrokerClient& operator=(BrokerClient&& other) noexcept;
  BrokerClient(const BrokerClient&) = delete;
  BrokerClient& operator=(const BrokerClient&) = delete;

  std::uint64_t publish(std::string_view topic, std::string_view payload);
  std::vector<Record> fetch(std::string_view topic, std::uint64_t from_offset,
                            std::size_t max_count);
  /// Fetches in batches until the end of the log.
  std::vector<Record> fetch_all(std::string_view topic, std::uint64_t from_offset,
                                std::size_t batch = 1000);
  std::vector<TopicInfo> list_topics();

 private:
  void send_line(std::string_view line);
  std::string read_line();
  [[noreturn]] void throw_server_error(std::string_view line);

  int fd_ = -1;
  std::string buffer_;
};

}  // namespace topiclab::broker
