#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace topiclab::broker {

struct Record {
  std::uint64_t offset = 0;
  std::string payload;

  friend bool operator==(const Record&, const Record&) = default;
};

struct TopicInfo {
  std::string name;
  std::uint64_t next_offset = 0;

  friend bool operator==(const TopicInfo&, const TopicInfo&) = default;
};

struct BrokerConfig {
  std::string listen_address = "127.0.0.1:9092";
  std::size_t max_payload_bytes = 65536;
  /// When set, every topic is mirrored to `<data_dir>/<topic>.log` and
  /// replayed on construction.
  std::optional<std::filesystem::path> data_dir;
};

/// Topic names travel unquoted in the line protocol and double as file
/// names, so they are restricted to [A-Za-z0-9._-], 1..249 chars.
bool is_valid_topic_name(std::string_view name);

/// Append-only, single-partition log. Offsets are dense from 0. Appends take
/// an exclusive lock; reads take a shared lock and always see a prefix.
class MessageLog {
 public:
  explicit MessageLog(std::string topic, std::optional<std::filesystem::path> file = std::nullopt);

  MessageLog(const MessageLog&) = delete;
  MessageLog& operator=(const MessageLog&) = delete;

  std::uint64_t append(std::string payload);
  std::vector<Record> read(std::uint64_t from_offset, std::size_t max_count) const;
  std::uint64_t next_offset() const;
  const std::string& topic() const { return topic_; }

 private:
  void replay(const std::filesystem::path& file);

  std::string topic_;
  mutable std::shared_mutex mu_;
  std::vector<std::string> records_;
  std::ofstream file_;
};

class Broker {
 public:
  explicit Broker(BrokerConfig config = {});

  /// Appends to `topic`, creating it on first use. Throws
  /// Error(PayloadTooLarge) or Error(Malformed) for a bad topic name.
  std::uint64_t publish(std::string_view topic, std::string payload);

  /// Throws Error(UnknownTopic) if nothing was ever published to `topic`.
  /// Reading past the end returns an empty list.
  std::vector<Record> fetch(std::string_view topic, std::uint64_t from_offset,
                            std::size_t max_count) const;

  /// Sorted by topic name.
  std::vector<TopicInfo> list_topics() const;

  const BrokerConfig& config() const { return config_; }

 private:
  MessageLog& log_for_publish(std::string_view topic);

  BrokerConfig config_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::unique_ptr<MessageLog>, std::less<>> logs_;
};

}  // namespace topiclab::broker
