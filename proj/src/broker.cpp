#include "topiclab/broker.hpp"

#include <algorithm>
#include <array>
#include <system_error>

#include "topiclab/error.hpp"

namespace topiclab::broker {

namespace {

constexpr std::size_t kHeaderBytes = 4;

std::array<char, kHeaderBytes> encode_length(std::uint32_t n) {
  return {static_cast<char>(n & 0xFF), static_cast<char>((n >> 8) & 0xFF),
          static_cast<char>((n >> 16) & 0xFF), static_cast<char>((n >> 24) & 0xFF)};
}

std::uint32_t decode_length(const std::array<char, kHeaderBytes>& b) {
  std::uint32_t n = 0;
  for (std::size_t i = 0; i < kHeaderBytes; ++i) {
    n |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
  }
  return n;
}

}  // namespace

bool is_valid_topic_name(std::string_view name) {
  if (name.empty() || name.size() > 249) return false;
  if (name == "." || name == "..") return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '.' || c == '_' || c == '-';
  });
}

MessageLog::MessageLog(std::string topic, std::optional<std::filesystem::path> file)
    : topic_(std::move(topic)) {
  if (!file) return;
  if (std::filesystem::exists(*file)) replay(*file);
  file_.open(*file, std::ios::binary | std::ios::app);
  if (!file_) throw Error(ErrorCode::Io, "cannot open log file " + file->string());
}

void MessageLog::replay(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read log file " + file.string());
  std::uintmax_t valid_bytes = 0;
  while (true) {
    std::array<char, kHeaderBytes> header{};
    if (!in.read(header.data(), kHeaderBytes)) break;
    const auto len = decode_length(header);
    std::string payload(len, '\0');
    if (len > 0 && !in.read(payload.data(), len)) break;
    records_.push_back(std::move(payload));
    valid_bytes += kHeaderBytes + len;
  }
  in.close();
  // Drop a torn trailing record left by an interrupted write.
  if (std::filesystem::file_size(file) != valid_bytes) {
    std::filesystem::resize_file(file, valid_bytes);
  }
}

std::uint64_t MessageLog::append(std::string payload) {
  std::unique_lock lock(mu_);
  if (file_.is_open()) {
    const auto header = encode_length(static_cast<std::uint32_t>(payload.size()));
    file_.write(header.data(), kHeaderBytes);
    file_.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    file_.flush();
    if (!file_) throw Error(ErrorCode::Io, "append to log of topic " + topic_ + " failed");
  }
  records_.push_back(std::move(payload));
  return records_.size() - 1;
}

std::vector<Record> MessageLog::read(std::uint64_t from_offset, std::size_t max_count) const {
  std::shared_lock lock(mu_);
  std::vector<Record> out;
  if (from_offset >= records_.size()) return out;
  const auto end = std::min<std::uint64_t>(records_.size(), from_offset + max_count);
  out.reserve(static_cast<std::size_t>(end - from_offset));
  for (auto off = from_offset; off < end; ++off) {
    out.push_back({off, records_[static_cast<std::size_t>(off)]});
  }
  return out;
}

std::uint64_t MessageLog::next_offset() const {
  std::shared_lock lock(mu_);
  return records_.size();
}

Broker::Broker(BrokerConfig config) : config_(std::move(config)) {
  if (config_.max_payload_bytes == 0) {
    throw Error(ErrorCode::InvalidArgument, "max_payload_bytes must be positive");
  }
  if (!config_.data_dir) return;
  std::filesystem::create_directories(*config_.data_dir);
  for (const auto& entry : std::filesystem::directory_iterator(*config_.data_dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".log") continue;
    auto name = entry.path().stem().string();
    if (!is_valid_topic_name(name)) continue;
    logs_.emplace(name, std::make_unique<MessageLog>(name, entry.path()));
  }
}

MessageLog& Broker::log_for_publish(std::string_view topic) {
  {
    std::shared_lock lock(mu_);
    if (auto it = logs_.find(topic); it != logs_.end()) return *it->second;
  }
  std::unique_lock lock(mu_);
  if (auto it = logs_.find(topic); it != logs_.end()) return *it->second;
  std::optional<std::filesystem::path> file;
  if (config_.data_dir) file = *config_.data_dir / (std::string(topic) + ".log");
  auto [it, inserted] =
      logs_.emplace(std::string(topic), std::make_unique<MessageLog>(std::string(topic), file));
  return *it->second;
}

std::uint64_t Broker::publish(std::string_view topic, std::string payload) {
  if (!is_valid_topic_name(topic)) {
    throw Error(ErrorCode::Malformed, "invalid topic name '" + std::string(topic) + "'");
  }
  if (payload.size() > config_.max_payload_bytes) {
    throw Error(ErrorCode::PayloadTooLarge, "payload of " + std::to_string(payload.size()) +
                                                " bytes exceeds limit of " +
                                                std::to_string(config_.max_payload_bytes));
  }
  return log_for_publish(topic).append(std::move(payload));
}

std::vector<Record> Broker::fetch(std::string_view topic, std::uint64_t from_offset,
                                  std::size_t max_count) const {
  const MessageLog* log = nullptr;
  {
    std::shared_lock lock(mu_);
    auto it = logs_.find(topic);
    if (it == logs_.end()) {
      throw Error(ErrorCode::UnknownTopic, "unknown topic '" + std::string(topic) + "'");
    }
    log = it->second.get();
  }
  // Logs are never removed, so the pointer stays valid after unlocking.
  return log->read(from_offset, max_count);
}

std::vector<TopicInfo> Broker::list_topics() const {
  std::shared_lock lock(mu_);
  std::vector<TopicInfo> out;
  out.reserve(logs_.size());
  for (const auto& [name, log] : logs_) out.push_back({name, log->next_offset()});
  return out;
}

}  // namespace topiclab::broker
