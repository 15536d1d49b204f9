#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <vector>

#include "fw/state.hpp"

namespace fw {

// Append-only per-workshop event log, optionally backed by a newline-delimited
// file. A single writer is enforced by sequence fencing: an append must carry
// exactly last_seq + 1. Readers may wait for new events.
class EventLog {
 public:
  EventLog() = default;  // in-memory
  // Opens (or creates) the file and loads existing records. Throws
  // CorruptLogError for malformed content.
  explicit EventLog(std::filesystem::path file);
  ~EventLog();

  EventLog(const EventLog&) = delete;
  EventLog& operator=(const EventLog&) = delete;

  // Durable (fsync'd) before returning. Throws SequenceConflict.
  std::uint64_t append(const Event& event);

  std::uint64_t last_seq() const;
  std::size_t size() const;
  std::vector<Event> events() const;
  std::vector<Event> since(std::uint64_t from_seq) const;  // seq > from_seq

  // Blocks until an event with seq > from_seq exists or the timeout passes.
  // Returns the (possibly empty) batch.
  std::vector<Event> wait_since(std::uint64_t from_seq, std::chrono::milliseconds timeout) const;

  const std::optional<std::filesystem::path>& file() const { return file_; }

 private:
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::vector<Event> events_;
  std::optional<std::filesystem::path> file_;
  int fd_ = -1;
};

std::vector<Event> read_log_file(const std::filesystem::path& file);

}  // namespace fw
