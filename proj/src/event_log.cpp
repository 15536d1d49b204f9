#include "fw/event_log.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "fw/error.hpp"

namespace fw {

std::vector<Event> read_log_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot read " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_log(buf.str());
}

EventLog::EventLog(std::filesystem::path file) : file_(std::move(file)) {
  if (std::filesystem::exists(*file_)) {
    events_ = read_log_file(*file_);
    for (std::size_t i = 0; i < events_.size(); ++i) {
      if (events_[i].seq != i + 1) {
        throw CorruptLogError(events_[i].seq, "seq gap in " + file_->string() + ": expected " +
                                                  std::to_string(i + 1));
      }
    }
  }
  fd_ = ::open(file_->c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) fail(ErrorCode::Io, "cannot open " + file_->string() + ": " + std::strerror(errno));
}

EventLog::~EventLog() {
  if (fd_ >= 0) ::close(fd_);
}

std::uint64_t EventLog::append(const Event& event) {
  {
    std::lock_guard lock(mu_);
    const std::uint64_t expected = events_.empty() ? 1 : events_.back().seq + 1;
    if (event.seq != expected) {
      fail(ErrorCode::SequenceConflict, "append with seq " + std::to_string(event.seq) +
                                            ", log expects " + std::to_string(expected));
    }
    if (fd_ >= 0) {
      std::string line = event_to_line(event);
      line += '\n';
      const char* data = line.data();
      std::size_t left = line.size();
      while (left > 0) {
        ssize_t n = ::write(fd_, data, left);
        if (n < 0) {
          if (errno == EINTR) continue;
          fail(ErrorCode::Io, std::string("event log write failed: ") + std::strerror(errno));
        }
        data += n;
        left -= static_cast<std::size_t>(n);
      }
      if (::fdatasync(fd_) != 0) {
        fail(ErrorCode::Io, std::string("event log sync failed: ") + std::strerror(errno));
      }
    }
    events_.push_back(event);
  }
  cv_.notify_all();
  return event.seq;
}

std::uint64_t EventLog::last_seq() const {
  std::lock_guard lock(mu_);
  return events_.empty() ? 0 : events_.back().seq;
}

std::size_t EventLog::size() const {
  std::lock_guard lock(mu_);
  return events_.size();
}

std::vector<Event> EventLog::events() const {
  std::lock_guard lock(mu_);
  return events_;
}

std::vector<Event> EventLog::since(std::uint64_t from_seq) const {
  std::lock_guard lock(mu_);
  if (from_seq >= events_.size()) return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(from_seq), events_.end()};
}

std::vector<Event> EventLog::wait_since(std::uint64_t from_seq,
                                        std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return events_.size() > from_seq; });
  if (from_seq >= events_.size()) return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(from_seq), events_.end()};
}

}  // namespace fw
