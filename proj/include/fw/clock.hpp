#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <string>

#include "fw/model.hpp"
#include "fw/rng.hpp"

namespace fw {

class Clock {
 public:
  virtual ~Clock() = default;
  // UTC milliseconds since the epoch.
  virtual TimestampMs now_ms() = 0;
};

class SystemClock final : public Clock {
 public:
  TimestampMs now_ms() override {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
  }
};

// Test/simulation clock. Each read advances by `tick_ms` (0 = frozen).
class ManualClock final : public Clock {
 public:
  explicit ManualClock(TimestampMs start = 1'700'000'000'000, TimestampMs tick_ms = 0)
      : now_(start), tick_(tick_ms) {}

  TimestampMs now_ms() override { return now_.fetch_add(tick_) ; }
  void advance(TimestampMs ms) { now_ += ms; }
  void set(TimestampMs t) { now_ = t; }

 private:
  std::atomic<TimestampMs> now_;
  TimestampMs tick_;
};

// Produces bearer tokens for new participants.
using TokenSource = std::function<std::string()>;

// 128-bit tokens from std::random_device.
TokenSource random_tokens();
// Reproducible tokens for simulations and tests.
TokenSource seeded_tokens(std::uint64_t seed);

}  // namespace fw
