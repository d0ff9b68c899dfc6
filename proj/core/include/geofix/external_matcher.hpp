#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <sys/types.h>

#include "geofix/matching.hpp"

namespace geofix {

struct ExternalMatcherConfig {
  std::string command;        // run through /bin/sh -c
  int timeout_ms = 120000;    // per request
};

/// Talks to a matcher subprocess (for instance a learned matcher wrapper)
/// over the line-delimited JSON protocol in wire_protocol.hpp. The process
/// is started on first use and restarted on the next call after it dies.
/// Single-flight: calls are serialized.
class ExternalProcessMatcher final : public Matcher {
 public:
  explicit ExternalProcessMatcher(ExternalMatcherConfig cfg);
  ~ExternalProcessMatcher() override;

  ExternalProcessMatcher(const ExternalProcessMatcher&) = delete;
  ExternalProcessMatcher& operator=(const ExternalProcessMatcher&) = delete;

  std::string_view name() const override { return "external"; }
  bool deterministic() const override { return false; }
  bool single_flight() const override { return true; }

 protected:
  MatchSet DoMatch(const FrameInput& frame, const BasemapWindow& window,
                   double min_confidence) override;

 private:
  void Start();
  void Stop();
  bool running() const { return pid_ > 0; }
  void WriteLine(const std::string& line);
  std::string ReadLine();

  ExternalMatcherConfig cfg_;
  std::mutex mutex_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string read_buffer_;
  std::int64_t next_id_ = 0;
};

}  // namespace geofix
