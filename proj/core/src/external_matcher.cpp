#include "geofix/external_matcher.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <spdlog/spdlog.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "geofix/error.hpp"
#include "geofix/wire_protocol.hpp"

extern char** environ;

namespace geofix {
namespace {

void CloseFd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

}  // namespace

ExternalProcessMatcher::ExternalProcessMatcher(ExternalMatcherConfig cfg)
    : cfg_(std::move(cfg)) {
  if (cfg_.command.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "external matcher needs a command");
  }
  // A dead child must surface as an error from write(), not kill us.
  ::signal(SIGPIPE, SIG_IGN);
}

ExternalProcessMatcher::~ExternalProcessMatcher() { Stop(); }

void ExternalProcessMatcher::Start() {
  int in_pipe[2];   // parent -> child stdin
  int out_pipe[2];  // child stdout -> parent
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) {
    throw Error(ErrorCode::kBackendUnavailable, "pipe() failed");
  }
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw Error(ErrorCode::kBackendUnavailable, "pipe() failed");
  }
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);

  // Own process group, so Stop() also reaches whatever the shell started.
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);

  const char* argv[] = {"/bin/sh", "-c", cfg_.command.c_str(), nullptr};
  pid_t pid = -1;
  const int rc = posix_spawn(&pid, "/bin/sh", &actions, &attr,
                             const_cast<char* const*>(argv), environ);
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    throw Error(ErrorCode::kBackendUnavailable,
                std::string("cannot spawn matcher: ") + std::strerror(rc));
  }
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  read_buffer_.clear();
  spdlog::info("started external matcher (pid {}): {}", pid_, cfg_.command);
}

void ExternalProcessMatcher::Stop() {
  CloseFd(to_child_);
  CloseFd(from_child_);
  if (pid_ > 0) {
    ::kill(-pid_, SIGTERM);
    int status = 0;
    ::waitpid(pid_, &status, 0);
  }
  pid_ = -1;
  read_buffer_.clear();
}

void ExternalProcessMatcher::WriteLine(const std::string& line) {
  std::string data = line + '\n';
  std::size_t written = 0;
  while (written < data.size()) {
    const ssize_t n =
        ::write(to_child_, data.data() + written, data.size() - written);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      Stop();
      throw Error(ErrorCode::kBackendUnavailable,
                  "matcher process closed its input");
    }
    written += static_cast<std::size_t>(n);
  }
}

std::string ExternalProcessMatcher::ReadLine() {
  char chunk[65536];
  for (;;) {
    const auto newline = read_buffer_.find('\n');
    if (newline != std::string::npos) {
      std::string line = read_buffer_.substr(0, newline);
      read_buffer_.erase(0, newline + 1);
      return line;
    }
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, cfg_.timeout_ms);
    if (ready < 0 && errno == EINTR) continue;
    if (ready == 0) {
      Stop();
      throw Error(ErrorCode::kBackendUnavailable, "matcher response timed out");
    }
    const ssize_t n = ::read(from_child_, chunk, sizeof(chunk));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      Stop();
      throw Error(ErrorCode::kBackendUnavailable, "matcher process exited");
    }
    read_buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

MatchSet ExternalProcessMatcher::DoMatch(const FrameInput& frame,
                                         const BasemapWindow& window,
                                         double min_confidence) {
  if (frame.raster.empty() || window.raster == nullptr ||
      window.raster->empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "external backend needs frame and window rasters");
  }
  std::lock_guard lock(mutex_);
  if (!running()) Start();

  wire::Request request;
  request.id = next_id_++;
  request.frame_png = EncodePng(frame.raster);
  request.window_png = EncodePng(*window.raster);
  request.min_confidence = min_confidence;
  WriteLine(wire::EncodeRequest(request));

  wire::Response response;
  try {
    response = wire::DecodeResponse(ReadLine());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDocumentMalformed) throw;
    // The stream is out of sync; start over on the next request.
    Stop();
    throw Error(ErrorCode::kMatchFailed, e.what());
  }
  if (response.id != request.id) {
    Stop();
    throw Error(ErrorCode::kMatchFailed,
                "response id " + std::to_string(response.id) +
                    " does not match request " + std::to_string(request.id));
  }
  if (response.error) {
    throw Error(ErrorCode::kMatchFailed, "matcher error: " + *response.error);
  }
  return {std::move(response.matches), window.origin};
}

}  // namespace geofix
