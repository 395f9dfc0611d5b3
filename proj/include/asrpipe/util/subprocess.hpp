// include/asrpipe/util/subprocess.hpp

// Copyright 2026 asrpipe authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ASRPIPE_UTIL_SUBPROCESS_HPP
#define ASRPIPE_UTIL_SUBPROCESS_HPP

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <csignal>
#include <cstdio>
#include <cstring>
#include <mutex>
#include <string>
#include <vector>

#include "asrpipe/error.hpp"

namespace asrpipe {

// Line-oriented child process: one request line in, one response line out.
// Single-owner; not safe for concurrent use from multiple threads.
class LineProcess {
 public:
  explicit LineProcess(const std::vector<std::string>& argv) {
    if (argv.empty()) throw ExternalSegmenterError("empty launch command");
    ignore_sigpipe_once();

    int to_child[2], from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0)
      throw ExternalSegmenterError("pipe() failed: " + std::string(std::strerror(errno)));

    pid_ = fork();
    if (pid_ < 0) throw ExternalSegmenterError("fork() failed");
    if (pid_ == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      std::vector<char*> args;
      for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
      args.push_back(nullptr);
      execvp(args[0], args.data());
      std::perror("execvp");
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    stdin_fd_ = to_child[1];
    reader_ = fdopen(from_child[0], "r");
    if (!reader_) throw ExternalSegmenterError("fdopen() failed");
  }

  LineProcess(const LineProcess&) = delete;
  LineProcess& operator=(const LineProcess&) = delete;

  ~LineProcess() {
    if (stdin_fd_ >= 0) close(stdin_fd_);
    if (reader_) fclose(reader_);
    if (pid_ > 0) {
      int status = 0;
      if (waitpid(pid_, &status, WNOHANG) == 0) {
        kill(pid_, SIGKILL);
        waitpid(pid_, &status, 0);
      }
    }
  }

  // Sends one line and blocks for the matching response line (without the
  // trailing newline). Throws ExternalSegmenterError on broken pipe or EOF.
  std::string request(const std::string& line) {
    std::string payload = line;
    payload.push_back('\n');
    std::size_t off = 0;
    while (off < payload.size()) {
      ssize_t n = write(stdin_fd_, payload.data() + off, payload.size() - off);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw ExternalSegmenterError("write to child failed: " +
                                     std::string(std::strerror(errno)) + exit_detail());
      }
      off += static_cast<std::size_t>(n);
    }
    std::string response;
    int ch;
    while ((ch = fgetc(reader_)) != EOF && ch != '\n') response.push_back(static_cast<char>(ch));
    if (ch == EOF && response.empty())
      throw ExternalSegmenterError("child closed its output before responding" + exit_detail());
    return response;
  }

  // Closes stdin and waits; returns the child's exit code.
  int finish() {
    if (stdin_fd_ >= 0) {
      close(stdin_fd_);
      stdin_fd_ = -1;
    }
    if (pid_ <= 0) return -1;
    int status = 0;
    waitpid(pid_, &status, 0);
    pid_ = -1;
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -1;
  }

 private:
  static void ignore_sigpipe_once() {
    static std::once_flag flag;
    std::call_once(flag, [] { std::signal(SIGPIPE, SIG_IGN); });
  }

  std::string exit_detail() {
    if (pid_ <= 0) return "";
    int status = 0;
    if (waitpid(pid_, &status, WNOHANG) == pid_) {
      pid_ = -1;
      if (WIFEXITED(status))
        return " (child exited with status " + std::to_string(WEXITSTATUS(status)) + ")";
      return " (child terminated abnormally)";
    }
    return "";
  }

  pid_t pid_ = -1;
  int stdin_fd_ = -1;
  FILE* reader_ = nullptr;
};

}  // namespace asrpipe

#endif  // ASRPIPE_UTIL_SUBPROCESS_HPP
