#pragma once

#include <array>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

// Drives the installed CLI binary (path in RELGROWTH_BIN) through a shell.
namespace testsupport {

struct CliResult {
  int exit_code = -1;
  std::string output;
};

inline std::string cli_binary() {
  const char* path = std::getenv("RELGROWTH_BIN");
  if (path == nullptr) {
    throw std::runtime_error("RELGROWTH_BIN is not set");
  }
  return path;
}

// Runs `command` under sh -c and captures stdout (plus stderr when
// merge_stderr). Use cli_binary() to splice in the binary path.
inline CliResult run_shell(const std::string& command,
                           bool merge_stderr = false) {
  const std::string full =
      command + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(full.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("popen failed");
  CliResult result;
  std::array<char, 4096> buffer{};
  std::size_t got = 0;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.output.append(buffer.data(), got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

}  // namespace testsupport
