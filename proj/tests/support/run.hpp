#pragma once

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

namespace run {

struct Result {
  int exit_code = -1;
  std::string out;
};

// Runs a shell command, capturing stdout.
inline Result command(const std::string& cmd) {
  Result r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace run
