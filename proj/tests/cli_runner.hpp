#pragma once

#include <sys/wait.h>

#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace xdmev::testing {

struct CliRun {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the xdmev binary through the shell. `env` is prepended as-is (e.g. "XDMEV_THREADS=1").
inline CliRun run_cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  std::string err_path = (std::filesystem::temp_directory_path() /
                         ("xdmev_err_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".txt"))
                            .string();
  std::string cmd = env + " " + XDMEV_CLI + " " + args + " 2>" + err_path;
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(err_path);
  r.err.assign(std::istreambuf_iterator<char>(in), {});
  std::remove(err_path.c_str());
  return r;
}

}  // namespace xdmev::testing
