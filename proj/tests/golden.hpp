// SPDX-License-Identifier: Apache-2.0

// Golden CLI cases. Each case <name> in the golden directory has
//   <name>.args   arguments, whitespace separated; {in} is the input path
//   <name>.in     input file
//   <name>.out    expected stdout
//   <name>.err    expected stderr (optional, empty if missing)
//   <name>.code   expected exit code

#pragma once

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "parlog/cli.hpp"

namespace parlog::golden {

struct Case {
  std::string name;
  std::vector<std::string> args;
  std::string expected_out;
  std::string expected_err;
  int expected_code = 0;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<Case> load_cases(const std::string& dir) {
  std::vector<Case> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".args") continue;
    auto base = entry.path();
    base.replace_extension();
    Case c;
    c.name = base.filename().string();
    std::istringstream words(slurp(entry.path()));
    for (std::string w; words >> w;) c.args.push_back(w == "{in}" ? base.string() + ".in" : w);
    c.expected_out = slurp(base.string() + ".out");
    if (std::filesystem::exists(base.string() + ".err")) c.expected_err = slurp(base.string() + ".err");
    c.expected_code = std::stoi(slurp(base.string() + ".code"));
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const Case& a, const Case& b) { return a.name < b.name; });
  return out;
}

inline CommandResult run_in_process(const Case& c) { return run_command(c.args); }

/// Runs the installed binary; stderr is discarded.
inline CommandResult run_binary(const std::string& exe, const Case& c) {
  std::string cmd = "'" + exe + "'";
  for (const auto& a : c.args) cmd += " '" + a + "'";
  cmd += " 2>/dev/null";
  CommandResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    res.exit_code = -1;
    return res;
  }
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.out.append(buf.data(), n);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

}  // namespace parlog::golden
