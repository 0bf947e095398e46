// Verification suite driver: one pass/fail line per criterion, nonzero exit
// on any failure.

#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "abp/checks.hpp"

int main(int argc, char** argv) {
  abp::CheckOptions opts;
  opts.progress = &std::cout;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      std::string list = argv[++i];
      std::size_t pos = 0;
      while (pos < list.size()) {
        std::size_t next = list.find(',', pos);
        opts.only.push_back(std::stoi(list.substr(pos, next - pos)));
        if (next == std::string::npos) break;
        pos = next + 1;
      }
    }
  }
  auto results = abp::run_acceptance(opts);
  int failed = 0;
  for (const auto& r : results)
    if (!r.passed) ++failed;
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
