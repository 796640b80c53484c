// Acceptance run: one status line per criterion, check details indented below.
// Optional arguments restrict the run to the given criterion ids.
#include "sigmak/verify.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>

using namespace sigmak;

int main(int argc, char** argv) {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  VerifyOptions opt;
  for (int i = 1; i < argc; ++i) opt.only.push_back(std::atoi(argv[i]));
  int failed = 0;
  for (int id = 1; id <= kCriterionCount; ++id) {
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), id) == opt.only.end()) continue;
    const CriterionResult r = run_criterion(id, opt);
    std::printf("%s criterion %d: %s (%.1f s)\n", status_name(r.status), r.id, r.title.c_str(), r.seconds);
    for (const Check& c : r.checks)
      std::printf("    %s %s: %s\n", c.ok ? "ok  " : (c.unattainable ? "n/a " : "FAIL"), c.name.c_str(),
                  c.detail.c_str());
    if (r.status == Status::Fail) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
