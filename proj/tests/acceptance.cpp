// Runs every acceptance criterion at its pinned threshold; one line each.
#include <cstdio>

#include "hsm/selfcheck.hpp"

int main() {
  int failed = 0;
  for (int id = 1; id <= static_cast<int>(hsm::selfcheck_suite().size()); ++id) {
    const hsm::CheckEntry e = hsm::run_check(id);
    std::printf("%s\n", hsm::format_entry(e).c_str());
    std::fflush(stdout);
    failed += !e.pass;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
