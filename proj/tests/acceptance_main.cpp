// Acceptance gate: runs every shipped criterion and prints one verdict line
// per criterion as it completes.  Exits nonzero if any criterion fails so
// the suite gates CI.

#include <cstdio>

#include "fraclab/acceptance.hpp"

int main() {
    int failures = 0;
    for (int id = 1; id <= fraclab::kCriteria; ++id) {
        const auto r = fraclab::run_criterion(id);
        std::printf("[%s] criterion %2d %-28s (%6.1fs) %s\n",
                    r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.seconds, r.detail.c_str());
        std::fflush(stdout);
        if (!r.passed) ++failures;
    }
    std::printf("%d/%d criteria passed\n", fraclab::kCriteria - failures,
                fraclab::kCriteria);
    return failures == 0 ? 0 : 1;
}
