// Runs the acceptance catalog and prints one verdict line per criterion.
// Exit code is the number of failing criteria.

#include <cstdio>

#include "isodisplay/acceptance.hpp"

int main() {
    auto results = isodisplay::acceptance::run_all();
    int failures = 0;
    for (const auto& r : results) {
        std::printf("CRITERION %2d: %s  [%6.2fs]  %s\n    %s\n", r.id,
                    r.pass ? "PASS" : "FAIL", r.seconds, r.name.c_str(), r.detail.c_str());
        if (!r.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures,
                results.size());
    return failures;
}
