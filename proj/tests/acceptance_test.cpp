#include <cstdio>

#include "acceptance.hpp"

// Full-resolution verification suite: one pass/fail line per criterion.
int main() {
    std::printf("running the ten-point verification suite (full resolution)\n");
    auto results = hbm::acceptance::run_suite({.reduced = false});
    const bool ok = hbm::acceptance::print_report(results);
    return ok ? 0 : 3;
}
