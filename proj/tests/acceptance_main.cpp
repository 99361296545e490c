// Acceptance gate: runs the numbered criteria and prints one line per
// criterion. Exit status is the number of failed criteria.

#include <cstdio>
#include <string>
#include <vector>

#include "coverwalk/acceptance.hpp"

int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));

    coverwalk::SuiteResult suite = coverwalk::run_suite(ids);
    int failed = 0;
    for (const auto& c : suite.criteria) {
        std::printf("criterion %2d  %-42s %s  (%ld checks, %.2fs)\n", c.id, c.name.c_str(),
                    c.pass ? "PASS" : "FAIL", c.checks, c.seconds);
        if (!c.pass) {
            ++failed;
            for (const auto& d : c.details) std::printf("    %s\n", d.c_str());
        }
    }
    std::printf("%s\n", suite.all_pass ? "all criteria pass" : "some criteria fail");
    return failed;
}
