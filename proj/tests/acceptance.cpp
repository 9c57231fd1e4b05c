// Runs every verification suite once at a fixed seed and prints one
// PASS/FAIL line per suite, enforcing the per-suite wall-time budget.

#include <cstdio>
#include <string>
#include <vector>

#include <nam/suites.hpp>

int main() {
    const std::uint64_t seed = 42;
    // seconds allotted per suite, in registry order
    const std::vector<double> budget = {10, 10, 30, 60, 120, 30, 60, 30, 30, 60};
    const auto names = nam::suite_names();
    int failures = 0;
    for (size_t i = 0; i < names.size(); ++i) {
        nam::Report r;
        std::string detail;
        bool ok = false;
        try {
            r = nam::run_suite(names[i], seed);
            bool in_budget = r.wall_ms < budget[i] * 1000.0;
            ok = r.ok() && in_budget;
            char buf[128];
            std::snprintf(buf, sizeof buf, "%d/%zu cases, %.0f ms (budget %.0f s)", r.passed(),
                          r.cases.size(), r.wall_ms, budget[i]);
            detail = buf;
            if (!in_budget) detail += " [over budget]";
            if (!r.ok()) {
                for (const auto& c : r.cases)
                    if (!c.pass) {
                        detail += " first failure: " + c.id + " got " + c.got;
                        break;
                    }
            }
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("%s %-18s %s\n", ok ? "PASS" : "FAIL", names[i].c_str(), detail.c_str());
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
