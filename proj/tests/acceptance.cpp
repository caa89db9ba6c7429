// Acceptance gate: one pass/fail line per numbered criterion. The invariant
// suite runs twice so the final criterion can compare the two outcomes bit
// for bit and hold the total runtime to its budget.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <string>
#include <vector>

#include "oplog/io.hpp"
#include "oplog/selftest.hpp"

namespace {

bool bits_equal(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

}  // namespace

int main() {
    using oplog::selftest::Outcome;
    const Outcome first = oplog::selftest::run_all_checks();
    const Outcome second = oplog::selftest::run_all_checks();

    const std::map<int, const char*> labels = {
        {1, "contour calculus reproduces holomorphic functions"},
        {2, "shifted logarithm round-trips through the exponential"},
        {3, "representation identities hold on commuting families"},
        {4, "singular propagators are reported, never inverted"},
        {5, "finite differences recover the pre-generator"},
        {6, "transport solves agree along both directions"},
        {7, "heat marches forward and refuses the sideways sweep"},
        {8, "reslicing exposes the rough direction"},
        {9, "quadrature error halves with the node count"},
    };
    const std::map<int, double> budgets = {
        {1, 5.0}, {2, 20.0}, {3, 30.0}, {4, 10.0}, {6, 60.0}};

    std::map<int, double> seconds;
    for (const auto& [crit, secs] : first.criterion_seconds) seconds[crit] += secs;

    bool all_pass = true;
    std::vector<std::string> complaints;

    const auto complain = [&](const oplog::selftest::CheckResult& c) {
        complaints.push_back("check " + c.name + ": value=" + oplog::io::fmt17(c.value) +
                             " bound=" + oplog::io::fmt17(c.threshold) +
                             (c.note.empty() ? "" : " (" + c.note + ")"));
    };

    for (int crit = 1; crit <= 9; ++crit) {
        std::size_t n = 0;
        bool ok = true;
        for (const auto& c : first.checks)
            if (c.criterion == crit) {
                ++n;
                if (!c.pass) {
                    ok = false;
                    complain(c);
                }
            }
        if (budgets.count(crit) && seconds[crit] > budgets.at(crit)) {
            ok = false;
            complaints.push_back("criterion " + std::to_string(crit) + " took " +
                                 oplog::io::fmt17(seconds[crit]) + " s, budget " +
                                 oplog::io::fmt17(budgets.at(crit)) + " s");
        }
        std::printf("[%s] criterion %d: %s (%zu checks, %.2f s)\n", ok ? "PASS" : "FAIL",
                    crit, labels.at(crit), n, seconds[crit]);
        all_pass = all_pass && ok;
    }

    // criterion 10: the library invariants hold, two full runs agree bit for
    // bit, and one run fits the overall budget
    std::size_t n10 = 0;
    bool ok10 = true;
    for (const auto& c : first.checks)
        if (c.criterion == 0) {
            ++n10;
            if (!c.pass) {
                ok10 = false;
                complain(c);
            }
        }
    if (first.checks.size() != second.checks.size()) {
        ok10 = false;
        complaints.push_back("rerun produced a different number of checks");
    } else {
        for (std::size_t i = 0; i < first.checks.size(); ++i) {
            const auto& a = first.checks[i];
            const auto& b = second.checks[i];
            if (a.name != b.name || a.pass != b.pass || !bits_equal(a.value, b.value) ||
                !bits_equal(a.threshold, b.threshold)) {
                ok10 = false;
                complaints.push_back("rerun diverged at check " + a.name + ": " +
                                     oplog::io::fmt17(a.value) + " vs " +
                                     oplog::io::fmt17(b.value));
            }
        }
    }
    if (first.total_seconds > 120.0) {
        ok10 = false;
        complaints.push_back("full run took " + oplog::io::fmt17(first.total_seconds) +
                             " s, budget 120 s");
    }
    std::printf("[%s] criterion 10: reruns agree bitwise and invariants hold "
                "(%zu checks, %.2f s)\n",
                ok10 ? "PASS" : "FAIL", n10, seconds[0]);
    all_pass = all_pass && ok10;

    for (const auto& line : complaints) std::printf("  failed: %s\n", line.c_str());
    std::printf("acceptance: %s (%zu checks per run, %.2f s + %.2f s)\n",
                all_pass ? "PASS" : "FAIL", first.checks.size(), first.total_seconds,
                second.total_seconds);
    return all_pass ? 0 : 1;
}
