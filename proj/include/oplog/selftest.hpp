#pragma once

#include <string>
#include <utility>
#include <vector>

namespace oplog::selftest {

// One executed check. `criterion` groups checks under the numbered gates the
// suite is organized around (0 = standalone invariant). `value` is the
// measured quantity that was compared against `threshold`; the comparison
// direction lives in `note` when it is not "value <= threshold".
struct CheckResult {
    std::string name;
    int criterion = 0;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string note;
};

struct Outcome {
    std::vector<CheckResult> checks;
    std::vector<std::pair<int, double>> criterion_seconds;
    double total_seconds = 0.0;

    bool all_pass() const;
    std::size_t failures() const;
};

// Runs the whole deterministic suite (fixed seeds and sizes). Never throws;
// a check that raises is recorded as a failure carrying the error text.
Outcome run_all_checks();

}  // namespace oplog::selftest
