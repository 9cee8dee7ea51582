#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flb {

struct CheckResult {
    std::string id;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    // Diagnostics print measured numbers but carry no verdict.
    bool diagnostic = false;
};

enum class VerifyLevel { fast, full };

CheckResult check_oracle_equivalence(int max_n = 12);
CheckResult check_chain_inequalities();
CheckResult check_edgeworth_rate();
CheckResult check_strong_large_deviation();
// full adds the n = 1e5 binomial H_min vs gs1 comparison.
CheckResult check_expansion_convergence(bool full = true);
CheckResult check_figures();
CheckResult check_matched_first_order();
CheckResult check_bpsk_quadrature();

CheckResult diagnose_edgeworth_nonlattice();
CheckResult diagnose_ht_nonlattice();

std::vector<CheckResult> run_checks(VerifyLevel level);

// One line per check: "PASS <id> <title>: <detail>"; diagnostics print "INFO".
void print_report(std::ostream& os, const std::vector<CheckResult>& results);
bool all_passed(const std::vector<CheckResult>& results);

}  // namespace flb
