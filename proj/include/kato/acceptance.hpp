#pragma once

#include "kato/experiments.hpp"

#include <functional>
#include <set>
#include <string>

namespace kato {

struct AcceptanceCheck {
    int number = 0;
    std::string title;
    double budget_seconds = 0.0;
};

// The thirteen checks, in order, with their runtime budgets.
const std::vector<AcceptanceCheck>& acceptance_checks();

struct VerifyOptions {
    std::set<int> only;  // empty runs every check
    std::function<void(const Criterion&)> on_result;  // called as each check finishes
};

// Each criterion id is "C<k>"; a check passes when its measurement meets the
// threshold and it finished within its budget.
Report verify_all(const VerifyOptions& opt = {});

// "C6 PASS title: detail"
std::string format_criterion(const Criterion& c);

}  // namespace kato
