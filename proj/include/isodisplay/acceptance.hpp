#pragma once

#include <string>
#include <vector>

namespace isodisplay::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

// The acceptance catalog, one entry per criterion, in order. Tolerances and
// runtime budgets are pinned in code.
std::vector<CriterionResult> run_all();

CriterionResult run_criterion(int id);

}  // namespace isodisplay::acceptance
