#ifndef SLNZ_ACCEPTANCE_HPP
#define SLNZ_ACCEPTANCE_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace slnz {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0;
    double budget_seconds = 0;
    std::string detail;
};

// The full verification battery. quick shrinks sweep sizes (same pass/fail
// semantics, smaller samples); seed feeds the randomized batteries.
std::vector<CriterionResult> run_acceptance(bool quick = false, std::uint64_t seed = 20240901);

// One line per criterion; returns 0 when everything passed.
int print_acceptance(std::ostream& os, const std::vector<CriterionResult>& results);

} // namespace slnz

#endif
