/**
 * Property suites with independent oracles, shared by the acceptance
 * binary and "cekit check all".  Reports carry no timings, so two runs with
 * the same seed print the same bytes.
 */

#ifndef CEKIT_ACCEPTANCE_HPP
#define CEKIT_ACCEPTANCE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace cekit {

struct SuiteConfig
{
    std::uint64_t seed = 7;
    int instances = 0;  // 0: the full counts; otherwise every randomized loop runs this many times
};

struct CriterionResult
{
    int id = 0;
    std::string title;
    bool pass = false;
    long checked = 0;    // instances examined
    std::string detail;  // first failure
};

/** Ids of the library suites, 1..9. */
std::vector<int> library_criteria();

CriterionResult run_criterion(int id, const SuiteConfig& config);

/** "criterion 3 (homotopy classes): PASS, 50 instances" */
std::string format(const CriterionResult& r);

}  // namespace cekit

#endif
